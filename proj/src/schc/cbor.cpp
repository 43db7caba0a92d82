// Copyright 2026 The schc-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "schc/cbor.hpp"

#include <algorithm>
#include <string>

#include "schc/errors.hpp"

namespace schc {

namespace {

constexpr uint8_t kMajorUint = 0;
constexpr uint8_t kMajorNegInt = 1;
constexpr uint8_t kMajorText = 3;
constexpr uint8_t kMajorArray = 4;
constexpr uint8_t kMajorMap = 5;
constexpr uint8_t kMajorSimple = 7;

void write_head(std::vector<uint8_t>& out, uint8_t major, uint64_t arg)
{
    const uint8_t m = static_cast<uint8_t>(major << 5);
    if (arg < 24) {
        out.push_back(static_cast<uint8_t>(m | arg));
    } else if (arg <= 0xFF) {
        out.push_back(m | 24);
        out.push_back(static_cast<uint8_t>(arg));
    } else if (arg <= 0xFFFF) {
        out.push_back(m | 25);
        out.push_back(static_cast<uint8_t>(arg >> 8));
        out.push_back(static_cast<uint8_t>(arg));
    } else if (arg <= 0xFFFFFFFF) {
        out.push_back(m | 26);
        for (int i = 3; i >= 0; --i)
            out.push_back(static_cast<uint8_t>(arg >> (i * 8)));
    } else {
        out.push_back(m | 27);
        for (int i = 7; i >= 0; --i)
            out.push_back(static_cast<uint8_t>(arg >> (i * 8)));
    }
}

// RFC 7049 canonical key order: shorter encoded key first, then bytewise.
bool key_less(const std::string& a, const std::string& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

void encode_value(std::vector<uint8_t>& out, const nlohmann::json& v)
{
    using value_t = nlohmann::json::value_t;
    switch (v.type()) {
    case value_t::null:
        out.push_back(static_cast<uint8_t>(kMajorSimple << 5) | 22);
        break;
    case value_t::boolean:
        out.push_back(static_cast<uint8_t>((kMajorSimple << 5) | (v.get<bool>() ? 21 : 20)));
        break;
    case value_t::number_unsigned:
        write_head(out, kMajorUint, v.get<uint64_t>());
        break;
    case value_t::number_integer: {
        const int64_t n = v.get<int64_t>();
        if (n >= 0)
            write_head(out, kMajorUint, static_cast<uint64_t>(n));
        else
            write_head(out, kMajorNegInt, static_cast<uint64_t>(-(n + 1)));
        break;
    }
    case value_t::string: {
        const std::string& s = v.get_ref<const std::string&>();
        write_head(out, kMajorText, s.size());
        out.insert(out.end(), s.begin(), s.end());
        break;
    }
    case value_t::array:
        write_head(out, kMajorArray, v.size());
        for (const auto& item : v)
            encode_value(out, item);
        break;
    case value_t::object: {
        std::vector<const std::string*> keys;
        keys.reserve(v.size());
        for (auto it = v.begin(); it != v.end(); ++it)
            keys.push_back(&it.key());
        std::sort(keys.begin(), keys.end(),
                  [](const std::string* a, const std::string* b) { return key_less(*a, *b); });
        write_head(out, kMajorMap, keys.size());
        for (const std::string* k : keys) {
            write_head(out, kMajorText, k->size());
            out.insert(out.end(), k->begin(), k->end());
            encode_value(out, v.at(*k));
        }
        break;
    }
    default:
        raise(Errc::kInternal, "unsupported document value kind");
    }
}

class Decoder {
public:
    explicit Decoder(std::span<const uint8_t> bytes) : data_(bytes) {}

    nlohmann::json decode_all()
    {
        nlohmann::json v = decode_value(0);
        if (pos_ != data_.size())
            raise(Errc::kMalformedDocument, "trailing bytes after document");
        return v;
    }

private:
    static constexpr int kMaxDepth = 64;

    uint8_t next()
    {
        if (pos_ >= data_.size())
            raise(Errc::kMalformedDocument, "unexpected end of document");
        return data_[pos_++];
    }

    uint64_t read_arg(uint8_t info)
    {
        if (info < 24)
            return info;
        size_t n;
        switch (info) {
        case 24: n = 1; break;
        case 25: n = 2; break;
        case 26: n = 4; break;
        case 27: n = 8; break;
        default: raise(Errc::kMalformedDocument, "indefinite or reserved length");
        }
        uint64_t v = 0;
        for (size_t i = 0; i < n; ++i)
            v = (v << 8) | next();
        return v;
    }

    nlohmann::json decode_value(int depth)
    {
        if (depth > kMaxDepth)
            raise(Errc::kMalformedDocument, "document nesting too deep");
        const uint8_t initial = next();
        const uint8_t major = initial >> 5;
        const uint8_t info = initial & 0x1F;

        switch (major) {
        case kMajorUint: return read_arg(info);
        case kMajorNegInt: {
            const uint64_t arg = read_arg(info);
            if (arg > static_cast<uint64_t>(INT64_MAX))
                raise(Errc::kMalformedDocument, "negative integer out of range");
            return -static_cast<int64_t>(arg) - 1;
        }
        case kMajorText: {
            const uint64_t len = read_arg(info);
            if (len > data_.size() - pos_)
                raise(Errc::kMalformedDocument, "text string runs past the end");
            std::string s(reinterpret_cast<const char*>(data_.data() + pos_),
                          static_cast<size_t>(len));
            pos_ += static_cast<size_t>(len);
            return s;
        }
        case kMajorArray: {
            const uint64_t len = read_arg(info);
            nlohmann::json arr = nlohmann::json::array();
            for (uint64_t i = 0; i < len; ++i)
                arr.push_back(decode_value(depth + 1));
            return arr;
        }
        case kMajorMap: {
            const uint64_t len = read_arg(info);
            nlohmann::json obj = nlohmann::json::object();
            for (uint64_t i = 0; i < len; ++i) {
                nlohmann::json key = decode_value(depth + 1);
                if (!key.is_string())
                    raise(Errc::kMalformedDocument, "map key is not a text string");
                const std::string& k = key.get_ref<const std::string&>();
                if (obj.contains(k))
                    raise(Errc::kMalformedDocument, "duplicate map key: " + k);
                obj[k] = decode_value(depth + 1);
            }
            return obj;
        }
        case kMajorSimple:
            switch (info) {
            case 20: return false;
            case 21: return true;
            case 22: return nullptr;
            default: raise(Errc::kMalformedDocument, "unsupported simple value");
            }
        default:
            raise(Errc::kMalformedDocument, "unsupported major type");
        }
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

} // namespace

std::vector<uint8_t> cbor_encode_canonical(const nlohmann::json& value)
{
    std::vector<uint8_t> out;
    encode_value(out, value);
    return out;
}

nlohmann::json cbor_decode(std::span<const uint8_t> bytes)
{
    return Decoder(bytes).decode_all();
}

} // namespace schc
