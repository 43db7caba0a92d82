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

#include "schc/bits.hpp"

#include <cstdio>

namespace schc {

BitString BitString::from_uint(uint64_t value, size_t width)
{
    BitString s;
    s.append_uint(value, width);
    return s;
}

BitString BitString::from_bytes(std::span<const uint8_t> bytes, size_t nbits)
{
    if (nbits > bytes.size() * 8)
        raise(Errc::kWidthMismatch, "bit count exceeds buffer");
    BitString s;
    s.data_.assign(bytes.begin(), bytes.begin() + static_cast<ptrdiff_t>((nbits + 7) / 8));
    s.bits_ = nbits;
    if (nbits % 8 != 0)
        s.data_.back() &= static_cast<uint8_t>(0xFF << (8 - nbits % 8));
    return s;
}

void BitString::append_uint(uint64_t value, size_t width)
{
    if (width > 64)
        raise(Errc::kWidthMismatch, "width exceeds 64 bits");
    if (width < 64 && (value >> width) != 0)
        raise(Errc::kWidthMismatch, "value does not fit width");
    for (size_t i = width; i-- > 0;) {
        bool bit = (value >> i) & 1;
        size_t bit_index = bits_ % 8;
        if (bit_index == 0)
            data_.push_back(0);
        if (bit)
            data_.back() |= static_cast<uint8_t>(0x80 >> bit_index);
        ++bits_;
    }
}

void BitString::append(const BitString& other)
{
    if (bits_ % 8 == 0 && !other.data_.empty()) {
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        bits_ += other.bits_;
        return;
    }
    for (size_t i = 0; i < other.bits_; ++i)
        append_bit(other.bit_at(i));
}

void BitString::append_bytes(std::span<const uint8_t> bytes)
{
    append(from_bytes(bytes));
}

size_t BitString::pad_to_octet()
{
    size_t pad = (8 - bits_ % 8) % 8;
    bits_ += pad;
    return pad;
}

bool BitString::bit_at(size_t index) const
{
    if (index >= bits_)
        raise(Errc::kWidthMismatch, "bit index out of range");
    return (data_[index / 8] >> (7 - index % 8)) & 1;
}

uint64_t BitString::to_uint() const
{
    if (bits_ > 64)
        raise(Errc::kWidthMismatch, "bit string wider than 64 bits");
    uint64_t v = 0;
    for (size_t i = 0; i < bits_; ++i)
        v = (v << 1) | (bit_at(i) ? 1 : 0);
    return v;
}

std::string BitString::to_binary_string() const
{
    std::string s;
    s.reserve(bits_);
    for (size_t i = 0; i < bits_; ++i)
        s.push_back(bit_at(i) ? '1' : '0');
    return s;
}

std::string BitString::to_hex_string() const
{
    std::string s;
    char buf[3];
    for (uint8_t b : data_) {
        std::snprintf(buf, sizeof buf, "%02x", b);
        s += buf;
    }
    return s;
}

bool BitString::operator==(const BitString& other) const
{
    return bits_ == other.bits_ && data_ == other.data_;
}

uint64_t BitReader::read_uint(size_t width)
{
    uint64_t v = peek_uint(width);
    pos_ += width;
    return v;
}

uint64_t BitReader::peek_uint(size_t width) const
{
    if (width > 64)
        raise(Errc::kWidthMismatch, "width exceeds 64 bits");
    if (width > bits_remaining())
        raise(Errc::kResidueUnderflow, "not enough bits");
    uint64_t v = 0;
    for (size_t i = 0; i < width; ++i) {
        size_t p = pos_ + i;
        v = (v << 1) | ((data_[p / 8] >> (7 - p % 8)) & 1);
    }
    return v;
}

BitString BitReader::read_bits(size_t nbits)
{
    if (nbits > bits_remaining())
        raise(Errc::kResidueUnderflow, "not enough bits");
    BitString s;
    for (size_t i = 0; i < nbits; ++i)
        s.append_bit(read_uint(1) != 0);
    return s;
}

std::vector<uint8_t> BitReader::read_bytes(size_t nbytes)
{
    if (nbytes * 8 > bits_remaining())
        raise(Errc::kResidueUnderflow, "not enough bits");
    std::vector<uint8_t> out(nbytes);
    for (size_t i = 0; i < nbytes; ++i)
        out[i] = static_cast<uint8_t>(read_uint(8));
    return out;
}

void BitReader::align_to_octet()
{
    pos_ = (pos_ + 7) / 8 * 8;
    if (pos_ > data_.size() * 8)
        pos_ = data_.size() * 8;
}

std::vector<uint8_t> BitReader::remaining_bytes()
{
    align_to_octet();
    std::vector<uint8_t> out(data_.begin() + static_cast<ptrdiff_t>(pos_ / 8), data_.end());
    pos_ = data_.size() * 8;
    return out;
}

} // namespace schc
