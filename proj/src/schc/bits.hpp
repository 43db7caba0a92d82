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

#ifndef SCHC_BITS_HPP_
#define SCHC_BITS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "schc/errors.hpp"

namespace schc {

/// A sequence of bits, MSB-first within each stored octet. Used for header
/// field values, rule-ID segments and compression residues, none of which
/// are octet-aligned in general.
class BitString {
public:
    BitString() = default;

    /// The low `width` bits of `value`, most-significant bit first.
    static BitString from_uint(uint64_t value, size_t width);

    /// `nbits` bits taken MSB-first from `bytes`.
    static BitString from_bytes(std::span<const uint8_t> bytes, size_t nbits);

    static BitString from_bytes(std::span<const uint8_t> bytes)
    {
        return from_bytes(bytes, bytes.size() * 8);
    }

    void append_uint(uint64_t value, size_t width);
    void append(const BitString& other);
    void append_bytes(std::span<const uint8_t> bytes);
    void append_bit(bool bit) { append_uint(bit ? 1 : 0, 1); }

    /// Zero-pads to the next octet boundary. Returns the number of pad bits.
    size_t pad_to_octet();

    size_t bit_size() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    bool bit_at(size_t index) const;

    /// Value of the whole string as an unsigned integer (width must be <= 64).
    uint64_t to_uint() const;

    /// Octets holding the bits, final partial octet zero-padded on the right.
    std::vector<uint8_t> bytes() const { return data_; }

    std::string to_binary_string() const;
    std::string to_hex_string() const;

    bool operator==(const BitString& other) const;

private:
    std::vector<uint8_t> data_;
    size_t bits_ = 0;
};

/// MSB-first reader over an octet buffer.
class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> data) : data_(data) {}

    uint64_t read_uint(size_t width);
    BitString read_bits(size_t nbits);
    std::vector<uint8_t> read_bytes(size_t nbytes);

    /// Peeks `width` bits without consuming them.
    uint64_t peek_uint(size_t width) const;

    /// Skips forward to the next octet boundary.
    void align_to_octet();

    size_t bits_remaining() const { return data_.size() * 8 - pos_; }
    size_t bit_position() const { return pos_; }

    /// All octets from the current (octet-aligned) position to the end.
    std::vector<uint8_t> remaining_bytes();

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

} // namespace schc

#endif // SCHC_BITS_HPP_
