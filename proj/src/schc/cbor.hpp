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

#ifndef SCHC_CBOR_HPP_
#define SCHC_CBOR_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace schc {

/// Canonical RFC 7049 encoding of a JSON document tree: definite lengths,
/// minimal-width integer arguments, map keys sorted shortest-first then
/// bytewise. Encoding the same document always yields the same bytes.
///
/// Supported value kinds: null, bool, unsigned/signed integers, text
/// strings, arrays, and objects with text keys.
std::vector<uint8_t> cbor_encode_canonical(const nlohmann::json& value);

/// Strict decoder for the subset above. Rejects indefinite lengths,
/// duplicate map keys, unsupported major types, and trailing bytes.
nlohmann::json cbor_decode(std::span<const uint8_t> bytes);

} // namespace schc

#endif // SCHC_CBOR_HPP_
