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

#ifndef SCHC_ENGINE_HPP_
#define SCHC_ENGINE_HPP_

#include <optional>

#include "schc/packet.hpp"
#include "schc/rules.hpp"

namespace schc {

/// On-air frame: dispatch | rule ID | residue, padded to an octet boundary,
/// then the payload verbatim.
///
/// For the reserved all-ones rule ID the residue holds the full raw header
/// bytes and starts octet-aligned, so the remainder of the frame is the
/// original datagram verbatim. With the default 3+5-bit prefix the
/// alignment is a no-op.
struct CompressedPacket {
    BitString dispatch;
    BitString rule_id;
    BitString residue;
    std::vector<uint8_t> payload;

    bool uncompressed() const;
    std::vector<uint8_t> to_bytes() const;
};

/// Octet count of the header portion only (dispatch + rule ID + residue,
/// padded), excluding payload.
size_t compressed_size_octets(const CompressedPacket& pkt);

/// Out-of-band inputs the decompressor needs: the device identity for
/// dev-iid reconstruction and the link direction. `l2_payload_length`, when
/// given, is the lower layer's length signal and must cover the frame.
struct DecompressionEnvironment {
    uint64_t device_iid = 0;
    Direction direction = Direction::kUp;
    std::optional<size_t> l2_payload_length;
};

/// Per-field predicate: direction gate, then equal/ignore.
bool match_field(const FieldDescriptor& desc, const BitString& value, Direction direction);

/// A flat rule is usable only when it covers exactly the packet's header
/// chain and every descriptor matches.
bool match_rule(const FlatRule& rule, const HeaderStack& stack);

/// A layer rule matches when its layer is present with the right header
/// type and every descriptor matches.
bool match_rule(const LayerRule& rule, const HeaderStack& stack);

struct FlatSelection {
    uint32_t rule_id = 0;
    size_t residue_bits = 0;
};

/// Best-compression selection: minimum residue bit count, ties broken by
/// the lowest rule ID. nullopt when nothing matches (caller sends the
/// reserved ID).
std::optional<FlatSelection> select_rule_flat(const FlatContext& ctx, const HeaderStack& stack);

/// Independent best-rule choice per layer; nullopt marks the reserved
/// segment value (layer absent or nothing matched).
struct LayeredSelection {
    std::optional<uint32_t> nlc;
    std::optional<uint32_t> tlc;
    std::optional<uint32_t> alc;
};

LayeredSelection select_rule_layered(const LayeredContext& ctx, const HeaderStack& stack);

CompressedPacket compress(const FlatContext& ctx, const HeaderStack& stack);
CompressedPacket compress(const LayeredContext& ctx, const HeaderStack& stack);
CompressedPacket compress(const Context& ctx, const HeaderStack& stack);

HeaderStack decompress(const FlatContext& ctx, const CompressedPacket& pkt,
                       const DecompressionEnvironment& env);
HeaderStack decompress(const LayeredContext& ctx, const CompressedPacket& pkt,
                       const DecompressionEnvironment& env);
HeaderStack decompress(const Context& ctx, const CompressedPacket& pkt,
                       const DecompressionEnvironment& env);

/// One-shot wire-format decompression.
HeaderStack decompress_bytes(const Context& ctx, std::span<const uint8_t> bytes,
                             const DecompressionEnvironment& env);

/// Splits a wire frame into its parts. Needs the context because the
/// residue length is rule-dependent.
CompressedPacket parse_compressed(const Context& ctx, std::span<const uint8_t> bytes);

/// In-line bits a matched rule leaves in the residue.
size_t rule_residue_bits(const std::vector<FieldDescriptor>& fields);

} // namespace schc

#endif // SCHC_ENGINE_HPP_
