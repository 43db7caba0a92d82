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

#ifndef SCHC_RULES_HPP_
#define SCHC_RULES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "schc/bits.hpp"
#include "schc/packet.hpp"

namespace schc {

enum class MatchOp : uint8_t { kEqual, kIgnore };

enum class CdAction : uint8_t {
    kNotSent,
    kValueSent,
    kCompLength,
    kCompChecksum,
    kDevIidFromDeviceId,
};

enum class DirIndicator : uint8_t { kUp, kDown, kBidirectional };

const char* match_op_name(MatchOp op);
const char* cd_action_name(CdAction a);
const char* dir_indicator_name(DirIndicator d);

/// One rule row: which field, how to match it, and how to rebuild it.
struct FieldDescriptor {
    FieldId field = FieldId::kIpv6Version;
    uint32_t position = 0;
    DirIndicator direction = DirIndicator::kBidirectional;
    std::optional<BitString> target;
    MatchOp op = MatchOp::kEqual;
    CdAction action = CdAction::kNotSent;

    bool operator==(const FieldDescriptor& other) const = default;
};

/// A rule scoped to a single layer's header; the building block of a
/// layered context.
struct LayerRule {
    uint32_t local_id = 0;
    Layer layer = Layer::kNetwork;
    std::vector<FieldDescriptor> fields;

    bool same_descriptors(const LayerRule& other) const
    {
        return layer == other.layer && fields == other.fields;
    }
};

/// A rule spanning the whole header chain of a flow.
struct FlatRule {
    uint32_t rule_id = 0;
    std::vector<FieldDescriptor> fields;
};

/// Bit budget of the compressed prefix: dispatch, then the rule ID, which in
/// layered mode splits into ALC | TLC | NLC segments (most significant
/// first). The all-ones value of each segment is reserved; the all-ones
/// full rule ID marks an uncompressed packet.
struct RuleIdLayout {
    uint32_t dispatch_bits = 3;
    uint32_t dispatch_value = 0b101;  // unused 6LoWPAN dispatch region
    uint32_t total_rule_bits = 5;
    uint32_t alc_bits = 1;
    uint32_t tlc_bits = 2;
    uint32_t nlc_bits = 2;

    uint32_t reserved_rule_id() const { return (1u << total_rule_bits) - 1; }
    uint32_t segment_bits(Layer layer) const;
    uint32_t reserved_segment(Layer layer) const { return (1u << segment_bits(layer)) - 1; }
    /// Usable IDs per flat context / per layered segment (reserved excluded).
    uint32_t usable_flat_ids() const { return reserved_rule_id(); }
    uint32_t usable_segment_ids(Layer layer) const { return reserved_segment(layer); }
};

struct LayeredContext {
    std::vector<LayerRule> nlc;
    std::vector<LayerRule> tlc;
    std::vector<LayerRule> alc;
    RuleIdLayout layout;

    const std::vector<LayerRule>& rules_for(Layer layer) const;
    const LayerRule* find(Layer layer, uint32_t local_id) const;
};

struct FlatContext {
    std::vector<FlatRule> rules;
    RuleIdLayout layout;

    const FlatRule* find(uint32_t rule_id) const;
};

/// Either context kind behind one handle; what the loader returns.
struct Context {
    std::variant<FlatContext, LayeredContext> value;

    bool layered() const { return std::holds_alternative<LayeredContext>(value); }
    const RuleIdLayout& layout() const;
    FlatContext& flat() { return std::get<FlatContext>(value); }
    const FlatContext& flat() const { return std::get<FlatContext>(value); }
    LayeredContext& layered_ctx() { return std::get<LayeredContext>(value); }
    const LayeredContext& layered_ctx() const { return std::get<LayeredContext>(value); }
};

/// Packs segment values into a rule-ID bit string, ALC | TLC | NLC.
BitString encode_rule_id(const RuleIdLayout& layout, uint32_t alc, uint32_t tlc, uint32_t nlc);

struct RuleIdSegments {
    uint32_t alc = 0;
    uint32_t tlc = 0;
    uint32_t nlc = 0;
};

/// Exact inverse of encode_rule_id.
RuleIdSegments decode_rule_id(const RuleIdLayout& layout, const BitString& bits);

/// One failed structural invariant. Violations are data, not exceptions.
struct Violation {
    std::string rule;
    std::string field;
    std::string invariant;

    std::string to_string() const;
};

std::vector<Violation> validate_context(const FlatContext& ctx);
std::vector<Violation> validate_context(const LayeredContext& ctx);
std::vector<Violation> validate_context(const Context& ctx);

/// Cross-product flat equivalent of a layered context: one flat rule per
/// maximal consistent (NLC, TLC, ALC) chain, descriptor lists concatenated
/// in layer order. Used for differential testing of the two engines.
FlatContext flatten(const LayeredContext& layered);

size_t descriptor_count(const FlatContext& ctx);
size_t descriptor_count(const LayeredContext& ctx);
size_t descriptor_count(const Context& ctx);
size_t rule_count(const Context& ctx);

/// The ordered field set a complete rule must cover for a given header.
std::vector<FieldId> header_fields(Layer layer, bool udp_transport);

/// True when the descriptors cover UDP fields (as opposed to ICMPv6 ones).
bool covers_udp(const std::vector<FieldDescriptor>& fields);

} // namespace schc

#endif // SCHC_RULES_HPP_
