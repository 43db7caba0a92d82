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

#include "schc/engine.hpp"

#include <algorithm>

namespace schc {

namespace {

BitString all_ones(size_t width)
{
    BitString s;
    for (size_t i = 0; i < width; ++i)
        s.append_bit(true);
    return s;
}

BitString residue_for_fields(const std::vector<FieldDescriptor>& fields, const HeaderStack& stack)
{
    BitString residue;
    for (const auto& d : fields)
        if (d.action == CdAction::kValueSent)
            residue.append(get_field(stack, d.field, d.position));
    return residue;
}

CompressedPacket make_uncompressed(const RuleIdLayout& layout,
                                   const std::vector<uint8_t>& serialized, size_t header_octets)
{
    CompressedPacket pkt;
    pkt.dispatch = BitString::from_uint(layout.dispatch_value, layout.dispatch_bits);
    pkt.rule_id = all_ones(layout.total_rule_bits);
    pkt.residue = BitString::from_bytes(
        std::span<const uint8_t>(serialized.data(), header_octets));
    pkt.payload.assign(serialized.begin() + static_cast<ptrdiff_t>(header_octets),
                       serialized.end());
    return pkt;
}

struct RuleCoverage {
    bool udp = false;
    bool icmpv6 = false;
    bool coap = false;
};

RuleCoverage coverage_of(const std::vector<FieldDescriptor>& fields)
{
    RuleCoverage c;
    for (const auto& d : fields) {
        switch (field_layer(d.field)) {
        case Layer::kNetwork: break;
        case Layer::kTransport:
            if (d.field == FieldId::kIcmpv6Type || d.field == FieldId::kIcmpv6Code ||
                d.field == FieldId::kIcmpv6Checksum)
                c.icmpv6 = true;
            else
                c.udp = true;
            break;
        case Layer::kApplication: c.coap = true; break;
        }
    }
    return c;
}

// Applies a matched rule's decompression actions, consuming in-line values
// from the reader. Length and checksum recomputation is deferred until the
// payload is known.
void apply_descriptors(const std::vector<FieldDescriptor>& fields, BitReader& reader,
                       const DecompressionEnvironment& env, HeaderStack& stack,
                       std::vector<std::pair<FieldId, CdAction>>& pending)
{
    for (const auto& d : fields) {
        switch (d.action) {
        case CdAction::kNotSent:
            if (!d.target)
                raise(Errc::kContextInvalid, "not-sent descriptor without target");
            set_field(stack, d.field, *d.target);
            break;
        case CdAction::kValueSent:
            set_field(stack, d.field, reader.read_bits(field_width(d.field)));
            break;
        case CdAction::kCompLength:
        case CdAction::kCompChecksum:
            set_field(stack, d.field, BitString::from_uint(0, field_width(d.field)));
            pending.emplace_back(d.field, d.action);
            break;
        case CdAction::kDevIidFromDeviceId:
            set_field(stack, d.field, BitString::from_uint(env.device_iid, 64));
            break;
        }
    }
}

void finalize_stack(HeaderStack& stack, std::vector<uint8_t> payload,
                    const std::vector<std::pair<FieldId, CdAction>>& pending)
{
    stack.payload = std::move(payload);

    size_t after_network = (stack.has_udp() ? 8u : stack.has_icmpv6() ? 4u : 0u) +
                           (stack.application ? 4u : 0u) + stack.payload.size();
    if (stack.has_icmpv6())
        after_network += stack.icmpv6().body.size();
    stack.network.payload_length = static_cast<uint16_t>(after_network);
    if (stack.has_udp())
        stack.udp().length = static_cast<uint16_t>(after_network);

    for (const auto& [field, action] : pending) {
        if (action != CdAction::kCompChecksum)
            continue;
        if (field == FieldId::kUdpChecksum)
            stack.udp().checksum = compute_checksum(stack, ChecksumLayer::kUdp);
        else if (field == FieldId::kIcmpv6Checksum)
            stack.icmpv6().checksum = compute_checksum(stack, ChecksumLayer::kIcmpv6);
    }
}

// Reconstructs the header chain of a compressed frame, consuming exactly the
// residue bits. Shared by decompression and frame splitting.
HeaderStack walk_flat(const FlatRule& rule, BitReader& reader,
                      const DecompressionEnvironment& env,
                      std::vector<std::pair<FieldId, CdAction>>& pending)
{
    HeaderStack stack;
    stack.direction = env.direction;
    const RuleCoverage cov = coverage_of(rule.fields);
    if (cov.udp)
        stack.transport = UdpHeader{};
    else if (cov.icmpv6)
        stack.transport = Icmpv6Header{};
    if (cov.coap)
        stack.application = CoapHeader{};
    apply_descriptors(rule.fields, reader, env, stack, pending);
    return stack;
}

HeaderStack walk_layered(const LayeredContext& ctx, const RuleIdSegments& seg, BitReader& reader,
                         const DecompressionEnvironment& env,
                         std::vector<std::pair<FieldId, CdAction>>& pending)
{
    const RuleIdLayout& layout = ctx.layout;
    HeaderStack stack;
    stack.direction = env.direction;

    if (seg.nlc == layout.reserved_segment(Layer::kNetwork)) {
        stack.network = parse_ipv6_header(reader.read_bytes(40));
    } else {
        const LayerRule* rule = ctx.find(Layer::kNetwork, seg.nlc);
        if (!rule)
            raise(Errc::kUnknownRuleId, "NLC segment " + std::to_string(seg.nlc));
        apply_descriptors(rule->fields, reader, env, stack, pending);
    }

    const uint8_t nh = stack.network.next_header;
    const bool tlc_reserved = seg.tlc == layout.reserved_segment(Layer::kTransport);
    if (nh == kNextHeaderUdp || nh == kNextHeaderIcmpv6) {
        if (tlc_reserved) {
            if (nh == kNextHeaderUdp)
                stack.transport = parse_udp_header(reader.read_bytes(8));
            else
                stack.transport = parse_icmpv6_fixed(reader.read_bytes(4));
        } else {
            const LayerRule* rule = ctx.find(Layer::kTransport, seg.tlc);
            if (!rule)
                raise(Errc::kUnknownRuleId, "TLC segment " + std::to_string(seg.tlc));
            const bool rule_udp = covers_udp(rule->fields);
            if (rule_udp != (nh == kNextHeaderUdp))
                raise(Errc::kInconsistentChain, "TLC rule disagrees with next_header");
            if (rule_udp)
                stack.transport = UdpHeader{};
            else
                stack.transport = Icmpv6Header{};
            apply_descriptors(rule->fields, reader, env, stack, pending);
        }
    } else if (!tlc_reserved) {
        raise(Errc::kInconsistentChain, "TLC rule given but next_header carries no transport");
    }

    // A reserved ALC segment always means "no application header": packets
    // with an unmatched application layer take the whole-frame uncompressed
    // path instead, keeping this branch unambiguous.
    if (seg.alc != layout.reserved_segment(Layer::kApplication)) {
        const LayerRule* rule = ctx.find(Layer::kApplication, seg.alc);
        if (!rule)
            raise(Errc::kUnknownRuleId, "ALC segment " + std::to_string(seg.alc));
        if (!stack.has_udp())
            raise(Errc::kInconsistentChain, "ALC rule without a UDP transport");
        stack.application = CoapHeader{};
        apply_descriptors(rule->fields, reader, env, stack, pending);
    }
    return stack;
}

HeaderStack walk(const Context& ctx, const BitString& rule_bits, BitReader& reader,
                 const DecompressionEnvironment& env,
                 std::vector<std::pair<FieldId, CdAction>>& pending)
{
    if (!ctx.layered()) {
        const FlatRule* rule = ctx.flat().find(static_cast<uint32_t>(rule_bits.to_uint()));
        if (!rule)
            raise(Errc::kUnknownRuleId, "rule " + std::to_string(rule_bits.to_uint()));
        return walk_flat(*rule, reader, env, pending);
    }
    const RuleIdSegments seg = decode_rule_id(ctx.layout(), rule_bits);
    return walk_layered(ctx.layered_ctx(), seg, reader, env, pending);
}

} // namespace

bool CompressedPacket::uncompressed() const
{
    for (size_t i = 0; i < rule_id.bit_size(); ++i)
        if (!rule_id.bit_at(i))
            return false;
    return rule_id.bit_size() > 0;
}

std::vector<uint8_t> CompressedPacket::to_bytes() const
{
    BitString w = dispatch;
    w.append(rule_id);
    if (uncompressed())
        w.pad_to_octet();  // raw headers start aligned; the frame tail is the datagram verbatim
    w.append(residue);
    w.pad_to_octet();
    std::vector<uint8_t> out = w.bytes();
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

size_t compressed_size_octets(const CompressedPacket& pkt)
{
    const size_t prefix = pkt.dispatch.bit_size() + pkt.rule_id.bit_size();
    if (pkt.uncompressed())
        return (prefix + 7) / 8 + pkt.residue.bit_size() / 8;
    return (prefix + pkt.residue.bit_size() + 7) / 8;
}

bool match_field(const FieldDescriptor& desc, const BitString& value, Direction direction)
{
    if (desc.direction == DirIndicator::kUp && direction != Direction::kUp)
        return false;
    if (desc.direction == DirIndicator::kDown && direction != Direction::kDown)
        return false;
    if (desc.op == MatchOp::kIgnore)
        return true;
    if (!desc.target)
        raise(Errc::kContextInvalid, "equal descriptor without target");
    if (desc.target->bit_size() != value.bit_size())
        raise(Errc::kWidthMismatch, std::string("target width for ") + field_name(desc.field));
    return *desc.target == value;
}

bool match_rule(const FlatRule& rule, const HeaderStack& stack)
{
    const RuleCoverage cov = coverage_of(rule.fields);
    if (cov.udp != stack.has_udp() || cov.icmpv6 != stack.has_icmpv6() ||
        cov.coap != stack.application.has_value())
        return false;
    for (const auto& d : rule.fields)
        if (!match_field(d, get_field(stack, d.field, d.position), stack.direction))
            return false;
    return true;
}

bool match_rule(const LayerRule& rule, const HeaderStack& stack)
{
    switch (rule.layer) {
    case Layer::kNetwork: break;
    case Layer::kTransport: {
        const bool rule_udp = covers_udp(rule.fields);
        if (rule_udp && !stack.has_udp())
            return false;
        if (!rule_udp && !stack.has_icmpv6())
            return false;
        break;
    }
    case Layer::kApplication:
        if (!stack.application)
            return false;
        break;
    }
    for (const auto& d : rule.fields)
        if (!match_field(d, get_field(stack, d.field, d.position), stack.direction))
            return false;
    return true;
}

size_t rule_residue_bits(const std::vector<FieldDescriptor>& fields)
{
    size_t bits = 0;
    for (const auto& d : fields)
        if (d.action == CdAction::kValueSent)
            bits += field_width(d.field);
    return bits;
}

std::optional<FlatSelection> select_rule_flat(const FlatContext& ctx, const HeaderStack& stack)
{
    std::optional<FlatSelection> best;
    for (const auto& rule : ctx.rules) {
        if (!match_rule(rule, stack))
            continue;
        const size_t bits = rule_residue_bits(rule.fields);
        if (!best || bits < best->residue_bits ||
            (bits == best->residue_bits && rule.rule_id < best->rule_id))
            best = FlatSelection{rule.rule_id, bits};
    }
    return best;
}

LayeredSelection select_rule_layered(const LayeredContext& ctx, const HeaderStack& stack)
{
    auto pick = [&](Layer layer, bool present) -> std::optional<uint32_t> {
        if (!present)
            return std::nullopt;
        std::optional<uint32_t> best_id;
        size_t best_bits = 0;
        for (const auto& rule : ctx.rules_for(layer)) {
            if (!match_rule(rule, stack))
                continue;
            const size_t bits = rule_residue_bits(rule.fields);
            if (!best_id || bits < best_bits || (bits == best_bits && rule.local_id < *best_id)) {
                best_id = rule.local_id;
                best_bits = bits;
            }
        }
        return best_id;
    };
    LayeredSelection sel;
    sel.nlc = pick(Layer::kNetwork, true);
    sel.tlc = pick(Layer::kTransport, stack.transport.has_value());
    sel.alc = pick(Layer::kApplication, stack.application.has_value());
    return sel;
}

CompressedPacket compress(const FlatContext& ctx, const HeaderStack& stack)
{
    const std::vector<uint8_t> serialized = serialize_stack(stack);
    const size_t header_octets = stack.header_octets();

    const auto sel = select_rule_flat(ctx, stack);
    if (!sel)
        return make_uncompressed(ctx.layout, serialized, header_octets);

    CompressedPacket pkt;
    pkt.dispatch = BitString::from_uint(ctx.layout.dispatch_value, ctx.layout.dispatch_bits);
    pkt.rule_id = BitString::from_uint(sel->rule_id, ctx.layout.total_rule_bits);
    pkt.residue = residue_for_fields(ctx.find(sel->rule_id)->fields, stack);
    pkt.payload.assign(serialized.begin() + static_cast<ptrdiff_t>(header_octets),
                       serialized.end());
    return pkt;
}

CompressedPacket compress(const LayeredContext& ctx, const HeaderStack& stack)
{
    const RuleIdLayout& layout = ctx.layout;
    const std::vector<uint8_t> serialized = serialize_stack(stack);
    const size_t header_octets = stack.header_octets();

    const LayeredSelection sel = select_rule_layered(ctx, stack);
    const bool nothing_matched = !sel.nlc && !sel.tlc && !sel.alc;
    const bool app_unmatched = stack.application && !sel.alc;
    if (nothing_matched || app_unmatched)
        return make_uncompressed(layout, serialized, header_octets);

    CompressedPacket pkt;
    pkt.dispatch = BitString::from_uint(layout.dispatch_value, layout.dispatch_bits);
    pkt.rule_id = encode_rule_id(
        layout, sel.alc.value_or(layout.reserved_segment(Layer::kApplication)),
        sel.tlc.value_or(layout.reserved_segment(Layer::kTransport)),
        sel.nlc.value_or(layout.reserved_segment(Layer::kNetwork)));

    std::span<const uint8_t> raw(serialized);
    if (sel.nlc)
        pkt.residue.append(residue_for_fields(ctx.find(Layer::kNetwork, *sel.nlc)->fields, stack));
    else
        pkt.residue.append_bytes(raw.subspan(0, 40));

    if (stack.transport) {
        const size_t tsize = stack.has_udp() ? 8 : 4;
        if (sel.tlc)
            pkt.residue.append(
                residue_for_fields(ctx.find(Layer::kTransport, *sel.tlc)->fields, stack));
        else
            pkt.residue.append_bytes(raw.subspan(40, tsize));
    }

    if (stack.application)
        pkt.residue.append(
            residue_for_fields(ctx.find(Layer::kApplication, *sel.alc)->fields, stack));

    pkt.payload.assign(serialized.begin() + static_cast<ptrdiff_t>(header_octets),
                       serialized.end());
    return pkt;
}

CompressedPacket compress(const Context& ctx, const HeaderStack& stack)
{
    return ctx.layered() ? compress(ctx.layered_ctx(), stack) : compress(ctx.flat(), stack);
}

HeaderStack decompress_bytes(const Context& ctx, std::span<const uint8_t> bytes,
                             const DecompressionEnvironment& env)
{
    const RuleIdLayout& layout = ctx.layout();
    if (env.l2_payload_length && *env.l2_payload_length < bytes.size())
        raise(Errc::kInvalidParams, "L2 length signal below frame size");

    BitReader reader(bytes);
    if (reader.read_uint(layout.dispatch_bits) != layout.dispatch_value)
        raise(Errc::kDispatchMismatch, "frame does not carry the SCHC dispatch");
    const BitString rule_bits = reader.read_bits(layout.total_rule_bits);

    if (rule_bits.to_uint() == (1u << layout.total_rule_bits) - 1) {
        // Reserved ID: the rest of the frame is the original datagram.
        return parse_stack(reader.remaining_bytes(), env.direction);
    }

    std::vector<std::pair<FieldId, CdAction>> pending;
    HeaderStack stack = walk(ctx, rule_bits, reader, env, pending);
    finalize_stack(stack, reader.remaining_bytes(), pending);
    return stack;
}

HeaderStack decompress(const Context& ctx, const CompressedPacket& pkt,
                       const DecompressionEnvironment& env)
{
    const std::vector<uint8_t> bytes = pkt.to_bytes();
    return decompress_bytes(ctx, bytes, env);
}

HeaderStack decompress(const FlatContext& ctx, const CompressedPacket& pkt,
                       const DecompressionEnvironment& env)
{
    Context c{ctx};
    return decompress(c, pkt, env);
}

HeaderStack decompress(const LayeredContext& ctx, const CompressedPacket& pkt,
                       const DecompressionEnvironment& env)
{
    Context c{ctx};
    return decompress(c, pkt, env);
}

CompressedPacket parse_compressed(const Context& ctx, std::span<const uint8_t> bytes)
{
    const RuleIdLayout& layout = ctx.layout();

    BitReader measure(bytes);
    if (measure.read_uint(layout.dispatch_bits) != layout.dispatch_value)
        raise(Errc::kDispatchMismatch, "frame does not carry the SCHC dispatch");
    const BitString rule_bits = measure.read_bits(layout.total_rule_bits);
    const size_t prefix_bits = layout.dispatch_bits + layout.total_rule_bits;

    CompressedPacket pkt;
    pkt.dispatch = BitString::from_uint(layout.dispatch_value, layout.dispatch_bits);
    pkt.rule_id = rule_bits;

    if (rule_bits.to_uint() == (1u << layout.total_rule_bits) - 1) {
        const std::vector<uint8_t> rest = measure.remaining_bytes();
        const HeaderStack stack = parse_stack(rest, Direction::kUp);
        const size_t header_octets = stack.header_octets();
        pkt.residue = BitString::from_bytes(
            std::span<const uint8_t>(rest.data(), header_octets));
        pkt.payload.assign(rest.begin() + static_cast<ptrdiff_t>(header_octets), rest.end());
        return pkt;
    }

    std::vector<std::pair<FieldId, CdAction>> pending;
    DecompressionEnvironment dummy;
    (void)walk(ctx, rule_bits, measure, dummy, pending);
    const size_t residue_bits = measure.bit_position() - prefix_bits;

    BitReader reader(bytes);
    (void)reader.read_bits(prefix_bits);
    pkt.residue = reader.read_bits(residue_bits);
    pkt.payload = reader.remaining_bytes();
    return pkt;
}

} // namespace schc
