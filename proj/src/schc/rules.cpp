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

#include "schc/rules.hpp"

#include <algorithm>

namespace schc {

namespace {

const std::vector<FieldId> kIpv6Fields = {
    FieldId::kIpv6Version,    FieldId::kIpv6TrafficClass, FieldId::kIpv6FlowLabel,
    FieldId::kIpv6PayloadLength, FieldId::kIpv6NextHeader, FieldId::kIpv6HopLimit,
    FieldId::kIpv6SrcPrefix,  FieldId::kIpv6SrcIid,       FieldId::kIpv6DstPrefix,
    FieldId::kIpv6DstIid,
};

const std::vector<FieldId> kUdpFields = {
    FieldId::kUdpSrcPort, FieldId::kUdpDstPort, FieldId::kUdpLength, FieldId::kUdpChecksum,
};

const std::vector<FieldId> kIcmpv6Fields = {
    FieldId::kIcmpv6Type, FieldId::kIcmpv6Code, FieldId::kIcmpv6Checksum,
};

const std::vector<FieldId> kCoapFields = {
    FieldId::kCoapVersion, FieldId::kCoapType, FieldId::kCoapTokenLength,
    FieldId::kCoapCode,    FieldId::kCoapMessageId,
};

bool is_length_field(FieldId id)
{
    return id == FieldId::kIpv6PayloadLength || id == FieldId::kUdpLength;
}

bool is_checksum_field(FieldId id)
{
    return id == FieldId::kUdpChecksum || id == FieldId::kIcmpv6Checksum;
}

bool is_iid_field(FieldId id)
{
    return id == FieldId::kIpv6SrcIid || id == FieldId::kIpv6DstIid;
}

void check_descriptor(const FieldDescriptor& d, const std::string& rule_label,
                      std::vector<Violation>& out)
{
    const std::string fname = field_name(d.field);
    auto flag = [&](const std::string& what) { out.push_back({rule_label, fname, what}); };

    if (d.position != 0)
        flag("position out of range: modeled headers have a single instance");
    if (d.op == MatchOp::kEqual) {
        if (!d.target)
            flag("equal operator requires a target value");
        else if (d.target->bit_size() != field_width(d.field))
            flag("target value width differs from the field's natural width");
    }
    if (d.action == CdAction::kNotSent && d.op != MatchOp::kEqual)
        flag("not-sent requires the equal matching operator");
    if ((d.action == CdAction::kCompLength || d.action == CdAction::kCompChecksum ||
         d.action == CdAction::kDevIidFromDeviceId) &&
        d.op != MatchOp::kIgnore)
        flag("computed actions require the ignore matching operator");
    if (d.action == CdAction::kCompLength && !is_length_field(d.field))
        flag("comp-length applies only to length fields");
    if (d.action == CdAction::kCompChecksum && !is_checksum_field(d.field))
        flag("comp-checksum applies only to checksum fields");
    if (d.action == CdAction::kDevIidFromDeviceId && !is_iid_field(d.field))
        flag("dev-iid applies only to interface identifier fields");
}

bool fields_match_set(const std::vector<FieldDescriptor>& fields, size_t offset,
                      const std::vector<FieldId>& expected)
{
    if (fields.size() < offset + expected.size())
        return false;
    for (size_t i = 0; i < expected.size(); ++i)
        if (fields[offset + i].field != expected[i])
            return false;
    return true;
}

// A complete rule body covers IPv6, then optionally a full transport set,
// then optionally the CoAP set (UDP chains only). Returns false when the
// descriptor list has any other shape.
bool check_chain_coverage(const std::vector<FieldDescriptor>& fields, const std::string& label,
                          std::vector<Violation>& out)
{
    if (!fields_match_set(fields, 0, kIpv6Fields)) {
        out.push_back({label, "", "rule must start with the complete IPv6 field set in order"});
        return false;
    }
    size_t off = kIpv6Fields.size();
    if (off == fields.size())
        return true;
    bool udp = fields_match_set(fields, off, kUdpFields);
    bool icmp = fields_match_set(fields, off, kIcmpv6Fields);
    if (udp)
        off += kUdpFields.size();
    else if (icmp)
        off += kIcmpv6Fields.size();
    else {
        out.push_back({label, "", "transport descriptors must cover a full UDP or ICMPv6 header"});
        return false;
    }
    if (off == fields.size())
        return true;
    if (!udp || !fields_match_set(fields, off, kCoapFields) ||
        off + kCoapFields.size() != fields.size()) {
        out.push_back({label, "", "trailing descriptors must be the full CoAP set over UDP"});
        return false;
    }
    return true;
}

void check_layout(const RuleIdLayout& layout, bool layered, std::vector<Violation>& out)
{
    auto flag = [&](const std::string& what) { out.push_back({"layout", "", what}); };
    if (layout.total_rule_bits == 0 || layout.total_rule_bits > 16)
        flag("rule ID width must be between 1 and 16 bits");
    if (layout.dispatch_bits == 0 || layout.dispatch_bits > 8)
        flag("dispatch width must be between 1 and 8 bits");
    else if (layout.dispatch_value >> layout.dispatch_bits)
        flag("dispatch value does not fit its width");
    if (layered) {
        if (layout.alc_bits + layout.tlc_bits + layout.nlc_bits != layout.total_rule_bits)
            flag("segment widths must sum to the rule ID width");
        if (layout.alc_bits == 0 || layout.tlc_bits == 0 || layout.nlc_bits == 0)
            flag("every segment needs at least one bit");
    }
}

void check_layer_rules(const std::vector<LayerRule>& rules, Layer layer,
                       const RuleIdLayout& layout, const char* layer_label,
                       std::vector<Violation>& out)
{
    for (size_t i = 0; i < rules.size(); ++i) {
        const LayerRule& r = rules[i];
        const std::string label = std::string(layer_label) + " rule " + std::to_string(r.local_id);
        if (r.layer != layer)
            out.push_back({label, "", "rule stored under the wrong layer"});
        if (r.local_id >= layout.reserved_segment(layer))
            out.push_back({label, "", "local ID collides with the reserved segment value"});
        for (const auto& d : r.fields) {
            check_descriptor(d, label, out);
            if (field_layer(d.field) != layer)
                out.push_back({label, field_name(d.field), "field belongs to another layer"});
        }
        const std::vector<FieldId>* expected = nullptr;
        switch (layer) {
        case Layer::kNetwork: expected = &kIpv6Fields; break;
        case Layer::kTransport:
            expected = covers_udp(r.fields) ? &kUdpFields : &kIcmpv6Fields;
            break;
        case Layer::kApplication: expected = &kCoapFields; break;
        }
        if (!fields_match_set(r.fields, 0, *expected) || r.fields.size() != expected->size())
            out.push_back({label, "", "rule must cover every field of one header type in order"});
        for (size_t j = i + 1; j < rules.size(); ++j) {
            if (rules[j].local_id == r.local_id)
                out.push_back({label, "", "duplicate local ID within the layer"});
            if (rules[j].same_descriptors(r))
                out.push_back({label, "",
                               "descriptor-identical rule stored twice in one layer"});
        }
    }
}

} // namespace

const char* match_op_name(MatchOp op) { return op == MatchOp::kEqual ? "equal" : "ignore"; }

const char* cd_action_name(CdAction a)
{
    switch (a) {
    case CdAction::kNotSent: return "not-sent";
    case CdAction::kValueSent: return "value-sent";
    case CdAction::kCompLength: return "comp-length";
    case CdAction::kCompChecksum: return "comp-checksum";
    case CdAction::kDevIidFromDeviceId: return "dev-iid";
    }
    return "?";
}

const char* dir_indicator_name(DirIndicator d)
{
    switch (d) {
    case DirIndicator::kUp: return "up";
    case DirIndicator::kDown: return "down";
    case DirIndicator::kBidirectional: return "bi";
    }
    return "?";
}

uint32_t RuleIdLayout::segment_bits(Layer layer) const
{
    switch (layer) {
    case Layer::kNetwork: return nlc_bits;
    case Layer::kTransport: return tlc_bits;
    case Layer::kApplication: return alc_bits;
    }
    return 0;
}

const std::vector<LayerRule>& LayeredContext::rules_for(Layer layer) const
{
    switch (layer) {
    case Layer::kNetwork: return nlc;
    case Layer::kTransport: return tlc;
    case Layer::kApplication: return alc;
    }
    return nlc;
}

const LayerRule* LayeredContext::find(Layer layer, uint32_t local_id) const
{
    for (const auto& r : rules_for(layer))
        if (r.local_id == local_id)
            return &r;
    return nullptr;
}

const FlatRule* FlatContext::find(uint32_t rule_id) const
{
    for (const auto& r : rules)
        if (r.rule_id == rule_id)
            return &r;
    return nullptr;
}

const RuleIdLayout& Context::layout() const
{
    return layered() ? layered_ctx().layout : flat().layout;
}

BitString encode_rule_id(const RuleIdLayout& layout, uint32_t alc, uint32_t tlc, uint32_t nlc)
{
    auto check = [](uint32_t v, uint32_t bits, const char* what) {
        if (bits < 32 && (v >> bits) != 0)
            raise(Errc::kSegmentOverflow, std::string(what) + " segment value does not fit");
    };
    check(alc, layout.alc_bits, "ALC");
    check(tlc, layout.tlc_bits, "TLC");
    check(nlc, layout.nlc_bits, "NLC");
    BitString bits;
    bits.append_uint(alc, layout.alc_bits);
    bits.append_uint(tlc, layout.tlc_bits);
    bits.append_uint(nlc, layout.nlc_bits);
    return bits;
}

RuleIdSegments decode_rule_id(const RuleIdLayout& layout, const BitString& bits)
{
    if (bits.bit_size() != layout.total_rule_bits)
        raise(Errc::kWidthMismatch, "rule ID width differs from layout");
    std::vector<uint8_t> bytes = bits.bytes();
    BitReader r(bytes);
    RuleIdSegments seg;
    seg.alc = static_cast<uint32_t>(r.read_uint(layout.alc_bits));
    seg.tlc = static_cast<uint32_t>(r.read_uint(layout.tlc_bits));
    seg.nlc = static_cast<uint32_t>(r.read_uint(layout.nlc_bits));
    return seg;
}

std::string Violation::to_string() const
{
    std::string s = rule;
    if (!field.empty())
        s += " / " + field;
    return s + ": " + invariant;
}

std::vector<Violation> validate_context(const FlatContext& ctx)
{
    std::vector<Violation> out;
    check_layout(ctx.layout, false, out);
    for (size_t i = 0; i < ctx.rules.size(); ++i) {
        const FlatRule& r = ctx.rules[i];
        const std::string label = "rule " + std::to_string(r.rule_id);
        if (r.rule_id >= ctx.layout.reserved_rule_id())
            out.push_back({label, "", "rule ID collides with the reserved uncompressed ID"});
        for (const auto& d : r.fields)
            check_descriptor(d, label, out);
        check_chain_coverage(r.fields, label, out);
        for (size_t j = i + 1; j < ctx.rules.size(); ++j)
            if (ctx.rules[j].rule_id == r.rule_id)
                out.push_back({label, "", "duplicate rule ID"});
    }
    return out;
}

std::vector<Violation> validate_context(const LayeredContext& ctx)
{
    std::vector<Violation> out;
    check_layout(ctx.layout, true, out);
    check_layer_rules(ctx.nlc, Layer::kNetwork, ctx.layout, "NLC", out);
    check_layer_rules(ctx.tlc, Layer::kTransport, ctx.layout, "TLC", out);
    check_layer_rules(ctx.alc, Layer::kApplication, ctx.layout, "ALC", out);
    return out;
}

std::vector<Violation> validate_context(const Context& ctx)
{
    return ctx.layered() ? validate_context(ctx.layered_ctx()) : validate_context(ctx.flat());
}

FlatContext flatten(const LayeredContext& layered)
{
    FlatContext flat;
    flat.layout = layered.layout;

    auto sorted = [](std::vector<LayerRule> rules) {
        std::sort(rules.begin(), rules.end(),
                  [](const LayerRule& a, const LayerRule& b) { return a.local_id < b.local_id; });
        return rules;
    };
    const std::vector<LayerRule> nlc = sorted(layered.nlc);
    const std::vector<LayerRule> tlc = sorted(layered.tlc);
    const std::vector<LayerRule> alc = sorted(layered.alc);

    uint32_t next_id = 0;
    auto emit = [&](std::initializer_list<const LayerRule*> chain) {
        FlatRule r;
        r.rule_id = next_id++;
        for (const LayerRule* part : chain)
            r.fields.insert(r.fields.end(), part->fields.begin(), part->fields.end());
        flat.rules.push_back(std::move(r));
    };

    for (const LayerRule& n : nlc) {
        // The network rule's next-header row decides which transports chain.
        std::optional<uint64_t> pinned_nh;
        bool nh_open = true;
        for (const auto& d : n.fields) {
            if (d.field == FieldId::kIpv6NextHeader && d.op == MatchOp::kEqual && d.target) {
                pinned_nh = d.target->to_uint();
                nh_open = false;
            }
        }
        bool any_chain = false;
        for (const LayerRule& t : tlc) {
            const bool udp = covers_udp(t.fields);
            const uint64_t need = udp ? kNextHeaderUdp : kNextHeaderIcmpv6;
            if (!nh_open && pinned_nh != need)
                continue;
            any_chain = true;
            if (udp && !alc.empty()) {
                for (const LayerRule& a : alc)
                    emit({&n, &t, &a});
            } else {
                emit({&n, &t});
            }
        }
        if (!any_chain)
            emit({&n});
    }
    return flat;
}

size_t descriptor_count(const FlatContext& ctx)
{
    size_t n = 0;
    for (const auto& r : ctx.rules)
        n += r.fields.size();
    return n;
}

size_t descriptor_count(const LayeredContext& ctx)
{
    size_t n = 0;
    for (const auto* layer : {&ctx.nlc, &ctx.tlc, &ctx.alc})
        for (const auto& r : *layer)
            n += r.fields.size();
    return n;
}

size_t descriptor_count(const Context& ctx)
{
    return ctx.layered() ? descriptor_count(ctx.layered_ctx()) : descriptor_count(ctx.flat());
}

size_t rule_count(const Context& ctx)
{
    if (!ctx.layered())
        return ctx.flat().rules.size();
    const LayeredContext& l = ctx.layered_ctx();
    return l.nlc.size() + l.tlc.size() + l.alc.size();
}

std::vector<FieldId> header_fields(Layer layer, bool udp_transport)
{
    switch (layer) {
    case Layer::kNetwork: return kIpv6Fields;
    case Layer::kTransport: return udp_transport ? kUdpFields : kIcmpv6Fields;
    case Layer::kApplication: return kCoapFields;
    }
    return {};
}

bool covers_udp(const std::vector<FieldDescriptor>& fields)
{
    for (const auto& d : fields)
        if (field_layer(d.field) == Layer::kTransport)
            return d.field == FieldId::kUdpSrcPort || d.field == FieldId::kUdpDstPort ||
                   d.field == FieldId::kUdpLength || d.field == FieldId::kUdpChecksum;
    return false;
}

} // namespace schc
