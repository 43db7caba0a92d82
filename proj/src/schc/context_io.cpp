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

#include "schc/context_io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "schc/cbor.hpp"

namespace schc {

namespace {

using nlohmann::json;

const json& need(const json& doc, const char* key)
{
    auto it = doc.find(key);
    if (it == doc.end())
        raise(Errc::kMalformedDocument, std::string("missing key: ") + key);
    return *it;
}

uint64_t need_uint(const json& doc, const char* key)
{
    const json& v = need(doc, key);
    if (!v.is_number_unsigned())
        raise(Errc::kMalformedDocument, std::string(key) + " must be an unsigned integer");
    return v.get<uint64_t>();
}

std::string need_string(const json& doc, const char* key)
{
    const json& v = need(doc, key);
    if (!v.is_string())
        raise(Errc::kMalformedDocument, std::string(key) + " must be a string");
    return v.get<std::string>();
}

const json& need_array(const json& doc, const char* key)
{
    const json& v = need(doc, key);
    if (!v.is_array())
        raise(Errc::kMalformedDocument, std::string(key) + " must be an array");
    return v;
}

std::string target_hex(const BitString& target)
{
    const size_t nbytes = (target.bit_size() + 7) / 8;
    const uint64_t v = target.to_uint();
    std::string s(nbytes * 2, '0');
    static const char* digits = "0123456789abcdef";
    for (size_t i = 0; i < nbytes; ++i) {
        const uint8_t b = static_cast<uint8_t>(v >> ((nbytes - 1 - i) * 8));
        s[i * 2] = digits[b >> 4];
        s[i * 2 + 1] = digits[b & 0x0F];
    }
    return s;
}

json layout_to_json(const RuleIdLayout& layout)
{
    return json{{"dispatch_bits", layout.dispatch_bits},
                {"dispatch_value", layout.dispatch_value},
                {"rule_bits", layout.total_rule_bits},
                {"alc_bits", layout.alc_bits},
                {"tlc_bits", layout.tlc_bits},
                {"nlc_bits", layout.nlc_bits}};
}

RuleIdLayout layout_from_json(const json& doc)
{
    RuleIdLayout layout;
    layout.dispatch_bits = static_cast<uint32_t>(need_uint(doc, "dispatch_bits"));
    layout.dispatch_value = static_cast<uint32_t>(need_uint(doc, "dispatch_value"));
    layout.total_rule_bits = static_cast<uint32_t>(need_uint(doc, "rule_bits"));
    layout.alc_bits = static_cast<uint32_t>(need_uint(doc, "alc_bits"));
    layout.tlc_bits = static_cast<uint32_t>(need_uint(doc, "tlc_bits"));
    layout.nlc_bits = static_cast<uint32_t>(need_uint(doc, "nlc_bits"));
    return layout;
}

json field_to_json(const FieldDescriptor& d)
{
    json f{{"field", field_name(d.field)},
           {"pos", d.position},
           {"dir", dir_indicator_name(d.direction)},
           {"op", match_op_name(d.op)},
           {"action", cd_action_name(d.action)}};
    if (d.target)
        f["target"] = target_hex(*d.target);
    return f;
}

FieldDescriptor field_from_json(const json& f)
{
    FieldDescriptor d;
    const std::string fname = need_string(f, "field");
    const auto id = field_from_name(fname);
    if (!id)
        raise(Errc::kMalformedDocument, "unknown field id: " + fname);
    d.field = *id;
    d.position = static_cast<uint32_t>(need_uint(f, "pos"));

    const std::string dir = need_string(f, "dir");
    if (dir == "up")
        d.direction = DirIndicator::kUp;
    else if (dir == "down")
        d.direction = DirIndicator::kDown;
    else if (dir == "bi")
        d.direction = DirIndicator::kBidirectional;
    else
        raise(Errc::kMalformedDocument, "unknown direction: " + dir);

    const std::string op = need_string(f, "op");
    if (op == "equal")
        d.op = MatchOp::kEqual;
    else if (op == "ignore")
        d.op = MatchOp::kIgnore;
    else
        raise(Errc::kMalformedDocument, "unknown matching operator: " + op);

    const std::string action = need_string(f, "action");
    if (action == "not-sent")
        d.action = CdAction::kNotSent;
    else if (action == "value-sent")
        d.action = CdAction::kValueSent;
    else if (action == "comp-length")
        d.action = CdAction::kCompLength;
    else if (action == "comp-checksum")
        d.action = CdAction::kCompChecksum;
    else if (action == "dev-iid")
        d.action = CdAction::kDevIidFromDeviceId;
    else
        raise(Errc::kMalformedDocument, "unknown C/D action: " + action);

    if (f.contains("target")) {
        const std::vector<uint8_t> bytes = hex_decode(need_string(f, "target"));
        const size_t width = field_width(d.field);
        if (bytes.size() != (width + 7) / 8)
            raise(Errc::kMalformedDocument,
                  "target byte count does not fit field " + fname);
        uint64_t v = 0;
        for (uint8_t b : bytes)
            v = (v << 8) | b;
        if (width < 64 && (v >> width) != 0)
            raise(Errc::kMalformedDocument, "target value does not fit field " + fname);
        d.target = BitString::from_uint(v, width);
    }
    return d;
}

json fields_to_json(const std::vector<FieldDescriptor>& fields)
{
    json arr = json::array();
    for (const auto& d : fields)
        arr.push_back(field_to_json(d));
    return arr;
}

std::vector<FieldDescriptor> fields_from_json(const json& arr)
{
    if (!arr.is_array())
        raise(Errc::kMalformedDocument, "fields must be an array");
    std::vector<FieldDescriptor> fields;
    for (const auto& f : arr)
        fields.push_back(field_from_json(f));
    return fields;
}

json context_to_document(const Context& ctx)
{
    json doc{{"format_version", kDocumentFormatVersion},
             {"kind", "context"},
             {"mode", ctx.layered() ? "layered" : "flat"},
             {"layout", layout_to_json(ctx.layout())}};
    if (ctx.layered()) {
        const LayeredContext& l = ctx.layered_ctx();
        auto layer_rules = [](const std::vector<LayerRule>& rules) {
            json arr = json::array();
            for (const auto& r : rules)
                arr.push_back(json{{"id", r.local_id}, {"fields", fields_to_json(r.fields)}});
            return arr;
        };
        doc["nlc"] = layer_rules(l.nlc);
        doc["tlc"] = layer_rules(l.tlc);
        doc["alc"] = layer_rules(l.alc);
    } else {
        json arr = json::array();
        for (const auto& r : ctx.flat().rules)
            arr.push_back(json{{"id", r.rule_id}, {"fields", fields_to_json(r.fields)}});
        doc["rules"] = arr;
    }
    return doc;
}

void check_header(const json& doc, const char* expected_kind)
{
    if (!doc.is_object())
        raise(Errc::kMalformedDocument, "document root must be a map");
    const uint64_t version = need_uint(doc, "format_version");
    if (version != kDocumentFormatVersion)
        raise(Errc::kUnsupportedVersion, "format_version " + std::to_string(version));
    const std::string kind = need_string(doc, "kind");
    if (kind != expected_kind)
        raise(Errc::kMalformedDocument, "expected a " + std::string(expected_kind) +
                                            " document, found " + kind);
}

Context context_from_document(const json& doc)
{
    check_header(doc, "context");
    const std::string mode = need_string(doc, "mode");
    const RuleIdLayout layout = layout_from_json(need(doc, "layout"));

    Context ctx;
    if (mode == "layered") {
        LayeredContext l;
        l.layout = layout;
        auto read_layer = [&](const char* key, Layer layer) {
            std::vector<LayerRule> rules;
            for (const auto& r : need_array(doc, key)) {
                LayerRule rule;
                rule.local_id = static_cast<uint32_t>(need_uint(r, "id"));
                rule.layer = layer;
                rule.fields = fields_from_json(need(r, "fields"));
                rules.push_back(std::move(rule));
            }
            return rules;
        };
        l.nlc = read_layer("nlc", Layer::kNetwork);
        l.tlc = read_layer("tlc", Layer::kTransport);
        l.alc = read_layer("alc", Layer::kApplication);
        ctx.value = std::move(l);
    } else if (mode == "flat") {
        FlatContext f;
        f.layout = layout;
        for (const auto& r : need_array(doc, "rules")) {
            FlatRule rule;
            rule.rule_id = static_cast<uint32_t>(need_uint(r, "id"));
            rule.fields = fields_from_json(need(r, "fields"));
            f.rules.push_back(std::move(rule));
        }
        ctx.value = std::move(f);
    } else {
        raise(Errc::kMalformedDocument, "unknown mode: " + mode);
    }

    const std::vector<Violation> violations = validate_context(ctx);
    if (!violations.empty()) {
        std::string msg = "context fails validation:";
        for (size_t i = 0; i < violations.size() && i < 5; ++i)
            msg += "\n  " + violations[i].to_string();
        raise(Errc::kValidationFailed, msg);
    }
    return ctx;
}

json parse_document(std::span<const uint8_t> bytes)
{
    size_t i = 0;
    while (i < bytes.size() && (bytes[i] == ' ' || bytes[i] == '\t' || bytes[i] == '\n' ||
                                bytes[i] == '\r'))
        ++i;
    if (i >= bytes.size())
        raise(Errc::kMalformedDocument, "empty document");
    if (bytes[i] == '{') {
        try {
            return json::parse(bytes.begin(), bytes.end());
        } catch (const json::exception& e) {
            raise(Errc::kMalformedDocument, e.what());
        }
    }
    return cbor_decode(bytes);
}

std::vector<uint8_t> dump_document(const json& doc, ContextEncoding encoding)
{
    if (encoding == ContextEncoding::kBinary)
        return cbor_encode_canonical(doc);
    const std::string text = doc.dump(2) + "\n";
    return std::vector<uint8_t>(text.begin(), text.end());
}

const char* layer_name(Layer layer)
{
    switch (layer) {
    case Layer::kNetwork: return "network";
    case Layer::kTransport: return "transport";
    case Layer::kApplication: return "application";
    }
    return "?";
}

RuleScope scope_from_name(const std::string& name)
{
    if (name == "flat")
        return RuleScope::kFlat;
    if (name == "network")
        return RuleScope::kNetwork;
    if (name == "transport")
        return RuleScope::kTransport;
    if (name == "application")
        return RuleScope::kApplication;
    raise(Errc::kMalformedDocument, "unknown rule scope: " + name);
}

} // namespace

std::vector<uint8_t> save_context(const Context& ctx, ContextEncoding encoding)
{
    return dump_document(context_to_document(ctx), encoding);
}

Context load_context(std::span<const uint8_t> bytes)
{
    return context_from_document(parse_document(bytes));
}

RuleScope scope_of(const StoredRule& rule)
{
    if (!rule.layer)
        return RuleScope::kFlat;
    switch (*rule.layer) {
    case Layer::kNetwork: return RuleScope::kNetwork;
    case Layer::kTransport: return RuleScope::kTransport;
    case Layer::kApplication: return RuleScope::kApplication;
    }
    return RuleScope::kFlat;
}

const char* scope_name(RuleScope scope)
{
    switch (scope) {
    case RuleScope::kFlat: return "flat";
    case RuleScope::kNetwork: return "network";
    case RuleScope::kTransport: return "transport";
    case RuleScope::kApplication: return "application";
    }
    return "?";
}

uint16_t RuleRegistry::register_rule(const StoredRule& rule)
{
    if (layered_ && !rule.layer)
        raise(Errc::kInvalidParams, "layered registry stores layer-scoped rules");
    if (!layered_ && rule.layer)
        raise(Errc::kInvalidParams, "flat registry stores whole-chain rules");

    // Structural validation via a throwaway single-rule context.
    Context probe;
    if (rule.layer) {
        LayeredContext l;
        l.layout = layout_;
        LayerRule r{0, *rule.layer, rule.fields};
        switch (*rule.layer) {
        case Layer::kNetwork: l.nlc.push_back(r); break;
        case Layer::kTransport: l.tlc.push_back(r); break;
        case Layer::kApplication: l.alc.push_back(r); break;
        }
        probe.value = std::move(l);
    } else {
        FlatContext f;
        f.layout = layout_;
        f.rules.push_back(FlatRule{0, rule.fields});
        probe.value = std::move(f);
    }
    const std::vector<Violation> violations = validate_context(probe);
    if (!violations.empty())
        raise(Errc::kValidationFailed, "rule fails validation: " + violations[0].to_string());

    for (const auto& [id, stored] : rules_)
        if (stored == rule)
            return id;

    if (rules_.size() > 0xFFFF || (!rules_.empty() && rules_.rbegin()->first == 0xFFFF))
        raise(Errc::kRegistryFull, "no free long IDs");
    const uint16_t id = rules_.empty() ? 0 : static_cast<uint16_t>(rules_.rbegin()->first + 1);
    rules_.emplace(id, rule);
    return id;
}

Context RuleRegistry::provision_device(const std::vector<uint8_t>& device_address,
                                       const std::vector<uint16_t>& selection)
{
    for (uint16_t id : selection)
        if (!rules_.count(id))
            raise(Errc::kUnknownLongId, "long ID " + std::to_string(id));
    for (size_t i = 0; i < selection.size(); ++i)
        for (size_t j = i + 1; j < selection.size(); ++j)
            if (selection[i] == selection[j])
                raise(Errc::kInvalidParams, "long ID selected twice");

    std::map<ShortKey, uint16_t> mapping;
    Context ctx;
    if (!layered_) {
        if (selection.size() > layout_.usable_flat_ids())
            raise(Errc::kTooManyRules,
                  std::to_string(selection.size()) + " rules exceed " +
                      std::to_string(layout_.usable_flat_ids()) + " usable short IDs");
        FlatContext f;
        f.layout = layout_;
        for (size_t i = 0; i < selection.size(); ++i) {
            const StoredRule& stored = rules_.at(selection[i]);
            f.rules.push_back(FlatRule{static_cast<uint32_t>(i), stored.fields});
            mapping[{RuleScope::kFlat, static_cast<uint32_t>(i)}] = selection[i];
        }
        ctx.value = std::move(f);
    } else {
        LayeredContext l;
        l.layout = layout_;
        std::map<Layer, uint32_t> next;
        for (uint16_t id : selection) {
            const StoredRule& stored = rules_.at(id);
            const Layer layer = *stored.layer;
            const uint32_t short_id = next[layer]++;
            if (short_id >= layout_.usable_segment_ids(layer))
                raise(Errc::kTooManyRules, std::string("too many ") + layer_name(layer) +
                                               " rules for the segment width");
            LayerRule r{short_id, layer, stored.fields};
            switch (layer) {
            case Layer::kNetwork: l.nlc.push_back(std::move(r)); break;
            case Layer::kTransport: l.tlc.push_back(std::move(r)); break;
            case Layer::kApplication: l.alc.push_back(std::move(r)); break;
            }
            mapping[{scope_of(stored), short_id}] = id;
        }
        ctx.value = std::move(l);
    }
    devices_[device_address] = std::move(mapping);
    return ctx;
}

std::pair<uint16_t, const StoredRule*> RuleRegistry::resolve(
    const std::vector<uint8_t>& device_address, RuleScope scope, uint32_t short_id) const
{
    auto dev = devices_.find(device_address);
    if (dev == devices_.end())
        raise(Errc::kUnknownDevice, "device " + hex_encode(device_address) + " not provisioned");
    auto entry = dev->second.find({scope, short_id});
    if (entry == dev->second.end())
        raise(Errc::kUnknownShortId, "short ID " + std::to_string(short_id) + " (" +
                                         scope_name(scope) + ") not mapped");
    return {entry->second, &rules_.at(entry->second)};
}

Context RuleRegistry::device_context(const std::vector<uint8_t>& device_address) const
{
    auto dev = devices_.find(device_address);
    if (dev == devices_.end())
        raise(Errc::kUnknownDevice, "device " + hex_encode(device_address) + " not provisioned");

    Context ctx;
    if (!layered_) {
        FlatContext f;
        f.layout = layout_;
        for (const auto& [key, long_id] : dev->second)
            f.rules.push_back(FlatRule{key.second, rules_.at(long_id).fields});
        ctx.value = std::move(f);
    } else {
        LayeredContext l;
        l.layout = layout_;
        for (const auto& [key, long_id] : dev->second) {
            const StoredRule& stored = rules_.at(long_id);
            LayerRule r{key.second, *stored.layer, stored.fields};
            switch (*stored.layer) {
            case Layer::kNetwork: l.nlc.push_back(std::move(r)); break;
            case Layer::kTransport: l.tlc.push_back(std::move(r)); break;
            case Layer::kApplication: l.alc.push_back(std::move(r)); break;
            }
        }
        ctx.value = std::move(l);
    }
    return ctx;
}

std::string RuleRegistry::describe() const
{
    std::ostringstream out;
    out << "registry: " << (layered_ ? "layered" : "flat") << " mode, " << rules_.size()
        << " rule(s), " << devices_.size() << " device(s)\n";
    for (const auto& [id, rule] : rules_) {
        out << "rule " << id << " [" << scope_name(scope_of(rule)) << "]\n";
        out << describe_fields(rule.fields);
    }
    for (const auto& [addr, mapping] : devices_) {
        out << "device " << hex_encode(addr) << ":\n";
        for (const auto& [key, long_id] : mapping)
            out << "  short " << key.second << " (" << scope_name(key.first) << ") -> long "
                << long_id << "\n";
    }
    return out.str();
}

std::vector<uint8_t> RuleRegistry::save(ContextEncoding encoding) const
{
    json doc{{"format_version", kDocumentFormatVersion},
             {"kind", "registry"},
             {"mode", layered_ ? "layered" : "flat"},
             {"layout", layout_to_json(layout_)}};
    json rules = json::array();
    for (const auto& [id, rule] : rules_)
        rules.push_back(json{{"long_id", id},
                             {"scope", scope_name(scope_of(rule))},
                             {"fields", fields_to_json(rule.fields)}});
    doc["rules"] = rules;
    json devices = json::array();
    for (const auto& [addr, mapping] : devices_) {
        json entries = json::array();
        for (const auto& [key, long_id] : mapping)
            entries.push_back(json{{"scope", scope_name(key.first)},
                                   {"short", key.second},
                                   {"long", long_id}});
        devices.push_back(json{{"address", hex_encode(addr)}, {"map", entries}});
    }
    doc["devices"] = devices;
    return dump_document(doc, encoding);
}

RuleRegistry RuleRegistry::load(std::span<const uint8_t> bytes)
{
    const json doc = parse_document(bytes);
    check_header(doc, "registry");

    RuleRegistry reg;
    reg.layered_ = need_string(doc, "mode") == "layered";
    reg.layout_ = layout_from_json(need(doc, "layout"));
    for (const auto& r : need_array(doc, "rules")) {
        StoredRule rule;
        const RuleScope scope = scope_from_name(need_string(r, "scope"));
        if (scope != RuleScope::kFlat)
            rule.layer = static_cast<Layer>(static_cast<int>(scope));
        rule.fields = fields_from_json(need(r, "fields"));
        reg.rules_.emplace(static_cast<uint16_t>(need_uint(r, "long_id")), std::move(rule));
    }
    for (const auto& d : need_array(doc, "devices")) {
        const std::vector<uint8_t> addr = hex_decode(need_string(d, "address"));
        std::map<ShortKey, uint16_t> mapping;
        for (const auto& m : need_array(d, "map")) {
            const RuleScope scope = scope_from_name(need_string(m, "scope"));
            mapping[{scope, static_cast<uint32_t>(need_uint(m, "short"))}] =
                static_cast<uint16_t>(need_uint(m, "long"));
        }
        reg.devices_[addr] = std::move(mapping);
    }
    for (const auto& [addr, mapping] : reg.devices_)
        for (const auto& [key, long_id] : mapping)
            if (!reg.rules_.count(long_id))
                raise(Errc::kMalformedDocument,
                      "device map points at missing long ID " + std::to_string(long_id));
    return reg;
}

std::string describe_fields(const std::vector<FieldDescriptor>& fields)
{
    std::ostringstream out;
    char line[128];
    for (const auto& d : fields) {
        std::snprintf(line, sizeof line, "  %-20s %2u %-4s %-18s %-6s %s\n", field_name(d.field),
                      d.position, dir_indicator_name(d.direction),
                      d.target ? target_hex(*d.target).c_str() : "-", match_op_name(d.op),
                      cd_action_name(d.action));
        out << line;
    }
    return out.str();
}

std::vector<uint16_t> register_context_rules(RuleRegistry& reg, const Context& ctx)
{
    std::vector<uint16_t> ids;
    if (ctx.layered()) {
        const LayeredContext& l = ctx.layered_ctx();
        for (const auto* layer : {&l.nlc, &l.tlc, &l.alc})
            for (const auto& r : *layer)
                ids.push_back(reg.register_rule(StoredRule{r.layer, r.fields}));
    } else {
        for (const auto& r : ctx.flat().rules)
            ids.push_back(reg.register_rule(StoredRule{std::nullopt, r.fields}));
    }
    return ids;
}

std::string hex_encode(std::span<const uint8_t> bytes)
{
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0x0F]);
    }
    return s;
}

std::vector<uint8_t> hex_decode(const std::string& hex)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0)
        raise(Errc::kMalformedDocument, "hex string has odd length");
    std::vector<uint8_t> out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            raise(Errc::kMalformedDocument, "invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

} // namespace schc
