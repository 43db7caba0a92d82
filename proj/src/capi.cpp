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

#include "schc/schc.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "schc/bench.hpp"
#include "schc/context_io.hpp"
#include "schc/engine.hpp"

struct schc_context {
    schc::Context ctx;
};

struct schc_registry {
    schc::RuleRegistry reg;
};

namespace {

thread_local std::string g_last_error;

schc_status map_errc(schc::Errc e)
{
    using schc::Errc;
    switch (e) {
    case Errc::kTruncatedHeader: return SCHC_ERR_TRUNCATED_HEADER;
    case Errc::kBadVersion: return SCHC_ERR_BAD_VERSION;
    case Errc::kInconsistentChain: return SCHC_ERR_INCONSISTENT_CHAIN;
    case Errc::kLengthMismatch: return SCHC_ERR_LENGTH_MISMATCH;
    case Errc::kFieldAbsent: return SCHC_ERR_FIELD_ABSENT;
    case Errc::kPositionOutOfRange: return SCHC_ERR_POSITION_OUT_OF_RANGE;
    case Errc::kWidthMismatch: return SCHC_ERR_WIDTH_MISMATCH;
    case Errc::kSegmentOverflow: return SCHC_ERR_SEGMENT_OVERFLOW;
    case Errc::kContextInvalid: return SCHC_ERR_CONTEXT_INVALID;
    case Errc::kUnknownRuleId: return SCHC_ERR_UNKNOWN_RULE_ID;
    case Errc::kResidueUnderflow: return SCHC_ERR_RESIDUE_UNDERFLOW;
    case Errc::kDispatchMismatch: return SCHC_ERR_DISPATCH_MISMATCH;
    case Errc::kMalformedDocument: return SCHC_ERR_MALFORMED_DOCUMENT;
    case Errc::kUnsupportedVersion: return SCHC_ERR_UNSUPPORTED_VERSION;
    case Errc::kValidationFailed: return SCHC_ERR_VALIDATION_FAILED;
    case Errc::kRegistryFull: return SCHC_ERR_REGISTRY_FULL;
    case Errc::kTooManyRules: return SCHC_ERR_TOO_MANY_RULES;
    case Errc::kUnknownLongId: return SCHC_ERR_UNKNOWN_LONG_ID;
    case Errc::kUnknownDevice: return SCHC_ERR_UNKNOWN_DEVICE;
    case Errc::kUnknownShortId: return SCHC_ERR_UNKNOWN_SHORT_ID;
    case Errc::kInvalidParams: return SCHC_ERR_INVALID_PARAMS;
    case Errc::kDivisionByZero: return SCHC_ERR_DIVISION_BY_ZERO;
    case Errc::kEmptyInput: return SCHC_ERR_EMPTY_INPUT;
    case Errc::kInvalidDuty: return SCHC_ERR_INVALID_DUTY;
    case Errc::kIo: return SCHC_ERR_IO;
    case Errc::kInternal: return SCHC_ERR_INTERNAL;
    }
    return SCHC_ERR_INTERNAL;
}

// Runs the body, translating exceptions into status codes and recording the
// thread-local error detail.
template <typename Fn>
schc_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return SCHC_OK;
    } catch (const schc::SchcError& e) {
        g_last_error = e.what();
        return map_errc(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SCHC_ERR_INTERNAL;
    }
}

uint8_t* dup_bytes(const std::vector<uint8_t>& data)
{
    uint8_t* p = static_cast<uint8_t*>(std::malloc(data.size() ? data.size() : 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, data.data(), data.size());
    return p;
}

char* dup_text(const std::string& text)
{
    char* p = static_cast<char*>(std::malloc(text.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, text.c_str(), text.size() + 1);
    return p;
}

std::vector<uint8_t> read_file(const char* path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw schc::SchcError(schc::Errc::kIo, std::string("cannot open ") + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

schc::Direction to_direction(schc_direction d)
{
    return d == SCHC_DIR_DOWN ? schc::Direction::kDown : schc::Direction::kUp;
}

uint64_t iid_from_bytes(const uint8_t iid[8])
{
    if (!iid)
        return 0;
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | iid[i];
    return v;
}

schc::RuleScope to_scope(schc_scope scope)
{
    switch (scope) {
    case SCHC_SCOPE_FLAT: return schc::RuleScope::kFlat;
    case SCHC_SCOPE_NETWORK: return schc::RuleScope::kNetwork;
    case SCHC_SCOPE_TRANSPORT: return schc::RuleScope::kTransport;
    case SCHC_SCOPE_APPLICATION: return schc::RuleScope::kApplication;
    }
    return schc::RuleScope::kFlat;
}

} // namespace

extern "C" {

const char* schc_version(void) { return "1.0.0"; }

const char* schc_status_name(schc_status status)
{
    switch (status) {
    case SCHC_OK: return "ok";
    case SCHC_ERR_TRUNCATED_HEADER: return "truncated header";
    case SCHC_ERR_BAD_VERSION: return "bad IP version";
    case SCHC_ERR_INCONSISTENT_CHAIN: return "inconsistent header chain";
    case SCHC_ERR_LENGTH_MISMATCH: return "length field mismatch";
    case SCHC_ERR_FIELD_ABSENT: return "field absent";
    case SCHC_ERR_POSITION_OUT_OF_RANGE: return "field position out of range";
    case SCHC_ERR_WIDTH_MISMATCH: return "bit width mismatch";
    case SCHC_ERR_SEGMENT_OVERFLOW: return "rule ID segment overflow";
    case SCHC_ERR_CONTEXT_INVALID: return "invalid context";
    case SCHC_ERR_UNKNOWN_RULE_ID: return "unknown rule ID";
    case SCHC_ERR_RESIDUE_UNDERFLOW: return "residue underflow";
    case SCHC_ERR_DISPATCH_MISMATCH: return "dispatch mismatch";
    case SCHC_ERR_MALFORMED_DOCUMENT: return "malformed document";
    case SCHC_ERR_UNSUPPORTED_VERSION: return "unsupported document version";
    case SCHC_ERR_VALIDATION_FAILED: return "validation failed";
    case SCHC_ERR_REGISTRY_FULL: return "registry full";
    case SCHC_ERR_TOO_MANY_RULES: return "too many rules";
    case SCHC_ERR_UNKNOWN_LONG_ID: return "unknown long rule ID";
    case SCHC_ERR_UNKNOWN_DEVICE: return "unknown device";
    case SCHC_ERR_UNKNOWN_SHORT_ID: return "unknown short rule ID";
    case SCHC_ERR_INVALID_PARAMS: return "invalid parameters";
    case SCHC_ERR_DIVISION_BY_ZERO: return "division by zero";
    case SCHC_ERR_EMPTY_INPUT: return "empty input";
    case SCHC_ERR_INVALID_DUTY: return "invalid duty cycle";
    case SCHC_ERR_IO: return "I/O error";
    case SCHC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* schc_last_error(void) { return g_last_error.c_str(); }

void schc_free(void* ptr) { std::free(ptr); }

schc_status schc_context_load(const uint8_t* data, size_t len, schc_context** out)
{
    return guarded([&] {
        if (!data || !out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        auto handle = new schc_context{schc::load_context({data, len})};
        *out = handle;
    });
}

schc_status schc_context_load_file(const char* path, schc_context** out)
{
    return guarded([&] {
        if (!path || !out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> bytes = read_file(path);
        *out = new schc_context{schc::load_context(bytes)};
    });
}

schc_status schc_context_save(const schc_context* ctx, int binary, uint8_t** out,
                              size_t* out_len)
{
    return guarded([&] {
        if (!ctx || !out || !out_len)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> bytes = schc::save_context(
            ctx->ctx,
            binary ? schc::ContextEncoding::kBinary : schc::ContextEncoding::kText);
        *out = dup_bytes(bytes);
        *out_len = bytes.size();
    });
}

void schc_context_free(schc_context* ctx) { delete ctx; }

int schc_context_layered(const schc_context* ctx) { return ctx && ctx->ctx.layered() ? 1 : 0; }

size_t schc_context_rule_count(const schc_context* ctx)
{
    return ctx ? schc::rule_count(ctx->ctx) : 0;
}

size_t schc_context_descriptor_count(const schc_context* ctx)
{
    return ctx ? schc::descriptor_count(ctx->ctx) : 0;
}

schc_status schc_context_validate(const schc_context* ctx, char** report)
{
    if (report)
        *report = nullptr;
    schc_status rc = guarded([&] {
        if (!ctx)
            schc::raise(schc::Errc::kInvalidParams, "null context");
        const std::vector<schc::Violation> violations = schc::validate_context(ctx->ctx);
        if (!violations.empty()) {
            std::string text;
            for (const auto& v : violations)
                text += v.to_string() + "\n";
            if (report)
                *report = dup_text(text);
            schc::raise(schc::Errc::kValidationFailed,
                        std::to_string(violations.size()) + " violation(s)");
        }
    });
    return rc;
}

schc_status schc_compress(const schc_context* ctx, const uint8_t* packet, size_t len,
                          schc_direction direction, uint8_t** out, size_t* out_len,
                          schc_compress_info* info)
{
    return guarded([&] {
        if (!ctx || !packet || !out || !out_len)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const schc::HeaderStack stack = schc::parse_stack({packet, len}, to_direction(direction));
        const schc::CompressedPacket pkt = schc::compress(ctx->ctx, stack);
        const std::vector<uint8_t> bytes = pkt.to_bytes();
        *out = dup_bytes(bytes);
        *out_len = bytes.size();
        if (info) {
            info->matched = pkt.uncompressed() ? 0 : 1;
            info->rule_id = static_cast<uint32_t>(pkt.rule_id.to_uint());
            info->alc = info->tlc = info->nlc = 0;
            if (ctx->ctx.layered()) {
                const schc::RuleIdSegments seg =
                    schc::decode_rule_id(ctx->ctx.layout(), pkt.rule_id);
                info->alc = seg.alc;
                info->tlc = seg.tlc;
                info->nlc = seg.nlc;
            }
            info->residue_bits = static_cast<uint32_t>(pkt.residue.bit_size());
            info->header_octets = static_cast<uint32_t>(schc::compressed_size_octets(pkt));
        }
    });
}

schc_status schc_decompress(const schc_context* ctx, const uint8_t* frame, size_t len,
                            schc_direction direction, const uint8_t device_iid[8],
                            uint8_t** out, size_t* out_len)
{
    return guarded([&] {
        if (!ctx || !frame || !out || !out_len)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        schc::DecompressionEnvironment env;
        env.device_iid = iid_from_bytes(device_iid);
        env.direction = to_direction(direction);
        const schc::HeaderStack stack = schc::decompress_bytes(ctx->ctx, {frame, len}, env);
        const std::vector<uint8_t> bytes = schc::serialize_stack(stack);
        *out = dup_bytes(bytes);
        *out_len = bytes.size();
    });
}

schc_status schc_registry_new(int layered, schc_registry** out)
{
    return guarded([&] {
        if (!out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        *out = new schc_registry{schc::RuleRegistry(layered != 0, schc::RuleIdLayout{})};
    });
}

schc_status schc_registry_load(const uint8_t* data, size_t len, schc_registry** out)
{
    return guarded([&] {
        if (!data || !out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        *out = new schc_registry{schc::RuleRegistry::load({data, len})};
    });
}

schc_status schc_registry_load_file(const char* path, schc_registry** out)
{
    return guarded([&] {
        if (!path || !out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> bytes = read_file(path);
        *out = new schc_registry{schc::RuleRegistry::load(bytes)};
    });
}

schc_status schc_registry_save(const schc_registry* reg, int binary, uint8_t** out,
                               size_t* out_len)
{
    return guarded([&] {
        if (!reg || !out || !out_len)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> bytes = reg->reg.save(
            binary ? schc::ContextEncoding::kBinary : schc::ContextEncoding::kText);
        *out = dup_bytes(bytes);
        *out_len = bytes.size();
    });
}

void schc_registry_free(schc_registry* reg) { delete reg; }

schc_status schc_registry_register(schc_registry* reg, const schc_context* rules,
                                   uint16_t* ids_out, size_t cap, size_t* count_out)
{
    return guarded([&] {
        if (!reg || !rules)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint16_t> ids = schc::register_context_rules(reg->reg, rules->ctx);
        if (count_out)
            *count_out = ids.size();
        if (ids_out)
            for (size_t i = 0; i < ids.size() && i < cap; ++i)
                ids_out[i] = ids[i];
    });
}

schc_status schc_registry_provision(schc_registry* reg, const uint8_t* device_address,
                                    size_t address_len, const uint16_t* long_ids, size_t count,
                                    schc_context** device_ctx)
{
    return guarded([&] {
        if (!reg || !device_address)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> addr(device_address, device_address + address_len);
        const std::vector<uint16_t> selection(long_ids, long_ids + count);
        schc::Context ctx = reg->reg.provision_device(addr, selection);
        if (device_ctx)
            *device_ctx = new schc_context{std::move(ctx)};
    });
}

schc_status schc_registry_resolve(const schc_registry* reg, const uint8_t* device_address,
                                  size_t address_len, schc_scope scope, uint32_t short_id,
                                  uint16_t* long_id_out, char** text)
{
    return guarded([&] {
        if (!reg || !device_address)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> addr(device_address, device_address + address_len);
        const auto [long_id, rule] = reg->reg.resolve(addr, to_scope(scope), short_id);
        if (long_id_out)
            *long_id_out = long_id;
        if (text) {
            std::string s = "long " + std::to_string(long_id) + " [" +
                            schc::scope_name(schc::scope_of(*rule)) + "]\n" +
                            schc::describe_fields(rule->fields);
            *text = dup_text(s);
        }
    });
}

schc_status schc_registry_device_context(const schc_registry* reg,
                                         const uint8_t* device_address, size_t address_len,
                                         schc_context** out)
{
    return guarded([&] {
        if (!reg || !device_address || !out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const std::vector<uint8_t> addr(device_address, device_address + address_len);
        *out = new schc_context{reg->reg.device_context(addr)};
    });
}

schc_status schc_registry_describe(const schc_registry* reg, char** text)
{
    return guarded([&] {
        if (!reg || !text)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        *text = dup_text(reg->reg.describe());
    });
}

size_t schc_registry_rule_count(const schc_registry* reg)
{
    return reg ? reg->reg.rule_count() : 0;
}

schc_status schc_lora_params_default(uint32_t sf, schc_lora_params* out)
{
    return guarded([&] {
        if (!out)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const schc::LoraParams p = schc::lora_params_for_sf(sf);
        schc::validate_lora_params(p);
        out->spreading_factor = p.spreading_factor;
        out->bandwidth_hz = p.bandwidth_hz;
        out->coding_rate_denominator = p.coding_rate_denominator;
        out->preamble_symbols = p.preamble_symbols;
        out->explicit_header = p.explicit_header ? 1 : 0;
        out->crc_on = p.crc_on ? 1 : 0;
        out->low_data_rate_optimize = p.low_data_rate_optimize ? 1 : 0;
        out->duty_cycle = p.duty_cycle;
    });
}

schc_status schc_lora_time_on_air(const schc_lora_params* params, uint32_t payload_octets,
                                  double* toa_ms)
{
    return guarded([&] {
        if (!params || !toa_ms)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        schc::LoraParams p;
        p.spreading_factor = params->spreading_factor;
        p.bandwidth_hz = params->bandwidth_hz;
        p.coding_rate_denominator = params->coding_rate_denominator;
        p.preamble_symbols = params->preamble_symbols;
        p.explicit_header = params->explicit_header != 0;
        p.crc_on = params->crc_on != 0;
        p.low_data_rate_optimize = params->low_data_rate_optimize != 0;
        p.duty_cycle = params->duty_cycle;
        *toa_ms = schc::lora_time_on_air(p, payload_octets);
    });
}

schc_status schc_duty_cycle_min_interval(double toa_ms, double duty, double* interval_ms)
{
    return guarded([&] {
        if (!interval_ms)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        *interval_ms = schc::duty_cycle_min_interval(toa_ms, duty);
    });
}

schc_status schc_bench_report(int layered, double total_packets, int format, char** text)
{
    return guarded([&] {
        if (!text)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        const double total = total_packets > 0 ? total_packets : schc::kBenchDefaultPackets;
        *text = dup_text(schc::bench_report(
            layered != 0, total,
            format ? schc::ReportFormat::kCsv : schc::ReportFormat::kText));
    });
}

schc_status schc_airtime_table(uint32_t payload_octets, const uint32_t* sfs, size_t sf_count,
                               double duty_cycle, int format, char** text)
{
    return guarded([&] {
        if (!text)
            schc::raise(schc::Errc::kInvalidParams, "null argument");
        std::vector<uint32_t> list;
        if (sfs && sf_count)
            list.assign(sfs, sfs + sf_count);
        else
            for (uint32_t sf = 7; sf <= 12; ++sf)
                list.push_back(sf);
        *text = dup_text(schc::airtime_table(
            payload_octets, list, duty_cycle,
            format ? schc::ReportFormat::kCsv : schc::ReportFormat::kText));
    });
}

} // extern "C"
