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

// Command-line front end for the SCHC/LSCHC engine. Talks to the engine
// exclusively through the C API in schc/schc.h.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schc/schc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitContext = 2;
constexpr int kExitPacket = 3;
constexpr int kExitEngine = 4;

int exit_code_for(schc_status status)
{
    switch (status) {
    case SCHC_OK:
        return kExitOk;
    case SCHC_ERR_MALFORMED_DOCUMENT:
    case SCHC_ERR_UNSUPPORTED_VERSION:
    case SCHC_ERR_VALIDATION_FAILED:
    case SCHC_ERR_CONTEXT_INVALID:
    case SCHC_ERR_REGISTRY_FULL:
    case SCHC_ERR_TOO_MANY_RULES:
    case SCHC_ERR_UNKNOWN_LONG_ID:
    case SCHC_ERR_UNKNOWN_DEVICE:
    case SCHC_ERR_UNKNOWN_SHORT_ID:
        return kExitContext;
    case SCHC_ERR_TRUNCATED_HEADER:
    case SCHC_ERR_BAD_VERSION:
    case SCHC_ERR_INCONSISTENT_CHAIN:
    case SCHC_ERR_LENGTH_MISMATCH:
    case SCHC_ERR_FIELD_ABSENT:
    case SCHC_ERR_POSITION_OUT_OF_RANGE:
        return kExitPacket;
    case SCHC_ERR_INVALID_PARAMS:
    case SCHC_ERR_DIVISION_BY_ZERO:
    case SCHC_ERR_EMPTY_INPUT:
    case SCHC_ERR_INVALID_DUTY:
    case SCHC_ERR_IO:
        return kExitUsage;
    default:
        return kExitEngine;
    }
}

[[noreturn]] void fail(schc_status status, const std::string& what)
{
    std::cerr << "schc: " << what << ": " << schc_status_name(status);
    const char* detail = schc_last_error();
    if (detail && *detail)
        std::cerr << " (" << detail << ")";
    std::cerr << "\n";
    std::exit(exit_code_for(status));
}

[[noreturn]] void fail_usage(const std::string& what)
{
    std::cerr << "schc: " << what << "\n";
    std::exit(kExitUsage);
}

struct ContextHandle {
    schc_context* ptr = nullptr;
    ~ContextHandle() { schc_context_free(ptr); }
};

struct RegistryHandle {
    schc_registry* ptr = nullptr;
    ~RegistryHandle() { schc_registry_free(ptr); }
};

struct Buffer {
    void* ptr = nullptr;
    size_t len = 0;
    ~Buffer() { schc_free(ptr); }
    const uint8_t* bytes() const { return static_cast<const uint8_t*>(ptr); }
    const char* text() const { return static_cast<const char*>(ptr); }
};

std::vector<uint8_t> read_all(const std::string& path)
{
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        const std::string s = ss.str();
        return std::vector<uint8_t>(s.begin(), s.end());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail_usage("cannot open " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

void write_all(const std::string& path, const uint8_t* data, size_t len)
{
    if (path == "-") {
        std::cout.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail_usage("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
}

std::optional<std::vector<uint8_t>> parse_hex(const std::string& line)
{
    std::vector<uint8_t> out;
    int hi = -1;
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            return std::nullopt;
        if (hi < 0)
            hi = v;
        else {
            out.push_back(static_cast<uint8_t>((hi << 4) | v));
            hi = -1;
        }
    }
    if (hi >= 0)
        return std::nullopt;
    return out;
}

std::string to_hex(const uint8_t* data, size_t len)
{
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(digits[data[i] >> 4]);
        s.push_back(digits[data[i] & 0x0F]);
    }
    return s;
}

// Packet inputs are either raw binary (one packet per file) or hex text
// (one packet per line); the format is detected from the content and
// carried over to the output.
struct PacketInput {
    std::vector<std::vector<uint8_t>> packets;
    bool hex = false;
};

PacketInput read_packets(const std::string& path)
{
    const std::vector<uint8_t> raw = read_all(path);
    bool texty = !raw.empty();
    for (uint8_t b : raw)
        if (!std::isxdigit(b) && !std::isspace(b)) {
            texty = false;
            break;
        }
    if (!texty) {
        if (raw.empty())
            fail_usage("empty packet input: " + path);
        return {{raw}, false};
    }
    PacketInput in;
    in.hex = true;
    std::istringstream stream(std::string(raw.begin(), raw.end()));
    std::string line;
    while (std::getline(stream, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        auto bytes = parse_hex(line);
        if (!bytes || bytes->empty())
            fail_usage("bad hex line in " + path);
        in.packets.push_back(std::move(*bytes));
    }
    if (in.packets.empty())
        fail_usage("no packets in " + path);
    return in;
}

void write_packets(const std::string& path, const std::vector<std::vector<uint8_t>>& packets,
                   bool hex)
{
    if (path.empty() || path == "-") {
        for (const auto& p : packets)
            std::cout << to_hex(p.data(), p.size()) << "\n";
        return;
    }
    if (!hex && packets.size() == 1) {
        write_all(path, packets[0].data(), packets[0].size());
        return;
    }
    std::string text;
    for (const auto& p : packets)
        text += to_hex(p.data(), p.size()) + "\n";
    write_all(path, reinterpret_cast<const uint8_t*>(text.data()), text.size());
}

ContextHandle load_context(const std::string& path)
{
    ContextHandle ctx;
    const schc_status rc = schc_context_load_file(path.c_str(), &ctx.ptr);
    if (rc != SCHC_OK)
        fail(rc, "loading context " + path);
    return ctx;
}

schc_direction parse_direction(const std::string& dir)
{
    if (dir == "up")
        return SCHC_DIR_UP;
    if (dir == "down")
        return SCHC_DIR_DOWN;
    fail_usage("direction must be up or down");
}

std::vector<uint8_t> parse_hex_arg(const std::string& hex, const char* what)
{
    auto bytes = parse_hex(hex);
    if (!bytes || bytes->empty())
        fail_usage(std::string("bad hex value for ") + what);
    return *bytes;
}

bool binary_by_extension(const std::string& path)
{
    return !path.ends_with(".schct");  // text form is .schct, binary .schcb
}

void save_registry(schc_registry* reg, const std::string& path)
{
    Buffer buf;
    const schc_status rc = schc_registry_save(reg, binary_by_extension(path) ? 1 : 0,
                                              reinterpret_cast<uint8_t**>(&buf.ptr), &buf.len);
    if (rc != SCHC_OK)
        fail(rc, "saving registry");
    const std::string tmp = path + ".tmp";
    write_all(tmp, buf.bytes(), buf.len);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        fail_usage("cannot replace " + path + ": " + ec.message());
}

RegistryHandle open_registry(const std::string& path, bool create, bool layered)
{
    RegistryHandle reg;
    if (std::filesystem::exists(path)) {
        const schc_status rc = schc_registry_load_file(path.c_str(), &reg.ptr);
        if (rc != SCHC_OK)
            fail(rc, "loading registry " + path);
        return reg;
    }
    if (!create)
        fail_usage("registry file not found: " + path);
    const schc_status rc = schc_registry_new(layered ? 1 : 0, &reg.ptr);
    if (rc != SCHC_OK)
        fail(rc, "creating registry");
    return reg;
}

schc_scope parse_scope(const std::string& name)
{
    if (name == "flat")
        return SCHC_SCOPE_FLAT;
    if (name == "network")
        return SCHC_SCOPE_NETWORK;
    if (name == "transport")
        return SCHC_SCOPE_TRANSPORT;
    if (name == "application")
        return SCHC_SCOPE_APPLICATION;
    fail_usage("scope must be flat, network, transport or application");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SCHC/LSCHC header compression engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", schc_version());

    std::string context_path, input, output, direction = "up", device_iid_hex;
    std::string mode = "flat", format = "text", registry_path, device_hex, rules_csv, scope_name =
        "flat";
    double packets = 0.0;
    uint32_t payload_octets = 1, sf = 0, short_id = 0;
    double duty = 0.001;

    // compress
    auto* cmd_compress = app.add_subcommand("compress", "compress packets under a context");
    cmd_compress->add_option("--context", context_path, "context file")->required();
    cmd_compress->add_option("--direction", direction, "up or down");
    cmd_compress->add_option("--output,-o", output, "output file (default: hex on stdout)");
    cmd_compress->add_option("input", input, "packet file (binary) or hex lines, - for stdin")
        ->required();

    // decompress
    auto* cmd_decompress = app.add_subcommand("decompress", "rebuild packets from frames");
    cmd_decompress->add_option("--context", context_path, "context file")->required();
    cmd_decompress->add_option("--direction", direction, "up or down");
    cmd_decompress->add_option("--device-iid", device_iid_hex, "device IID, 16 hex digits");
    cmd_decompress->add_option("--output,-o", output, "output file (default: hex on stdout)");
    cmd_decompress->add_option("input", input, "frame file or hex lines, - for stdin")
        ->required();

    // context validate | convert
    auto* cmd_context = app.add_subcommand("context", "context file utilities");
    cmd_context->require_subcommand(1);
    auto* ctx_validate = cmd_context->add_subcommand("validate", "check context invariants");
    ctx_validate->add_option("file", context_path, "context file")->required();
    std::string convert_out;
    auto* ctx_convert =
        cmd_context->add_subcommand("convert", "convert between .schcb and .schct");
    ctx_convert->add_option("input", context_path, "context file")->required();
    ctx_convert->add_option("output", convert_out, "output file")->required();

    // registry
    auto* cmd_registry = app.add_subcommand("registry", "network-side rule registry");
    cmd_registry->require_subcommand(1);
    cmd_registry->add_option("--registry", registry_path, "registry file")->required();
    auto* reg_register = cmd_registry->add_subcommand("register", "store rules from a context");
    reg_register->add_option("rules", input, "context file holding the rules")->required();
    reg_register->add_option("--mode", mode, "flat or layered (when creating the registry)");
    auto* reg_provision = cmd_registry->add_subcommand("provision", "assign rules to a device");
    reg_provision->add_option("--device", device_hex, "device address, hex")->required();
    reg_provision->add_option("--rules", rules_csv, "comma-separated long IDs")->required();
    reg_provision->add_option("--output,-o", output, "device context file to write");
    auto* reg_resolve = cmd_registry->add_subcommand("resolve", "look up a device short ID");
    reg_resolve->add_option("--device", device_hex, "device address, hex")->required();
    reg_resolve->add_option("--short", short_id, "short rule ID")->required();
    reg_resolve->add_option("--scope", scope_name, "flat, network, transport or application");
    auto* reg_list = cmd_registry->add_subcommand("list", "print rules and device maps");
    (void)reg_list;

    // bench
    auto* cmd_bench = app.add_subcommand("bench", "run the built-in evaluation scenario");
    cmd_bench->add_option("--mode", mode, "flat or layered");
    cmd_bench->add_option("--packets", packets, "total packet count (default: built-in mix)");
    cmd_bench->add_option("--format", format, "text or csv");

    // airtime
    auto* cmd_airtime = app.add_subcommand("airtime", "LoRa time-on-air table");
    cmd_airtime->add_option("--payload", payload_octets, "payload size in octets")->required();
    cmd_airtime->add_option("--sf", sf, "single spreading factor 7..12 (default: all)");
    cmd_airtime->add_option("--duty", duty, "duty cycle fraction (default 0.001)");
    cmd_airtime->add_option("--format", format, "text or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (cmd_compress->parsed()) {
        ContextHandle ctx = load_context(context_path);
        const schc_direction dir = parse_direction(direction);
        const auto [inputs, hex_in] = read_packets(input);
        std::vector<std::vector<uint8_t>> outputs;
        for (size_t i = 0; i < inputs.size(); ++i) {
            Buffer out;
            schc_compress_info info{};
            const schc_status rc =
                schc_compress(ctx.ptr, inputs[i].data(), inputs[i].size(), dir,
                              reinterpret_cast<uint8_t**>(&out.ptr), &out.len, &info);
            if (rc != SCHC_OK)
                fail(rc, "compressing packet " + std::to_string(i + 1));
            if (info.matched) {
                std::cerr << "packet " << i + 1 << ": rule " << info.rule_id;
                if (schc_context_layered(ctx.ptr))
                    std::cerr << " (alc=" << info.alc << " tlc=" << info.tlc
                              << " nlc=" << info.nlc << ")";
                std::cerr << ", residue " << info.residue_bits << " bits, header "
                          << info.header_octets << " octet(s)\n";
            } else {
                std::cerr << "packet " << i + 1 << ": uncompressed (ID " << info.rule_id
                          << "), header " << info.header_octets << " octet(s)\n";
            }
            outputs.emplace_back(out.bytes(), out.bytes() + out.len);
        }
        write_packets(output, outputs, hex_in);
        return kExitOk;
    }

    if (cmd_decompress->parsed()) {
        ContextHandle ctx = load_context(context_path);
        const schc_direction dir = parse_direction(direction);
        uint8_t iid[8] = {0};
        if (!device_iid_hex.empty()) {
            const std::vector<uint8_t> bytes = parse_hex_arg(device_iid_hex, "--device-iid");
            if (bytes.size() != 8)
                fail_usage("--device-iid needs exactly 16 hex digits");
            std::memcpy(iid, bytes.data(), 8);
        }
        const auto [inputs, hex_in] = read_packets(input);
        std::vector<std::vector<uint8_t>> outputs;
        for (size_t i = 0; i < inputs.size(); ++i) {
            Buffer out;
            const schc_status rc =
                schc_decompress(ctx.ptr, inputs[i].data(), inputs[i].size(), dir, iid,
                                reinterpret_cast<uint8_t**>(&out.ptr), &out.len);
            if (rc != SCHC_OK)
                fail(rc, "decompressing frame " + std::to_string(i + 1));
            outputs.emplace_back(out.bytes(), out.bytes() + out.len);
        }
        write_packets(output, outputs, hex_in);
        return kExitOk;
    }

    if (ctx_validate->parsed()) {
        ContextHandle ctx = load_context(context_path);
        char* report = nullptr;
        const schc_status rc = schc_context_validate(ctx.ptr, &report);
        if (rc == SCHC_OK) {
            std::cout << "ok: " << schc_context_rule_count(ctx.ptr) << " rule(s), "
                      << schc_context_descriptor_count(ctx.ptr) << " descriptor(s), "
                      << (schc_context_layered(ctx.ptr) ? "layered" : "flat") << " mode\n";
            return kExitOk;
        }
        if (report) {
            std::cerr << report;
            schc_free(report);
        }
        return exit_code_for(rc);
    }

    if (ctx_convert->parsed()) {
        ContextHandle ctx = load_context(context_path);
        Buffer out;
        const schc_status rc =
            schc_context_save(ctx.ptr, binary_by_extension(convert_out) ? 1 : 0,
                              reinterpret_cast<uint8_t**>(&out.ptr), &out.len);
        if (rc != SCHC_OK)
            fail(rc, "saving context");
        write_all(convert_out, out.bytes(), out.len);
        return kExitOk;
    }

    if (reg_register->parsed()) {
        ContextHandle rules = load_context(input);
        const bool layered = schc_context_layered(rules.ptr) != 0;
        if (mode != "flat" && mode != "layered")
            fail_usage("--mode must be flat or layered");
        RegistryHandle reg = open_registry(registry_path, true, layered);
        std::vector<uint16_t> ids(schc_context_rule_count(rules.ptr));
        size_t count = 0;
        const schc_status rc =
            schc_registry_register(reg.ptr, rules.ptr, ids.data(), ids.size(), &count);
        if (rc != SCHC_OK)
            fail(rc, "registering rules");
        save_registry(reg.ptr, registry_path);
        for (size_t i = 0; i < count; ++i)
            std::cout << "long " << ids[i] << "\n";
        return kExitOk;
    }

    if (reg_provision->parsed()) {
        RegistryHandle reg = open_registry(registry_path, false, false);
        const std::vector<uint8_t> addr = parse_hex_arg(device_hex, "--device");
        std::vector<uint16_t> selection;
        std::istringstream ss(rules_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty())
                continue;
            try {
                const unsigned long v = std::stoul(tok);
                if (v > 0xFFFF)
                    fail_usage("long ID out of range: " + tok);
                selection.push_back(static_cast<uint16_t>(v));
            } catch (const std::exception&) {
                fail_usage("bad long ID in --rules: " + tok);
            }
        }
        ContextHandle device_ctx;
        const schc_status rc = schc_registry_provision(reg.ptr, addr.data(), addr.size(),
                                                       selection.data(), selection.size(),
                                                       &device_ctx.ptr);
        if (rc != SCHC_OK)
            fail(rc, "provisioning device");
        save_registry(reg.ptr, registry_path);
        for (size_t i = 0; i < selection.size(); ++i)
            std::cout << "short " << i << " -> long " << selection[i] << "\n";
        if (!output.empty()) {
            Buffer buf;
            const schc_status src =
                schc_context_save(device_ctx.ptr, binary_by_extension(output) ? 1 : 0,
                                  reinterpret_cast<uint8_t**>(&buf.ptr), &buf.len);
            if (src != SCHC_OK)
                fail(src, "saving device context");
            write_all(output, buf.bytes(), buf.len);
            std::cout << "device context written to " << output << "\n";
        }
        return kExitOk;
    }

    if (reg_resolve->parsed()) {
        RegistryHandle reg = open_registry(registry_path, false, false);
        const std::vector<uint8_t> addr = parse_hex_arg(device_hex, "--device");
        uint16_t long_id = 0;
        char* text = nullptr;
        const schc_status rc = schc_registry_resolve(reg.ptr, addr.data(), addr.size(),
                                                     parse_scope(scope_name), short_id,
                                                     &long_id, &text);
        if (rc != SCHC_OK)
            fail(rc, "resolving short ID");
        std::cout << text;
        schc_free(text);
        return kExitOk;
    }

    if (reg_list->parsed()) {
        RegistryHandle reg = open_registry(registry_path, false, false);
        char* text = nullptr;
        const schc_status rc = schc_registry_describe(reg.ptr, &text);
        if (rc != SCHC_OK)
            fail(rc, "listing registry");
        std::cout << text;
        schc_free(text);
        return kExitOk;
    }

    if (cmd_bench->parsed()) {
        if (mode != "flat" && mode != "layered")
            fail_usage("--mode must be flat or layered");
        if (format != "text" && format != "csv")
            fail_usage("--format must be text or csv");
        char* text = nullptr;
        const schc_status rc = schc_bench_report(mode == "layered" ? 1 : 0, packets,
                                                 format == "csv" ? 1 : 0, &text);
        if (rc != SCHC_OK)
            fail(rc, "running benchmark");
        std::cout << text;
        schc_free(text);
        return kExitOk;
    }

    if (cmd_airtime->parsed()) {
        if (format != "text" && format != "csv")
            fail_usage("--format must be text or csv");
        char* text = nullptr;
        const uint32_t one_sf[1] = {sf};
        const schc_status rc = schc_airtime_table(payload_octets, sf ? one_sf : nullptr,
                                                  sf ? 1 : 0, duty, format == "csv" ? 1 : 0,
                                                  &text);
        if (rc != SCHC_OK)
            fail(rc, "computing airtime");
        std::cout << text;
        schc_free(text);
        return kExitOk;
    }

    return kExitUsage;
}
