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

// Exercises the shared-library surface: opaque handles, status codes,
// malloc'd buffers. Only schc/schc.h is included.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "schc/schc.h"

namespace {

// The built-in UDP flow: fd00::2 -> fd00::1, ports 8765 -> 5678, "Hello".
const char* kPacketHex =
    "60000000000d1140fd000000000000000000000000000002fd0000000000000000000000"
    "00000001223d162e000da99248656c6c6f";

const char* kContextJson = R"({
  "format_version": 1,
  "kind": "context",
  "mode": "flat",
  "layout": {"dispatch_bits": 3, "dispatch_value": 5, "rule_bits": 5,
             "alc_bits": 1, "tlc_bits": 2, "nlc_bits": 2},
  "rules": [
    {"id": 0, "fields": [
      {"field": "ipv6.version", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "06"},
      {"field": "ipv6.traffic_class", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "00"},
      {"field": "ipv6.flow_label", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "000000"},
      {"field": "ipv6.payload_length", "pos": 0, "dir": "bi", "op": "ignore", "action": "comp-length"},
      {"field": "ipv6.next_header", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "11"},
      {"field": "ipv6.hop_limit", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "40"},
      {"field": "ipv6.src_prefix", "pos": 0, "dir": "up", "op": "equal", "action": "not-sent", "target": "fd00000000000000"},
      {"field": "ipv6.src_iid", "pos": 0, "dir": "up", "op": "ignore", "action": "dev-iid"},
      {"field": "ipv6.dst_prefix", "pos": 0, "dir": "up", "op": "equal", "action": "not-sent", "target": "fd00000000000000"},
      {"field": "ipv6.dst_iid", "pos": 0, "dir": "up", "op": "equal", "action": "not-sent", "target": "0000000000000001"},
      {"field": "udp.src_port", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "223d"},
      {"field": "udp.dst_port", "pos": 0, "dir": "bi", "op": "equal", "action": "not-sent", "target": "162e"},
      {"field": "udp.length", "pos": 0, "dir": "bi", "op": "ignore", "action": "comp-length"},
      {"field": "udp.checksum", "pos": 0, "dir": "bi", "op": "ignore", "action": "comp-checksum"}
    ]}
  ]
})";

std::vector<uint8_t> from_hex(const std::string& hex)
{
    std::vector<uint8_t> out;
    for (size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
    return out;
}

const uint8_t kDeviceIid[8] = {0, 0, 0, 0, 0, 0, 0, 2};

schc_context* load_test_context()
{
    schc_context* ctx = nullptr;
    const schc_status rc = schc_context_load(
        reinterpret_cast<const uint8_t*>(kContextJson), std::strlen(kContextJson), &ctx);
    REQUIRE(rc == SCHC_OK);
    REQUIRE(ctx != nullptr);
    return ctx;
}

} // namespace

TEST_CASE("load, inspect and save a context through the C API")
{
    schc_context* ctx = load_test_context();
    CHECK(schc_context_layered(ctx) == 0);
    CHECK(schc_context_rule_count(ctx) == 1);
    CHECK(schc_context_descriptor_count(ctx) == 14);

    char* report = reinterpret_cast<char*>(0xdeadbeef);
    CHECK(schc_context_validate(ctx, &report) == SCHC_OK);
    CHECK(report == nullptr);

    uint8_t* binary = nullptr;
    size_t binary_len = 0;
    REQUIRE(schc_context_save(ctx, 1, &binary, &binary_len) == SCHC_OK);
    CHECK(binary_len > 0);

    schc_context* reloaded = nullptr;
    REQUIRE(schc_context_load(binary, binary_len, &reloaded) == SCHC_OK);
    CHECK(schc_context_descriptor_count(reloaded) == 14);

    // canonical form is byte-stable
    uint8_t* binary2 = nullptr;
    size_t binary2_len = 0;
    REQUIRE(schc_context_save(reloaded, 1, &binary2, &binary2_len) == SCHC_OK);
    REQUIRE(binary_len == binary2_len);
    CHECK(std::memcmp(binary, binary2, binary_len) == 0);

    schc_free(binary);
    schc_free(binary2);
    schc_context_free(reloaded);
    schc_context_free(ctx);
}

TEST_CASE("compress and decompress round trip over the wire format")
{
    schc_context* ctx = load_test_context();
    const std::vector<uint8_t> packet = from_hex(kPacketHex);

    uint8_t* frame = nullptr;
    size_t frame_len = 0;
    schc_compress_info info{};
    REQUIRE(schc_compress(ctx, packet.data(), packet.size(), SCHC_DIR_UP, &frame, &frame_len,
                          &info) == SCHC_OK);
    CHECK(info.matched == 1);
    CHECK(info.rule_id == 0);
    CHECK(info.residue_bits == 0);
    CHECK(info.header_octets == 1);
    REQUIRE(frame_len == 1 + 5);  // one header octet + "Hello"

    uint8_t* back = nullptr;
    size_t back_len = 0;
    REQUIRE(schc_decompress(ctx, frame, frame_len, SCHC_DIR_UP, kDeviceIid, &back, &back_len) ==
            SCHC_OK);
    REQUIRE(back_len == packet.size());
    CHECK(std::memcmp(back, packet.data(), back_len) == 0);

    schc_free(frame);
    schc_free(back);
    schc_context_free(ctx);
}

TEST_CASE("unmatched packets are framed with the reserved ID")
{
    schc_context* ctx = load_test_context();
    std::vector<uint8_t> packet = from_hex(kPacketHex);
    packet[7] = 99;  // hop limit breaks the match

    uint8_t* frame = nullptr;
    size_t frame_len = 0;
    schc_compress_info info{};
    REQUIRE(schc_compress(ctx, packet.data(), packet.size(), SCHC_DIR_UP, &frame, &frame_len,
                          &info) == SCHC_OK);
    CHECK(info.matched == 0);
    CHECK(info.rule_id == 31);
    CHECK(info.header_octets == 49);

    uint8_t* back = nullptr;
    size_t back_len = 0;
    REQUIRE(schc_decompress(ctx, frame, frame_len, SCHC_DIR_UP, kDeviceIid, &back, &back_len) ==
            SCHC_OK);
    REQUIRE(back_len == packet.size());
    CHECK(std::memcmp(back, packet.data(), back_len) == 0);

    schc_free(frame);
    schc_free(back);
    schc_context_free(ctx);
}

TEST_CASE("error paths set status codes and detail messages")
{
    const char* junk = "{\"not\": \"a context\"}";
    schc_context* ctx = nullptr;
    CHECK(schc_context_load(reinterpret_cast<const uint8_t*>(junk), std::strlen(junk), &ctx) ==
          SCHC_ERR_MALFORMED_DOCUMENT);
    CHECK(std::strlen(schc_last_error()) > 0);

    schc_context* good = load_test_context();
    const std::vector<uint8_t> short_frame{0x00};
    uint8_t* out = nullptr;
    size_t out_len = 0;
    CHECK(schc_decompress(good, short_frame.data(), short_frame.size(), SCHC_DIR_UP, kDeviceIid,
                          &out, &out_len) == SCHC_ERR_DISPATCH_MISMATCH);

    const std::vector<uint8_t> unknown_rule{0xa9, 0x00};  // dispatch ok, rule 9
    CHECK(schc_decompress(good, unknown_rule.data(), unknown_rule.size(), SCHC_DIR_UP,
                          kDeviceIid, &out, &out_len) == SCHC_ERR_UNKNOWN_RULE_ID);

    CHECK(schc_compress(nullptr, nullptr, 0, SCHC_DIR_UP, &out, &out_len, nullptr) ==
          SCHC_ERR_INVALID_PARAMS);
    schc_context_free(good);

    CHECK(std::string(schc_status_name(SCHC_ERR_UNKNOWN_RULE_ID)) == "unknown rule ID");
}

TEST_CASE("registry workflow through the C API")
{
    schc_registry* reg = nullptr;
    REQUIRE(schc_registry_new(0, &reg) == SCHC_OK);

    schc_context* rules = load_test_context();
    uint16_t ids[4] = {0xffff, 0xffff, 0xffff, 0xffff};
    size_t count = 0;
    REQUIRE(schc_registry_register(reg, rules, ids, 4, &count) == SCHC_OK);
    REQUIRE(count == 1);
    CHECK(ids[0] == 0);

    // registering the same rules again stores nothing new
    REQUIRE(schc_registry_register(reg, rules, ids, 4, &count) == SCHC_OK);
    CHECK(ids[0] == 0);
    CHECK(schc_registry_rule_count(reg) == 1);

    const uint8_t device[2] = {0xc2, 0x01};
    const uint16_t selection[1] = {0};
    schc_context* device_ctx = nullptr;
    REQUIRE(schc_registry_provision(reg, device, sizeof device, selection, 1, &device_ctx) ==
            SCHC_OK);
    REQUIRE(device_ctx != nullptr);
    CHECK(schc_context_rule_count(device_ctx) == 1);

    uint16_t long_id = 0xffff;
    char* text = nullptr;
    REQUIRE(schc_registry_resolve(reg, device, sizeof device, SCHC_SCOPE_FLAT, 0, &long_id,
                                  &text) == SCHC_OK);
    CHECK(long_id == 0);
    CHECK(text != nullptr);
    schc_free(text);

    CHECK(schc_registry_resolve(reg, device, sizeof device, SCHC_SCOPE_FLAT, 3, &long_id,
                                &text) == SCHC_ERR_UNKNOWN_SHORT_ID);

    // end to end: device context compresses, registry-rebuilt context decompresses
    const std::vector<uint8_t> packet = from_hex(kPacketHex);
    uint8_t* frame = nullptr;
    size_t frame_len = 0;
    REQUIRE(schc_compress(device_ctx, packet.data(), packet.size(), SCHC_DIR_UP, &frame,
                          &frame_len, nullptr) == SCHC_OK);
    schc_context* network_view = nullptr;
    REQUIRE(schc_registry_device_context(reg, device, sizeof device, &network_view) == SCHC_OK);
    uint8_t* back = nullptr;
    size_t back_len = 0;
    REQUIRE(schc_decompress(network_view, frame, frame_len, SCHC_DIR_UP, kDeviceIid, &back,
                            &back_len) == SCHC_OK);
    REQUIRE(back_len == packet.size());
    CHECK(std::memcmp(back, packet.data(), back_len) == 0);

    uint8_t* saved = nullptr;
    size_t saved_len = 0;
    REQUIRE(schc_registry_save(reg, 1, &saved, &saved_len) == SCHC_OK);
    schc_registry* reloaded = nullptr;
    REQUIRE(schc_registry_load(saved, saved_len, &reloaded) == SCHC_OK);
    CHECK(schc_registry_rule_count(reloaded) == 1);

    schc_free(saved);
    schc_free(frame);
    schc_free(back);
    schc_registry_free(reloaded);
    schc_registry_free(reg);
    schc_context_free(network_view);
    schc_context_free(device_ctx);
    schc_context_free(rules);
}

TEST_CASE("metrics and reports through the C API")
{
    schc_lora_params params{};
    REQUIRE(schc_lora_params_default(7, &params) == SCHC_OK);
    CHECK(params.bandwidth_hz == 125000);
    CHECK(params.low_data_rate_optimize == 0);

    double toa = 0.0;
    REQUIRE(schc_lora_time_on_air(&params, 1, &toa) == SCHC_OK);
    CHECK(toa == doctest::Approx(25.856));

    double interval = 0.0;
    REQUIRE(schc_duty_cycle_min_interval(100.0, 0.001, &interval) == SCHC_OK);
    CHECK(interval == doctest::Approx(99900.0));

    REQUIRE(schc_lora_params_default(42, &params) == SCHC_ERR_INVALID_PARAMS);

    char* text = nullptr;
    REQUIRE(schc_bench_report(1, 0, 0, &text) == SCHC_OK);
    CHECK(std::string(text).find("udp-global") != std::string::npos);
    schc_free(text);

    REQUIRE(schc_airtime_table(2, nullptr, 0, 0.001, 1, &text) == SCHC_OK);
    CHECK(std::string(text).find("12,2,") != std::string::npos);
    schc_free(text);

    CHECK(std::string(schc_version()) == "1.0.0");
}
