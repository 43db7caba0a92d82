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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "schc/bench.hpp"
#include "schc/context_io.hpp"
#include "schc/engine.hpp"
#include "schc/metrics.hpp"

#include "lora_golden.inc"

using namespace schc;
using namespace schc::test;

namespace {

struct Failure {
    std::string reason;
};

void expect(bool cond, const std::string& what)
{
    if (!cond)
        throw Failure{what};
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const BenchFlow& flow_by_name(const std::vector<BenchFlow>& flows, const std::string& name)
{
    for (const auto& f : flows)
        if (f.name == name)
            return f;
    throw Failure{"missing flow " + name};
}

// 1. Matched IPv6/UDP headers: 48 octets down to exactly one.
void criterion_udp_one_octet()
{
    const std::vector<BenchFlow> flows = benchmark_flows();
    const BenchFlow& udp = flow_by_name(flows, "udp-global");
    expect(udp.packet.header_octets() == 48, "UDP flow headers must be 48 octets");
    for (bool layered : {false, true}) {
        const Context ctx = benchmark_context(layered);
        const CompressedPacket pkt = compress(ctx, udp.packet);
        expect(!pkt.uncompressed(), "flow must match a rule");
        expect(pkt.residue.bit_size() == 0, "residue must be empty");
        expect(pkt.dispatch.bit_size() == 3 && pkt.rule_id.bit_size() == 5,
               "3-bit dispatch + 5-bit rule ID");
        expect(compressed_size_octets(pkt) == 1,
               std::string(layered ? "layered" : "flat") + ": expected 1 octet, got " +
                   std::to_string(compressed_size_octets(pkt)));
    }
}

// 2. Matched IPv6/ICMPv6 headers: 44 octets down to exactly two.
void criterion_icmpv6_two_octets()
{
    const std::vector<BenchFlow> flows = benchmark_flows();
    for (const char* name : {"icmpv6-multicast", "icmpv6-linklocal"}) {
        const BenchFlow& flow = flow_by_name(flows, name);
        expect(flow.packet.header_octets() == 44, "ICMPv6 flow headers must be 44 octets");
        for (bool layered : {false, true}) {
            const Context ctx = benchmark_context(layered);
            const CompressedPacket pkt = compress(ctx, flow.packet);
            expect(!pkt.uncompressed(), "flow must match a rule");
            expect(compressed_size_octets(pkt) == 2,
                   std::string(name) + ": expected 2 octets, got " +
                       std::to_string(compressed_size_octets(pkt)));
        }
    }
}

// 3. Non-matching packets ride rule ID 31 with raw headers and decompress.
void criterion_reserved_id()
{
    Rng rng(301);
    const Context flat = benchmark_context(false);
    const Context layered = benchmark_context(true);
    for (int i = 0; i < 50; ++i) {
        const HeaderStack packet =
            build_packet(rng, random_values(rng, random_shape(rng)), Direction::kUp,
                         rng.u32(0, 19));
        for (const Context* ctx : {&flat, &layered}) {
            const CompressedPacket pkt = compress(*ctx, packet);
            if (pkt.uncompressed()) {
                expect(pkt.rule_id.to_uint() == 31, "reserved ID must be 31");
                expect(pkt.residue.bit_size() == packet.header_octets() * 8,
                       "residue must carry the raw headers");
                const HeaderStack back = decompress(*ctx, pkt, env_for(packet));
                expect(serialize_stack(back) == serialize_stack(packet),
                       "reserved-path decompression must be exact");
            }
        }
    }
    // A guaranteed miss: hop limit outside every rule's target.
    HeaderStack miss = canonical_udp_packet(2);
    miss.network.hop_limit = 7;
    miss.udp().checksum = compute_checksum(miss, ChecksumLayer::kUdp);
    const CompressedPacket pkt = compress(flat, miss);
    expect(pkt.uncompressed() && pkt.rule_id.to_uint() == 31, "miss must use ID 31");
    const HeaderStack back = decompress(flat, pkt, env_for(miss));
    expect(serialize_stack(back) == serialize_stack(miss), "exact reconstruction");
}

// 4. 10,000 randomized matching round trips, bit-exact.
void criterion_round_trip()
{
    Rng rng(20260810);
    for (int i = 0; i < 10000; ++i) {
        if (i % 2 == 0) {
            const FlatCase c = random_flat_case(rng);
            const CompressedPacket pkt = compress(c.ctx, c.packet);
            expect(!pkt.uncompressed(), "generated packet must match its rule");
            const std::vector<uint8_t> wire = pkt.to_bytes();
            Context ctx{c.ctx};
            const HeaderStack back = decompress_bytes(ctx, wire, env_for(c.packet));
            expect(serialize_stack(back) == serialize_stack(c.packet),
                   "flat round trip failed at iteration " + std::to_string(i));
        } else {
            const LayeredCase c = random_layered_case(rng);
            const CompressedPacket pkt = compress(c.ctx, c.packet);
            const std::vector<uint8_t> wire = pkt.to_bytes();
            Context ctx{c.ctx};
            const HeaderStack back = decompress_bytes(ctx, wire, env_for(c.packet));
            expect(serialize_stack(back) == serialize_stack(c.packet),
                   "layered round trip failed at iteration " + std::to_string(i));
        }
    }
}

// 5. Layered and flattened contexts produce identical residue content for
//    fully matched packets; sharing a layer rule makes the layered form
//    strictly smaller.
void criterion_flat_layered_equivalence()
{
    Rng rng(505);
    for (int i = 0; i < 1000; ++i) {
        const LayeredCase c = random_layered_case(rng);
        const CompressedPacket via_layered = compress(c.ctx, c.packet);
        const CompressedPacket via_flat = compress(c.flat, c.packet);
        expect(!via_layered.uncompressed() && !via_flat.uncompressed(),
               "both sides must match at iteration " + std::to_string(i));
        expect(via_layered.residue == via_flat.residue,
               "residue content differs at iteration " + std::to_string(i));
        expect(compressed_size_octets(via_layered) == compressed_size_octets(via_flat),
               "compressed sizes differ at iteration " + std::to_string(i));
    }

    // Two flows sharing one IPv6 rule: 10 network descriptors stored once
    // (18 total) against twice (28 total) in the flat cross-product.
    LayeredContext shared;
    const auto net = slice_layer(canonical_udp_rule().fields, Layer::kNetwork);
    auto udp_a = slice_layer(canonical_udp_rule().fields, Layer::kTransport);
    auto udp_b = udp_a;
    udp_b[0].target = BitString::from_uint(5230, 16);
    udp_b[1].target = BitString::from_uint(5230, 16);
    shared.nlc.push_back({1, Layer::kNetwork, net});
    shared.tlc.push_back({1, Layer::kTransport, udp_a});
    shared.tlc.push_back({2, Layer::kTransport, udp_b});
    const FlatContext image = flatten(shared);
    expect(image.rules.size() == 2, "two flat rules expected");
    expect(descriptor_count(shared) == 18, "layered form stores 18 descriptors");
    expect(descriptor_count(image) == 28, "flat form stores 28 descriptors");
    expect(descriptor_count(shared) < descriptor_count(image),
           "sharing must make the layered form strictly smaller");
}

// 6. A packet matching only the network-layer rule still compresses.
void criterion_partial_layer()
{
    LayeredContext ctx;
    ctx.nlc.push_back(
        {0, Layer::kNetwork, slice_layer(canonical_udp_rule().fields, Layer::kNetwork)});
    ctx.tlc.push_back(
        {0, Layer::kTransport, slice_layer(canonical_udp_rule().fields, Layer::kTransport)});

    HeaderStack packet = canonical_udp_packet(2);
    packet.udp().src_port = 40001;  // transport rule cannot match
    packet.udp().dst_port = 40002;
    packet.udp().checksum = compute_checksum(packet, ChecksumLayer::kUdp);

    const LayeredSelection sel = select_rule_layered(ctx, packet);
    expect(sel.nlc.has_value() && !sel.tlc.has_value(), "only the network layer matches");

    const CompressedPacket pkt = compress(ctx, packet);
    expect(!pkt.uncompressed(), "partial match must not fall back to the reserved frame");
    expect(compressed_size_octets(pkt) < 49,
           "compressed " + std::to_string(compressed_size_octets(pkt)) +
               " octets must beat the 49-octet reserved framing");
    const HeaderStack back = decompress(ctx, pkt, env_for(packet));
    expect(serialize_stack(back) == serialize_stack(packet), "partial round trip exact");
}

// 7. Selection equals the brute-force minimum residue; ties resolve to the
//    lowest rule ID.
void criterion_selection_optimality()
{
    Rng rng(707);
    for (int i = 0; i < 2000; ++i) {
        const FlatCase c = random_flat_case(rng);
        expect(c.ctx.rules.size() <= 16, "context size bound");
        const auto sel = select_rule_flat(c.ctx, c.packet);
        expect(sel.has_value(), "generated packet must match");

        bool any = false;
        size_t best_bits = 0;
        uint32_t best_id = 0;
        for (const auto& rule : c.ctx.rules) {
            if (!match_rule(rule, c.packet))
                continue;
            const size_t bits = rule_residue_bits(rule.fields);
            if (!any || bits < best_bits || (bits == best_bits && rule.rule_id < best_id)) {
                any = true;
                best_bits = bits;
                best_id = rule.rule_id;
            }
        }
        expect(any, "brute force must agree that something matches");
        expect(sel->residue_bits == best_bits,
               "residue " + std::to_string(sel->residue_bits) + " != brute-force minimum " +
                   std::to_string(best_bits) + " at iteration " + std::to_string(i));
        expect(sel->rule_id == best_id, "tie must resolve to the lowest rule ID");
    }
}

// 8. Compression factors of the scenario flows.
void criterion_compression_factors()
{
    const Context ctx = benchmark_context(false);
    const std::vector<BenchFlow> flows = benchmark_flows();
    const CompressedPacket udp = compress(ctx, flow_by_name(flows, "udp-global").packet);
    const CompressedPacket icmp_a =
        compress(ctx, flow_by_name(flows, "icmpv6-multicast").packet);
    const CompressedPacket icmp_b =
        compress(ctx, flow_by_name(flows, "icmpv6-linklocal").packet);

    const double udp_factor = compression_factor(48, static_cast<uint32_t>(
                                                          compressed_size_octets(udp)));
    const double a_factor =
        compression_factor(44, static_cast<uint32_t>(compressed_size_octets(icmp_a)));
    const double b_factor =
        compression_factor(44, static_cast<uint32_t>(compressed_size_octets(icmp_b)));
    expect(udp_factor == 48.0, "UDP factor must be exactly 48, got " + fmt(udp_factor));
    expect(a_factor == 22.0, "ICMPv6 factor must be exactly 22, got " + fmt(a_factor));
    expect(b_factor == 22.0, "ICMPv6 factor must be exactly 22, got " + fmt(b_factor));
}

// 9. Airtime against the independently generated table, plus monotonicity.
void criterion_lora_airtime()
{
    for (uint32_t sf = 7; sf <= 12; ++sf) {
        const LoraParams params = lora_params_for_sf(sf);
        for (uint32_t pl = 1; pl <= 60; ++pl) {
            const double got = lora_time_on_air(params, pl);
            const double want = kLoraGoldenMs[sf - 7][pl - 1];
            expect(std::fabs(got - want) < 0.01,
                   "SF" + std::to_string(sf) + " payload " + std::to_string(pl) + ": " +
                       fmt(got) + " vs oracle " + fmt(want));
        }
    }
    for (uint32_t pl = 1; pl <= 60; ++pl)
        for (uint32_t sf = 8; sf <= 12; ++sf)
            expect(lora_time_on_air(lora_params_for_sf(sf), pl) >
                       lora_time_on_air(lora_params_for_sf(sf - 1), pl),
                   "airtime must strictly increase with SF");
    for (uint32_t sf = 7; sf <= 12; ++sf)
        for (uint32_t pl = 2; pl <= 60; ++pl)
            expect(lora_time_on_air(lora_params_for_sf(sf), pl) >=
                       lora_time_on_air(lora_params_for_sf(sf), pl - 1),
                   "airtime must be non-decreasing in payload");
}

// 10. Registry: one stored copy for two devices; short-ID resolution feeds
//     network-side decompression exactly.
void criterion_registry_end_to_end()
{
    RuleRegistry reg(false, RuleIdLayout{});
    const StoredRule rule{std::nullopt, canonical_udp_rule().fields};
    const uint16_t id_a = reg.register_rule(rule);
    const uint16_t id_b = reg.register_rule(rule);  // second device registers the same rule
    expect(id_a == id_b, "identical rules must share one long ID");
    expect(reg.rule_count() == 1, "registry must store exactly one copy");

    const std::vector<uint8_t> dev_a{0x0a};
    const std::vector<uint8_t> dev_b{0x0b};
    const Context ctx_a = reg.provision_device(dev_a, {id_a});
    StoredRule filler{std::nullopt, canonical_udp_rule().fields};
    filler.fields[5] = fd_eq(FieldId::kIpv6HopLimit, 77);
    const uint16_t id_f = reg.register_rule(filler);
    const Context ctx_b = reg.provision_device(dev_b, {id_f, id_a});

    const HeaderStack packet = canonical_udp_packet(3);
    const CompressedPacket from_a = compress(ctx_a, packet);
    const CompressedPacket from_b = compress(ctx_b, packet);
    expect(!from_a.uncompressed() && !from_b.uncompressed(), "both devices must match");
    expect(from_a.rule_id.to_uint() == 0 && from_b.rule_id.to_uint() == 1,
           "devices use their own short IDs");

    for (const auto& [dev, pkt] : {std::pair{dev_a, from_a}, std::pair{dev_b, from_b}}) {
        const uint32_t short_id = static_cast<uint32_t>(pkt.rule_id.to_uint());
        const auto [long_id, stored] = reg.resolve(dev, RuleScope::kFlat, short_id);
        expect(long_id == id_a && *stored == rule, "resolution must find the shared rule");
        const Context network_view = reg.device_context(dev);
        const HeaderStack back =
            decompress_bytes(network_view, pkt.to_bytes(), canonical_env());
        expect(serialize_stack(back) == serialize_stack(packet),
               "network-side reconstruction must be exact");
    }
}

// 11. The computed mix mean is ~1.46 and the published averages appear as
//     labeled reference constants, not as reproduced results.
void criterion_reported_averages()
{
    const std::vector<FlowStats> mix{{"udp", 358.33, 48, 1}, {"icmpv6", 301.66, 44, 2}};
    const double mean = average_octets_per_packet(mix);
    expect(mean >= 1.0 && mean <= 2.0, "computed mean " + fmt(mean) + " outside [1, 2]");
    expect(std::fabs(mean - 1.457) < 0.001, "computed mean " + fmt(mean) + " != 1.457");

    for (bool layered : {false, true}) {
        const std::string report =
            bench_report(layered, kBenchDefaultPackets, ReportFormat::kText);
        expect(report.find("2.66") != std::string::npos,
               "report must cite the published 2.66 octets/packet");
        expect(report.find("7.69") != std::string::npos,
               "report must cite the published 7.69 octets/packet");
        expect(report.find("reference") != std::string::npos,
               "published averages must be labeled as reference constants");
        expect(report.find("1.457") != std::string::npos,
               "report must print the computed weighted mean");
    }
}

struct Criterion {
    int number;
    const char* description;
    std::function<void()> run;
    double budget_seconds;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "matched IPv6/UDP flow compresses 48-octet headers to 1 octet",
         criterion_udp_one_octet, 1.0},
        {2, "matched IPv6/ICMPv6 flows compress 44-octet headers to 2 octets",
         criterion_icmpv6_two_octets, 1.0},
        {3, "non-matching packets use reserved ID 31 and decompress exactly",
         criterion_reserved_id, 10.0},
        {4, "10,000 randomized compress/decompress round trips are bit-exact",
         criterion_round_trip, 60.0},
        {5, "layered and flattened contexts agree; sharing shrinks storage",
         criterion_flat_layered_equivalence, 60.0},
        {6, "network-only match compresses below the 49-octet reserved framing",
         criterion_partial_layer, 10.0},
        {7, "rule selection equals the brute-force optimum with lowest-ID ties",
         criterion_selection_optimality, 60.0},
        {8, "compression factors: UDP flow 48.0, ICMPv6 flows 22.0",
         criterion_compression_factors, 10.0},
        {9, "LoRa airtime matches the formula oracle within 0.01 ms",
         criterion_lora_airtime, 10.0},
        {10, "registry stores one copy and resolves to exact reconstruction",
         criterion_registry_end_to_end, 10.0},
        {11, "bench prints computed mix mean in [1,2] beside cited averages",
         criterion_reported_averages, 10.0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string reason;
        bool ok = true;
        try {
            c.run();
        } catch (const Failure& f) {
            ok = false;
            reason = f.reason;
        } catch (const std::exception& e) {
            ok = false;
            reason = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && elapsed > c.budget_seconds) {
            ok = false;
            reason = "took " + fmt(elapsed) + " s, budget " + fmt(c.budget_seconds) + " s";
        }
        if (ok) {
            std::printf("PASS  criterion %2d (%5.2fs): %s\n", c.number, elapsed, c.description);
        } else {
            std::printf("FAIL  criterion %2d (%5.2fs): %s\n      %s\n", c.number, elapsed,
                        c.description, reason.c_str());
            ++failures;
        }
    }
    if (failures) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
