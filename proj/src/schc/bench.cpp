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

#include "schc/bench.hpp"

#include <cstdio>
#include <sstream>

namespace schc {

namespace {

constexpr uint64_t kLinkLocalPrefix = 0xfe80000000000000ULL;
constexpr uint64_t kAllNodesPrefix = 0xff02000000000000ULL;
constexpr uint64_t kGlobalPrefix = 0xfd00000000000000ULL;
constexpr uint64_t kRootIid = 0x0000000000000001ULL;

constexpr uint16_t kUdpClientPort = 8765;
constexpr uint16_t kUdpServerPort = 5678;

FieldDescriptor eq(FieldId field, uint64_t value,
                   DirIndicator dir = DirIndicator::kBidirectional)
{
    FieldDescriptor d;
    d.field = field;
    d.direction = dir;
    d.op = MatchOp::kEqual;
    d.action = CdAction::kNotSent;
    d.target = BitString::from_uint(value, field_width(field));
    return d;
}

FieldDescriptor ign(FieldId field, CdAction action,
                    DirIndicator dir = DirIndicator::kBidirectional)
{
    FieldDescriptor d;
    d.field = field;
    d.direction = dir;
    d.op = MatchOp::kIgnore;
    d.action = action;
    return d;
}

std::vector<FieldDescriptor> ipv6_fields(uint8_t next_header, uint8_t hop_limit,
                                         uint64_t src_prefix, uint64_t dst_prefix,
                                         uint64_t dst_iid)
{
    return {
        eq(FieldId::kIpv6Version, 6),
        eq(FieldId::kIpv6TrafficClass, 0),
        eq(FieldId::kIpv6FlowLabel, 0),
        ign(FieldId::kIpv6PayloadLength, CdAction::kCompLength),
        eq(FieldId::kIpv6NextHeader, next_header),
        eq(FieldId::kIpv6HopLimit, hop_limit),
        eq(FieldId::kIpv6SrcPrefix, src_prefix, DirIndicator::kUp),
        ign(FieldId::kIpv6SrcIid, CdAction::kDevIidFromDeviceId, DirIndicator::kUp),
        eq(FieldId::kIpv6DstPrefix, dst_prefix, DirIndicator::kUp),
        eq(FieldId::kIpv6DstIid, dst_iid, DirIndicator::kUp),
    };
}

// One in-line octet selects the ICMPv6 message type; the code is pinned and
// the checksum is recomputed at the decompressor.
std::vector<FieldDescriptor> icmpv6_fields()
{
    return {
        ign(FieldId::kIcmpv6Type, CdAction::kValueSent),
        eq(FieldId::kIcmpv6Code, 0),
        ign(FieldId::kIcmpv6Checksum, CdAction::kCompChecksum),
    };
}

std::vector<FieldDescriptor> udp_fields()
{
    return {
        eq(FieldId::kUdpSrcPort, kUdpClientPort),
        eq(FieldId::kUdpDstPort, kUdpServerPort),
        ign(FieldId::kUdpLength, CdAction::kCompLength),
        ign(FieldId::kUdpChecksum, CdAction::kCompChecksum),
    };
}

std::vector<FieldDescriptor> concat(std::vector<FieldDescriptor> a,
                                    const std::vector<FieldDescriptor>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

HeaderStack make_icmpv6_packet(uint64_t dst_prefix, uint64_t dst_iid, uint8_t msg_type,
                               size_t payload_octets)
{
    HeaderStack stack;
    stack.direction = Direction::kUp;
    stack.network.next_header = kNextHeaderIcmpv6;
    stack.network.hop_limit = 255;
    stack.network.src_prefix = kLinkLocalPrefix;
    stack.network.src_iid = kBenchDeviceIid;
    stack.network.dst_prefix = dst_prefix;
    stack.network.dst_iid = dst_iid;
    Icmpv6Header icmp;
    icmp.msg_type = msg_type;
    icmp.code = 0;
    stack.transport = icmp;
    stack.payload.assign(payload_octets, 0);
    stack.icmpv6().checksum = compute_checksum(stack, ChecksumLayer::kIcmpv6);
    return stack;
}

HeaderStack make_udp_packet()
{
    HeaderStack stack;
    stack.direction = Direction::kUp;
    stack.network.next_header = kNextHeaderUdp;
    stack.network.hop_limit = 64;
    stack.network.src_prefix = kGlobalPrefix;
    stack.network.src_iid = kBenchDeviceIid;
    stack.network.dst_prefix = kGlobalPrefix;
    stack.network.dst_iid = kRootIid;
    UdpHeader udp;
    udp.src_port = kUdpClientPort;
    udp.dst_port = kUdpServerPort;
    stack.transport = udp;
    const char* hello = "Hello";
    stack.payload.assign(hello, hello + 5);
    stack.udp().checksum = compute_checksum(stack, ChecksumLayer::kUdp);
    return stack;
}

struct FlowResult {
    const BenchFlow* flow;
    uint32_t uncompressed_octets;
    uint32_t compressed_octets;
};

std::vector<FlowResult> run_flows(const Context& ctx, const std::vector<BenchFlow>& flows)
{
    std::vector<FlowResult> results;
    for (const auto& flow : flows) {
        const CompressedPacket pkt = compress(ctx, flow.packet);
        DecompressionEnvironment env{kBenchDeviceIid, Direction::kUp, std::nullopt};
        const HeaderStack back = decompress(ctx, pkt, env);
        if (serialize_stack(back) != serialize_stack(flow.packet))
            raise(Errc::kInternal, "scenario round trip failed for flow " + flow.name);
        results.push_back({&flow, static_cast<uint32_t>(flow.packet.header_octets()),
                           static_cast<uint32_t>(compressed_size_octets(pkt))});
    }
    return results;
}

} // namespace

std::vector<BenchFlow> benchmark_flows(double total_packets)
{
    const double scale = total_packets / kBenchDefaultPackets;
    std::vector<BenchFlow> flows;
    flows.push_back({"icmpv6-multicast",
                     make_icmpv6_packet(kAllNodesPrefix, kRootIid, 135, 4), 150.83 * scale, 6});
    flows.push_back({"icmpv6-linklocal",
                     make_icmpv6_packet(kLinkLocalPrefix, kRootIid, 155, 2), 150.83 * scale, 6});
    flows.push_back({"udp-global", make_udp_packet(), 358.33 * scale, 4});
    return flows;
}

Context benchmark_context(bool layered)
{
    const auto net_a = ipv6_fields(kNextHeaderIcmpv6, 255, kLinkLocalPrefix, kAllNodesPrefix,
                                   kRootIid);
    const auto net_b = ipv6_fields(kNextHeaderIcmpv6, 255, kLinkLocalPrefix, kLinkLocalPrefix,
                                   kRootIid);
    const auto net_c = ipv6_fields(kNextHeaderUdp, 64, kGlobalPrefix, kGlobalPrefix, kRootIid);

    Context ctx;
    if (layered) {
        LayeredContext l;
        l.nlc = {{0, Layer::kNetwork, net_a},
                 {1, Layer::kNetwork, net_b},
                 {2, Layer::kNetwork, net_c}};
        l.tlc = {{0, Layer::kTransport, icmpv6_fields()}, {1, Layer::kTransport, udp_fields()}};
        ctx.value = std::move(l);
    } else {
        FlatContext f;
        f.rules = {{0, concat(net_a, icmpv6_fields())},
                   {1, concat(net_b, icmpv6_fields())},
                   {2, concat(net_c, udp_fields())}};
        ctx.value = std::move(f);
    }
    return ctx;
}

std::string bench_report(bool layered, double total_packets, ReportFormat format)
{
    const Context ctx = benchmark_context(layered);
    const std::vector<BenchFlow> flows = benchmark_flows(total_packets);
    const std::vector<FlowResult> results = run_flows(ctx, flows);

    std::vector<FlowStats> schc_stats;
    std::vector<FlowStats> iphc_stats;
    for (const auto& r : results) {
        schc_stats.push_back(
            {r.flow->name, r.flow->count, r.uncompressed_octets, r.compressed_octets});
        iphc_stats.push_back({r.flow->name, r.flow->count, r.uncompressed_octets,
                              r.flow->iphc_reference_octets});
    }
    const double schc_mean = average_octets_per_packet(schc_stats);
    const double iphc_mean = average_octets_per_packet(iphc_stats);

    const Context flat_equiv = benchmark_context(false);
    const Context layered_equiv = benchmark_context(true);
    const size_t flat_desc = descriptor_count(flat_equiv);
    const size_t layered_desc = descriptor_count(layered_equiv);

    std::vector<LoraParams> params;
    for (uint32_t sf = 7; sf <= 12; ++sf)
        params.push_back(lora_params_for_sf(sf));

    std::ostringstream out;
    char line[256];
    if (format == ReportFormat::kCsv) {
        out << "flow,count,uncompressed_octets,schc_octets,schc_factor,iphc_octets,iphc_factor\n";
        for (const auto& r : results) {
            std::snprintf(line, sizeof line, "%s,%.2f,%u,%u,%.2f,%u,%.2f\n",
                          r.flow->name.c_str(), r.flow->count, r.uncompressed_octets,
                          r.compressed_octets,
                          compression_factor(r.uncompressed_octets, r.compressed_octets),
                          r.flow->iphc_reference_octets,
                          compression_factor(r.uncompressed_octets,
                                             r.flow->iphc_reference_octets));
            out << line;
        }
        std::snprintf(line, sizeof line, "mean_octets_per_packet,schc,%.3f\n", schc_mean);
        out << line;
        std::snprintf(line, sizeof line, "mean_octets_per_packet,iphc,%.3f\n", iphc_mean);
        out << line;
        std::snprintf(line, sizeof line, "reported_reference,schc,%.2f\n", kReportedSchcAverage);
        out << line;
        std::snprintf(line, sizeof line, "reported_reference,iphc,%.2f\n", kReportedIphcAverage);
        out << line;
        out << "scheme,flow,sf,toa_ms\n";
        for (const auto& r : results) {
            for (const auto& p : params) {
                std::snprintf(line, sizeof line, "schc,%s,%u,%.3f\n", r.flow->name.c_str(),
                              p.spreading_factor, lora_time_on_air(p, r.compressed_octets));
                out << line;
                std::snprintf(line, sizeof line, "iphc,%s,%u,%.3f\n", r.flow->name.c_str(),
                              p.spreading_factor,
                              lora_time_on_air(p, r.flow->iphc_reference_octets));
                out << line;
                std::snprintf(line, sizeof line, "uncompressed,%s,%u,%.3f\n",
                              r.flow->name.c_str(), p.spreading_factor,
                              lora_time_on_air(p, r.uncompressed_octets));
                out << line;
            }
        }
        return out.str();
    }

    out << "header compression benchmark (" << (layered ? "layered" : "flat") << " context)\n";
    out << "\nper-flow header sizes\n";
    std::snprintf(line, sizeof line, "  %-18s %9s %6s %6s %7s %6s %7s\n", "flow", "packets",
                  "raw", "schc", "factor", "iphc", "factor");
    out << line;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "  %-18s %9.2f %6u %6u %7.2f %6u %7.2f\n",
                      r.flow->name.c_str(), r.flow->count, r.uncompressed_octets,
                      r.compressed_octets,
                      compression_factor(r.uncompressed_octets, r.compressed_octets),
                      r.flow->iphc_reference_octets,
                      compression_factor(r.uncompressed_octets, r.flow->iphc_reference_octets));
        out << line;
    }

    out << "\nheader octets per packet, weighted by the flow mix\n";
    std::snprintf(line, sizeof line, "  computed: schc %.3f, iphc %.3f\n", schc_mean, iphc_mean);
    out << line;
    std::snprintf(line, sizeof line,
                  "  reported emulation averages (reference constants): schc %.2f, iphc %.2f\n",
                  kReportedSchcAverage, kReportedIphcAverage);
    out << line;

    std::snprintf(line, sizeof line,
                  "\nstored context descriptors: %zu (layered) vs %zu (flat)\n", layered_desc,
                  flat_desc);
    out << line;

    out << "\nheader airtime over LoRa, ms (125 kHz, CR 4/5, 8 preamble symbols)\n";
    out << "  flow               scheme        ";
    for (const auto& p : params) {
        std::snprintf(line, sizeof line, "%9s%u", "SF", p.spreading_factor);
        out << line;
    }
    out << "\n";
    for (const auto& r : results) {
        struct Row {
            const char* scheme;
            uint32_t octets;
        } rows[] = {{"schc", r.compressed_octets},
                    {"iphc", r.flow->iphc_reference_octets},
                    {"uncompressed", r.uncompressed_octets}};
        for (const auto& row : rows) {
            std::snprintf(line, sizeof line, "  %-18s %-12s", r.flow->name.c_str(), row.scheme);
            out << line;
            for (const auto& p : params) {
                std::snprintf(line, sizeof line, "%10.2f", lora_time_on_air(p, row.octets));
                out << line;
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string airtime_table(uint32_t payload_octets, const std::vector<uint32_t>& sfs,
                          double duty_cycle, ReportFormat format)
{
    std::ostringstream out;
    char line[160];
    if (format == ReportFormat::kCsv)
        out << "sf,payload_octets,toa_ms,min_interval_ms\n";
    else {
        std::snprintf(line, sizeof line, "airtime for %u octet(s), duty cycle %.2f%%\n",
                      payload_octets, duty_cycle * 100.0);
        out << line;
        std::snprintf(line, sizeof line, "  %4s %12s %18s\n", "sf", "toa_ms", "min_interval_ms");
        out << line;
    }
    for (uint32_t sf : sfs) {
        LoraParams p = lora_params_for_sf(sf);
        p.duty_cycle = duty_cycle;
        const double toa = lora_time_on_air(p, payload_octets);
        const double interval = duty_cycle_min_interval(toa, duty_cycle);
        if (format == ReportFormat::kCsv)
            std::snprintf(line, sizeof line, "%u,%u,%.3f,%.3f\n", sf, payload_octets, toa,
                          interval);
        else
            std::snprintf(line, sizeof line, "  %4u %12.3f %18.3f\n", sf, toa, interval);
        out << line;
    }
    return out.str();
}

} // namespace schc
