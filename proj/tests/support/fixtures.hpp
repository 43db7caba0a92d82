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

#ifndef SCHC_TESTS_FIXTURES_HPP_
#define SCHC_TESTS_FIXTURES_HPP_

#include "schc/engine.hpp"
#include "schc/packet.hpp"
#include "schc/rules.hpp"

namespace schc::test {

constexpr uint64_t kAlphaPrefix = 0x20010db8000000aaULL;
constexpr uint64_t kBetaPrefix = 0x20010db8000000bbULL;
constexpr uint64_t kDeviceIid = 0x00000000000000c2ULL;
constexpr uint64_t kServerIid = 0x0000000000001000ULL;

inline FieldDescriptor fd_eq(FieldId field, uint64_t value,
                             DirIndicator dir = DirIndicator::kBidirectional)
{
    return {field, 0, dir, BitString::from_uint(value, field_width(field)), MatchOp::kEqual,
            CdAction::kNotSent};
}

inline FieldDescriptor fd_ign(FieldId field, CdAction action,
                              DirIndicator dir = DirIndicator::kBidirectional)
{
    return {field, 0, dir, std::nullopt, MatchOp::kIgnore, action};
}

/// The canonical IPv6/UDP example rule: both port targets 5683, hop limit
/// 255, source IID derived from the device identity.
inline FlatRule canonical_udp_rule(uint32_t rule_id = 0)
{
    FlatRule r;
    r.rule_id = rule_id;
    r.fields = {
        fd_eq(FieldId::kIpv6Version, 6),
        fd_eq(FieldId::kIpv6TrafficClass, 0),
        fd_eq(FieldId::kIpv6FlowLabel, 0),
        fd_ign(FieldId::kIpv6PayloadLength, CdAction::kCompLength),
        fd_eq(FieldId::kIpv6NextHeader, 17),
        fd_eq(FieldId::kIpv6HopLimit, 255),
        fd_eq(FieldId::kIpv6SrcPrefix, kAlphaPrefix, DirIndicator::kUp),
        fd_ign(FieldId::kIpv6SrcIid, CdAction::kDevIidFromDeviceId, DirIndicator::kUp),
        fd_eq(FieldId::kIpv6DstPrefix, kBetaPrefix, DirIndicator::kUp),
        fd_eq(FieldId::kIpv6DstIid, kServerIid, DirIndicator::kUp),
        fd_eq(FieldId::kUdpSrcPort, 5683),
        fd_eq(FieldId::kUdpDstPort, 5683),
        fd_ign(FieldId::kUdpLength, CdAction::kCompLength),
        fd_ign(FieldId::kUdpChecksum, CdAction::kCompChecksum),
    };
    return r;
}

/// A packet fully matching canonical_udp_rule(). Payloads of four or more
/// octets on port 5683 could be taken for a CoAP header, so keep it short.
inline HeaderStack canonical_udp_packet(size_t payload_octets = 0)
{
    HeaderStack stack;
    stack.direction = Direction::kUp;
    stack.network.next_header = 17;
    stack.network.hop_limit = 255;
    stack.network.src_prefix = kAlphaPrefix;
    stack.network.src_iid = kDeviceIid;
    stack.network.dst_prefix = kBetaPrefix;
    stack.network.dst_iid = kServerIid;
    UdpHeader udp;
    udp.src_port = 5683;
    udp.dst_port = 5683;
    stack.transport = udp;
    stack.payload.assign(payload_octets, 0x5a);
    stack.udp().checksum = compute_checksum(stack, ChecksumLayer::kUdp);
    return stack;
}

inline FlatContext canonical_flat_context()
{
    FlatContext ctx;
    ctx.rules.push_back(canonical_udp_rule());
    return ctx;
}

inline DecompressionEnvironment canonical_env(Direction dir = Direction::kUp)
{
    return {kDeviceIid, dir, std::nullopt};
}

inline std::vector<uint8_t> bytes_of(const HeaderStack& stack) { return serialize_stack(stack); }

} // namespace schc::test

#endif // SCHC_TESTS_FIXTURES_HPP_
