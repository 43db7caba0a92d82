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

#ifndef SCHC_PACKET_HPP_
#define SCHC_PACKET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "schc/bits.hpp"

namespace schc {

enum class Direction : uint8_t { kUp, kDown };

enum class Layer : uint8_t { kNetwork, kTransport, kApplication };

/// Addressable header fields. IPv6 addresses are split into a /64 prefix and
/// an interface identifier so rules can target the halves independently.
enum class FieldId : uint8_t {
    kIpv6Version,
    kIpv6TrafficClass,
    kIpv6FlowLabel,
    kIpv6PayloadLength,
    kIpv6NextHeader,
    kIpv6HopLimit,
    kIpv6SrcPrefix,
    kIpv6SrcIid,
    kIpv6DstPrefix,
    kIpv6DstIid,
    kUdpSrcPort,
    kUdpDstPort,
    kUdpLength,
    kUdpChecksum,
    kIcmpv6Type,
    kIcmpv6Code,
    kIcmpv6Checksum,
    kCoapVersion,
    kCoapType,
    kCoapTokenLength,
    kCoapCode,
    kCoapMessageId,
};

constexpr size_t kFieldIdCount = 22;

size_t field_width(FieldId id);
Layer field_layer(FieldId id);
const char* field_name(FieldId id);
std::optional<FieldId> field_from_name(const std::string& name);

/// 40-octet IPv6 header. Addresses are stored as two 64-bit halves in host
/// integer form; serialization is network byte order.
struct Ipv6Header {
    uint8_t version = 6;
    uint8_t traffic_class = 0;
    uint32_t flow_label = 0;  // 20 bits
    uint16_t payload_length = 0;
    uint8_t next_header = 0;
    uint8_t hop_limit = 0;
    uint64_t src_prefix = 0;
    uint64_t src_iid = 0;
    uint64_t dst_prefix = 0;
    uint64_t dst_iid = 0;
};

struct UdpHeader {
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint16_t length = 0;
    uint16_t checksum = 0;
};

/// Fixed 4-octet part of an ICMPv6 message. `body` supports direct
/// construction of full messages; parse_stack leaves it empty and places
/// everything after the fixed part in the stack payload.
struct Icmpv6Header {
    uint8_t msg_type = 0;
    uint8_t code = 0;
    uint16_t checksum = 0;
    std::vector<uint8_t> body;
};

/// Fixed 4-octet CoAP header. Token and options are not modeled; they stay
/// in the stack payload.
struct CoapHeader {
    uint8_t version = 1;   // 2 bits
    uint8_t msg_type = 0;  // 2 bits
    uint8_t token_length = 0;  // 4 bits
    uint8_t code = 0;
    uint16_t message_id = 0;
};

constexpr uint8_t kNextHeaderUdp = 17;
constexpr uint8_t kNextHeaderIcmpv6 = 58;
constexpr uint16_t kCoapDefaultPort = 5683;

/// A parsed header chain: IPv6, optional UDP or ICMPv6, optional CoAP, and
/// the remaining octets as payload.
struct HeaderStack {
    Ipv6Header network;
    std::optional<std::variant<UdpHeader, Icmpv6Header>> transport;
    std::optional<CoapHeader> application;
    std::vector<uint8_t> payload;
    Direction direction = Direction::kUp;

    bool has_udp() const { return transport && std::holds_alternative<UdpHeader>(*transport); }
    bool has_icmpv6() const
    {
        return transport && std::holds_alternative<Icmpv6Header>(*transport);
    }
    UdpHeader& udp() { return std::get<UdpHeader>(*transport); }
    const UdpHeader& udp() const { return std::get<UdpHeader>(*transport); }
    Icmpv6Header& icmpv6() { return std::get<Icmpv6Header>(*transport); }
    const Icmpv6Header& icmpv6() const { return std::get<Icmpv6Header>(*transport); }

    /// Octet count of the fixed headers only (IPv6 + transport + CoAP).
    size_t header_octets() const;
};

/// Parses an IPv6(/UDP|/ICMPv6)(/CoAP) chain. Unknown next-header values
/// leave the transport slot empty and the rest of the datagram becomes
/// payload. Declared lengths must agree with the buffer so that
/// serialize_stack(parse_stack(b)) == b holds bit-exactly.
HeaderStack parse_stack(std::span<const uint8_t> bytes, Direction direction);

/// Inverse of parse_stack. IPv6 payload length and UDP length are always
/// recomputed from actual content; checksums are written as stored.
std::vector<uint8_t> serialize_stack(const HeaderStack& stack);

/// Field value at its natural bit width.
BitString get_field(const HeaderStack& stack, FieldId id, uint32_t position = 0);

/// Writes a field value; the inverse half of get_field used during
/// decompression.
void set_field(HeaderStack& stack, FieldId id, const BitString& value);

enum class ChecksumLayer : uint8_t { kUdp, kIcmpv6 };

/// Upper-layer internet checksum (IPv6 pseudo-header + layer header with
/// zeroed checksum + everything after it). For UDP a computed value of zero
/// is transmitted as 0xFFFF.
uint16_t compute_checksum(const HeaderStack& stack, ChecksumLayer layer);

/// RFC 1071 one's-complement sum over a buffer, returned complemented.
uint16_t internet_checksum(std::span<const uint8_t> data);

/// Standalone header parsers for raw in-line header bytes (uncompressed
/// layers). No chain or length validation is applied here.
Ipv6Header parse_ipv6_header(std::span<const uint8_t> bytes40);
UdpHeader parse_udp_header(std::span<const uint8_t> bytes8);
Icmpv6Header parse_icmpv6_fixed(std::span<const uint8_t> bytes4);
CoapHeader parse_coap_fixed(std::span<const uint8_t> bytes4);

} // namespace schc

#endif // SCHC_PACKET_HPP_
