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

#include "schc/packet.hpp"

#include <algorithm>
#include <array>
#include <cstring>

namespace schc {

namespace {

struct FieldInfo {
    FieldId id;
    Layer layer;
    size_t width;
    const char* name;
};

// Natural widths sum to 320 bits for IPv6, 64 for UDP, 32 for the ICMPv6
// and CoAP fixed parts.
constexpr std::array<FieldInfo, kFieldIdCount> kFieldTable = {{
    {FieldId::kIpv6Version, Layer::kNetwork, 4, "ipv6.version"},
    {FieldId::kIpv6TrafficClass, Layer::kNetwork, 8, "ipv6.traffic_class"},
    {FieldId::kIpv6FlowLabel, Layer::kNetwork, 20, "ipv6.flow_label"},
    {FieldId::kIpv6PayloadLength, Layer::kNetwork, 16, "ipv6.payload_length"},
    {FieldId::kIpv6NextHeader, Layer::kNetwork, 8, "ipv6.next_header"},
    {FieldId::kIpv6HopLimit, Layer::kNetwork, 8, "ipv6.hop_limit"},
    {FieldId::kIpv6SrcPrefix, Layer::kNetwork, 64, "ipv6.src_prefix"},
    {FieldId::kIpv6SrcIid, Layer::kNetwork, 64, "ipv6.src_iid"},
    {FieldId::kIpv6DstPrefix, Layer::kNetwork, 64, "ipv6.dst_prefix"},
    {FieldId::kIpv6DstIid, Layer::kNetwork, 64, "ipv6.dst_iid"},
    {FieldId::kUdpSrcPort, Layer::kTransport, 16, "udp.src_port"},
    {FieldId::kUdpDstPort, Layer::kTransport, 16, "udp.dst_port"},
    {FieldId::kUdpLength, Layer::kTransport, 16, "udp.length"},
    {FieldId::kUdpChecksum, Layer::kTransport, 16, "udp.checksum"},
    {FieldId::kIcmpv6Type, Layer::kTransport, 8, "icmpv6.type"},
    {FieldId::kIcmpv6Code, Layer::kTransport, 8, "icmpv6.code"},
    {FieldId::kIcmpv6Checksum, Layer::kTransport, 16, "icmpv6.checksum"},
    {FieldId::kCoapVersion, Layer::kApplication, 2, "coap.version"},
    {FieldId::kCoapType, Layer::kApplication, 2, "coap.type"},
    {FieldId::kCoapTokenLength, Layer::kApplication, 4, "coap.token_length"},
    {FieldId::kCoapCode, Layer::kApplication, 8, "coap.code"},
    {FieldId::kCoapMessageId, Layer::kApplication, 16, "coap.message_id"},
}};

const FieldInfo& info(FieldId id) { return kFieldTable[static_cast<size_t>(id)]; }

uint16_t rd16(std::span<const uint8_t> b, size_t off)
{
    return static_cast<uint16_t>((b[off] << 8) | b[off + 1]);
}

uint64_t rd64(std::span<const uint8_t> b, size_t off)
{
    uint64_t v = 0;
    for (size_t i = 0; i < 8; ++i)
        v = (v << 8) | b[off + i];
    return v;
}

void wr16(std::vector<uint8_t>& b, uint16_t v)
{
    b.push_back(static_cast<uint8_t>(v >> 8));
    b.push_back(static_cast<uint8_t>(v & 0xFF));
}

void wr64(std::vector<uint8_t>& b, uint64_t v)
{
    for (size_t i = 8; i-- > 0;)
        b.push_back(static_cast<uint8_t>((v >> (i * 8)) & 0xFF));
}

// CoAP is recognised behind UDP when a well-known port is in use and the
// first four octets look like a fixed CoAP header. The same predicate is
// applied to reconstructed headers during decompression, so both ends reach
// the same verdict.
bool looks_like_coap(const UdpHeader& udp, std::span<const uint8_t> rest)
{
    if (udp.src_port != kCoapDefaultPort && udp.dst_port != kCoapDefaultPort)
        return false;
    if (rest.size() < 4)
        return false;
    return (rest[0] >> 6) == 1 && (rest[0] & 0x0F) <= 8;
}

size_t transport_octets(const HeaderStack& stack)
{
    if (stack.has_udp())
        return 8;
    if (stack.has_icmpv6())
        return 4;
    return 0;
}

// Content octets following the IPv6 header: transport + CoAP + body + payload.
size_t after_network_octets(const HeaderStack& stack)
{
    size_t n = transport_octets(stack) + (stack.application ? 4 : 0) + stack.payload.size();
    if (stack.has_icmpv6())
        n += stack.icmpv6().body.size();
    return n;
}

void serialize_ipv6(const HeaderStack& stack, std::vector<uint8_t>& out)
{
    const Ipv6Header& h = stack.network;
    uint32_t word = (static_cast<uint32_t>(h.version & 0x0F) << 28) |
                    (static_cast<uint32_t>(h.traffic_class) << 20) | (h.flow_label & 0xFFFFF);
    out.push_back(static_cast<uint8_t>(word >> 24));
    out.push_back(static_cast<uint8_t>(word >> 16));
    out.push_back(static_cast<uint8_t>(word >> 8));
    out.push_back(static_cast<uint8_t>(word));
    wr16(out, static_cast<uint16_t>(after_network_octets(stack)));
    out.push_back(h.next_header);
    out.push_back(h.hop_limit);
    wr64(out, h.src_prefix);
    wr64(out, h.src_iid);
    wr64(out, h.dst_prefix);
    wr64(out, h.dst_iid);
}

std::vector<uint8_t> pseudo_header(const Ipv6Header& ip, uint32_t upper_len, uint8_t next_header)
{
    std::vector<uint8_t> p;
    p.reserve(40);
    wr64(p, ip.src_prefix);
    wr64(p, ip.src_iid);
    wr64(p, ip.dst_prefix);
    wr64(p, ip.dst_iid);
    p.push_back(static_cast<uint8_t>(upper_len >> 24));
    p.push_back(static_cast<uint8_t>(upper_len >> 16));
    p.push_back(static_cast<uint8_t>(upper_len >> 8));
    p.push_back(static_cast<uint8_t>(upper_len));
    p.push_back(0);
    p.push_back(0);
    p.push_back(0);
    p.push_back(next_header);
    return p;
}

uint32_t ones_complement_sum(std::span<const uint8_t> data, uint32_t acc)
{
    size_t i = 0;
    for (; i + 1 < data.size(); i += 2)
        acc += static_cast<uint32_t>((data[i] << 8) | data[i + 1]);
    if (i < data.size())
        acc += static_cast<uint32_t>(data[i] << 8);
    return acc;
}

uint16_t fold(uint32_t sum)
{
    while (sum >> 16)
        sum = (sum & 0xFFFF) + (sum >> 16);
    return static_cast<uint16_t>(~sum & 0xFFFF);
}

} // namespace

size_t field_width(FieldId id) { return info(id).width; }

Layer field_layer(FieldId id) { return info(id).layer; }

const char* field_name(FieldId id) { return info(id).name; }

std::optional<FieldId> field_from_name(const std::string& name)
{
    for (const auto& f : kFieldTable)
        if (name == f.name)
            return f.id;
    return std::nullopt;
}

size_t HeaderStack::header_octets() const
{
    return 40 + transport_octets(*this) + (application ? 4 : 0);
}

HeaderStack parse_stack(std::span<const uint8_t> bytes, Direction direction)
{
    if (bytes.size() < 40)
        raise(Errc::kTruncatedHeader, "buffer shorter than an IPv6 header");

    HeaderStack stack;
    stack.direction = direction;
    Ipv6Header& ip = stack.network;
    ip.version = bytes[0] >> 4;
    if (ip.version != 6)
        raise(Errc::kBadVersion, "IPv6 version field is not 6");
    ip.traffic_class = static_cast<uint8_t>(((bytes[0] & 0x0F) << 4) | (bytes[1] >> 4));
    ip.flow_label = (static_cast<uint32_t>(bytes[1] & 0x0F) << 16) |
                    (static_cast<uint32_t>(bytes[2]) << 8) | bytes[3];
    ip.payload_length = rd16(bytes, 4);
    ip.next_header = bytes[6];
    ip.hop_limit = bytes[7];
    ip.src_prefix = rd64(bytes, 8);
    ip.src_iid = rd64(bytes, 16);
    ip.dst_prefix = rd64(bytes, 24);
    ip.dst_iid = rd64(bytes, 32);

    if (ip.payload_length != bytes.size() - 40) {
        if (ip.payload_length > bytes.size() - 40)
            raise(Errc::kTruncatedHeader, "declared IPv6 payload length exceeds buffer");
        raise(Errc::kLengthMismatch, "IPv6 payload length disagrees with buffer");
    }

    size_t off = 40;
    if (ip.next_header == kNextHeaderUdp) {
        if (bytes.size() < off + 8)
            raise(Errc::kTruncatedHeader, "buffer too short for UDP header");
        UdpHeader udp;
        udp.src_port = rd16(bytes, off);
        udp.dst_port = rd16(bytes, off + 2);
        udp.length = rd16(bytes, off + 4);
        udp.checksum = rd16(bytes, off + 6);
        if (udp.length != bytes.size() - off)
            raise(Errc::kLengthMismatch, "UDP length disagrees with datagram size");
        off += 8;
        std::span<const uint8_t> rest = bytes.subspan(off);
        if (looks_like_coap(udp, rest)) {
            CoapHeader coap;
            coap.version = rest[0] >> 6;
            coap.msg_type = (rest[0] >> 4) & 0x03;
            coap.token_length = rest[0] & 0x0F;
            coap.code = rest[1];
            coap.message_id = rd16(rest, 2);
            stack.application = coap;
            off += 4;
        }
        stack.transport = udp;
    } else if (ip.next_header == kNextHeaderIcmpv6) {
        if (bytes.size() < off + 4)
            raise(Errc::kTruncatedHeader, "buffer too short for ICMPv6 header");
        Icmpv6Header icmp;
        icmp.msg_type = bytes[off];
        icmp.code = bytes[off + 1];
        icmp.checksum = rd16(bytes, off + 2);
        stack.transport = icmp;
        off += 4;
    }
    // Any other next-header value is carried as opaque payload so the packet
    // can still take the uncompressed path.

    stack.payload.assign(bytes.begin() + static_cast<ptrdiff_t>(off), bytes.end());
    return stack;
}

std::vector<uint8_t> serialize_stack(const HeaderStack& stack)
{
    if (stack.has_udp() && stack.network.next_header != kNextHeaderUdp)
        raise(Errc::kInconsistentChain, "UDP transport but next_header != 17");
    if (stack.has_icmpv6() && stack.network.next_header != kNextHeaderIcmpv6)
        raise(Errc::kInconsistentChain, "ICMPv6 transport but next_header != 58");
    if (!stack.transport &&
        (stack.network.next_header == kNextHeaderUdp ||
         stack.network.next_header == kNextHeaderIcmpv6))
        raise(Errc::kInconsistentChain, "next_header declares a transport that is absent");
    if (stack.application && !stack.has_udp())
        raise(Errc::kInconsistentChain, "CoAP requires a UDP transport");

    if (after_network_octets(stack) > 0xFFFF)
        raise(Errc::kLengthMismatch, "content exceeds the 16-bit IPv6 payload length");

    std::vector<uint8_t> out;
    out.reserve(40 + after_network_octets(stack));
    serialize_ipv6(stack, out);

    if (stack.has_udp()) {
        const UdpHeader& udp = stack.udp();
        wr16(out, udp.src_port);
        wr16(out, udp.dst_port);
        wr16(out, static_cast<uint16_t>(after_network_octets(stack)));
        wr16(out, udp.checksum);
    } else if (stack.has_icmpv6()) {
        const Icmpv6Header& icmp = stack.icmpv6();
        out.push_back(icmp.msg_type);
        out.push_back(icmp.code);
        wr16(out, icmp.checksum);
        out.insert(out.end(), icmp.body.begin(), icmp.body.end());
    }

    if (stack.application) {
        const CoapHeader& coap = *stack.application;
        out.push_back(static_cast<uint8_t>(((coap.version & 0x03) << 6) |
                                           ((coap.msg_type & 0x03) << 4) |
                                           (coap.token_length & 0x0F)));
        out.push_back(coap.code);
        wr16(out, coap.message_id);
    }

    out.insert(out.end(), stack.payload.begin(), stack.payload.end());
    return out;
}

BitString get_field(const HeaderStack& stack, FieldId id, uint32_t position)
{
    if (position != 0)
        raise(Errc::kPositionOutOfRange, "modeled headers have a single instance");

    const Layer layer = field_layer(id);
    if (layer == Layer::kTransport) {
        bool udp_field = id == FieldId::kUdpSrcPort || id == FieldId::kUdpDstPort ||
                         id == FieldId::kUdpLength || id == FieldId::kUdpChecksum;
        if (udp_field && !stack.has_udp())
            raise(Errc::kFieldAbsent, std::string(field_name(id)) + " not in stack");
        if (!udp_field && !stack.has_icmpv6())
            raise(Errc::kFieldAbsent, std::string(field_name(id)) + " not in stack");
    }
    if (layer == Layer::kApplication && !stack.application)
        raise(Errc::kFieldAbsent, std::string(field_name(id)) + " not in stack");

    const size_t w = field_width(id);
    switch (id) {
    case FieldId::kIpv6Version: return BitString::from_uint(stack.network.version, w);
    case FieldId::kIpv6TrafficClass: return BitString::from_uint(stack.network.traffic_class, w);
    case FieldId::kIpv6FlowLabel: return BitString::from_uint(stack.network.flow_label, w);
    case FieldId::kIpv6PayloadLength:
        return BitString::from_uint(after_network_octets(stack), w);
    case FieldId::kIpv6NextHeader: return BitString::from_uint(stack.network.next_header, w);
    case FieldId::kIpv6HopLimit: return BitString::from_uint(stack.network.hop_limit, w);
    case FieldId::kIpv6SrcPrefix: return BitString::from_uint(stack.network.src_prefix, w);
    case FieldId::kIpv6SrcIid: return BitString::from_uint(stack.network.src_iid, w);
    case FieldId::kIpv6DstPrefix: return BitString::from_uint(stack.network.dst_prefix, w);
    case FieldId::kIpv6DstIid: return BitString::from_uint(stack.network.dst_iid, w);
    case FieldId::kUdpSrcPort: return BitString::from_uint(stack.udp().src_port, w);
    case FieldId::kUdpDstPort: return BitString::from_uint(stack.udp().dst_port, w);
    case FieldId::kUdpLength:
        return BitString::from_uint(after_network_octets(stack), w);
    case FieldId::kUdpChecksum: return BitString::from_uint(stack.udp().checksum, w);
    case FieldId::kIcmpv6Type: return BitString::from_uint(stack.icmpv6().msg_type, w);
    case FieldId::kIcmpv6Code: return BitString::from_uint(stack.icmpv6().code, w);
    case FieldId::kIcmpv6Checksum: return BitString::from_uint(stack.icmpv6().checksum, w);
    case FieldId::kCoapVersion: return BitString::from_uint(stack.application->version, w);
    case FieldId::kCoapType: return BitString::from_uint(stack.application->msg_type, w);
    case FieldId::kCoapTokenLength:
        return BitString::from_uint(stack.application->token_length, w);
    case FieldId::kCoapCode: return BitString::from_uint(stack.application->code, w);
    case FieldId::kCoapMessageId: return BitString::from_uint(stack.application->message_id, w);
    }
    raise(Errc::kInternal, "unreachable field id");
}

void set_field(HeaderStack& stack, FieldId id, const BitString& value)
{
    if (value.bit_size() != field_width(id))
        raise(Errc::kWidthMismatch, std::string("bad width for ") + field_name(id));
    const uint64_t v = value.to_uint();
    switch (id) {
    case FieldId::kIpv6Version: stack.network.version = static_cast<uint8_t>(v); return;
    case FieldId::kIpv6TrafficClass: stack.network.traffic_class = static_cast<uint8_t>(v); return;
    case FieldId::kIpv6FlowLabel: stack.network.flow_label = static_cast<uint32_t>(v); return;
    case FieldId::kIpv6PayloadLength:
        stack.network.payload_length = static_cast<uint16_t>(v);
        return;
    case FieldId::kIpv6NextHeader: stack.network.next_header = static_cast<uint8_t>(v); return;
    case FieldId::kIpv6HopLimit: stack.network.hop_limit = static_cast<uint8_t>(v); return;
    case FieldId::kIpv6SrcPrefix: stack.network.src_prefix = v; return;
    case FieldId::kIpv6SrcIid: stack.network.src_iid = v; return;
    case FieldId::kIpv6DstPrefix: stack.network.dst_prefix = v; return;
    case FieldId::kIpv6DstIid: stack.network.dst_iid = v; return;
    case FieldId::kUdpSrcPort: stack.udp().src_port = static_cast<uint16_t>(v); return;
    case FieldId::kUdpDstPort: stack.udp().dst_port = static_cast<uint16_t>(v); return;
    case FieldId::kUdpLength: stack.udp().length = static_cast<uint16_t>(v); return;
    case FieldId::kUdpChecksum: stack.udp().checksum = static_cast<uint16_t>(v); return;
    case FieldId::kIcmpv6Type: stack.icmpv6().msg_type = static_cast<uint8_t>(v); return;
    case FieldId::kIcmpv6Code: stack.icmpv6().code = static_cast<uint8_t>(v); return;
    case FieldId::kIcmpv6Checksum: stack.icmpv6().checksum = static_cast<uint16_t>(v); return;
    case FieldId::kCoapVersion: stack.application->version = static_cast<uint8_t>(v); return;
    case FieldId::kCoapType: stack.application->msg_type = static_cast<uint8_t>(v); return;
    case FieldId::kCoapTokenLength:
        stack.application->token_length = static_cast<uint8_t>(v);
        return;
    case FieldId::kCoapCode: stack.application->code = static_cast<uint8_t>(v); return;
    case FieldId::kCoapMessageId: stack.application->message_id = static_cast<uint16_t>(v); return;
    }
    raise(Errc::kInternal, "unreachable field id");
}

uint16_t compute_checksum(const HeaderStack& stack, ChecksumLayer layer)
{
    if (layer == ChecksumLayer::kUdp && !stack.has_udp())
        raise(Errc::kFieldAbsent, "no UDP layer");
    if (layer == ChecksumLayer::kIcmpv6 && !stack.has_icmpv6())
        raise(Errc::kFieldAbsent, "no ICMPv6 layer");

    const uint32_t upper_len = static_cast<uint32_t>(after_network_octets(stack));
    const uint8_t nh = layer == ChecksumLayer::kUdp ? kNextHeaderUdp : kNextHeaderIcmpv6;
    std::vector<uint8_t> data = pseudo_header(stack.network, upper_len, nh);

    if (layer == ChecksumLayer::kUdp) {
        const UdpHeader& udp = stack.udp();
        wr16(data, udp.src_port);
        wr16(data, udp.dst_port);
        wr16(data, static_cast<uint16_t>(upper_len));
        wr16(data, 0);
        if (stack.application) {
            const CoapHeader& coap = *stack.application;
            data.push_back(static_cast<uint8_t>(((coap.version & 0x03) << 6) |
                                                ((coap.msg_type & 0x03) << 4) |
                                                (coap.token_length & 0x0F)));
            data.push_back(coap.code);
            wr16(data, coap.message_id);
        }
    } else {
        const Icmpv6Header& icmp = stack.icmpv6();
        data.push_back(icmp.msg_type);
        data.push_back(icmp.code);
        wr16(data, 0);
        data.insert(data.end(), icmp.body.begin(), icmp.body.end());
    }
    data.insert(data.end(), stack.payload.begin(), stack.payload.end());

    uint16_t ck = fold(ones_complement_sum(data, 0));
    if (layer == ChecksumLayer::kUdp && ck == 0)
        ck = 0xFFFF;  // RFC 768: zero means "no checksum", substitute all-ones
    return ck;
}

uint16_t internet_checksum(std::span<const uint8_t> data)
{
    return fold(ones_complement_sum(data, 0));
}

Ipv6Header parse_ipv6_header(std::span<const uint8_t> b)
{
    if (b.size() < 40)
        raise(Errc::kTruncatedHeader, "IPv6 header needs 40 octets");
    Ipv6Header ip;
    ip.version = b[0] >> 4;
    if (ip.version != 6)
        raise(Errc::kBadVersion, "IPv6 version field is not 6");
    ip.traffic_class = static_cast<uint8_t>(((b[0] & 0x0F) << 4) | (b[1] >> 4));
    ip.flow_label =
        (static_cast<uint32_t>(b[1] & 0x0F) << 16) | (static_cast<uint32_t>(b[2]) << 8) | b[3];
    ip.payload_length = rd16(b, 4);
    ip.next_header = b[6];
    ip.hop_limit = b[7];
    ip.src_prefix = rd64(b, 8);
    ip.src_iid = rd64(b, 16);
    ip.dst_prefix = rd64(b, 24);
    ip.dst_iid = rd64(b, 32);
    return ip;
}

UdpHeader parse_udp_header(std::span<const uint8_t> b)
{
    if (b.size() < 8)
        raise(Errc::kTruncatedHeader, "UDP header needs 8 octets");
    UdpHeader udp;
    udp.src_port = rd16(b, 0);
    udp.dst_port = rd16(b, 2);
    udp.length = rd16(b, 4);
    udp.checksum = rd16(b, 6);
    return udp;
}

Icmpv6Header parse_icmpv6_fixed(std::span<const uint8_t> b)
{
    if (b.size() < 4)
        raise(Errc::kTruncatedHeader, "ICMPv6 fixed part needs 4 octets");
    Icmpv6Header icmp;
    icmp.msg_type = b[0];
    icmp.code = b[1];
    icmp.checksum = rd16(b, 2);
    return icmp;
}

CoapHeader parse_coap_fixed(std::span<const uint8_t> b)
{
    if (b.size() < 4)
        raise(Errc::kTruncatedHeader, "CoAP fixed part needs 4 octets");
    CoapHeader coap;
    coap.version = b[0] >> 6;
    coap.msg_type = (b[0] >> 4) & 0x03;
    coap.token_length = b[0] & 0x0F;
    coap.code = b[1];
    coap.message_id = rd16(b, 2);
    return coap;
}

} // namespace schc
