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

#include <doctest.h>

#include "generators.hpp"
#include "fixtures.hpp"
#include "schc/rules.hpp"

using namespace schc;
using namespace schc::test;

TEST_CASE("rule ID segments pack ALC | TLC | NLC")
{
    RuleIdLayout layout;  // 1/2/2 over 5 bits
    CHECK(encode_rule_id(layout, 0, 1, 1).to_binary_string() == "00101");
    CHECK(encode_rule_id(layout, 1, 3, 3).to_binary_string() == "11111");
    CHECK(encode_rule_id(layout, 1, 3, 3).to_uint() == layout.reserved_rule_id());

    const RuleIdSegments seg = decode_rule_id(layout, BitString::from_uint(0b00101, 5));
    CHECK(seg.alc == 0);
    CHECK(seg.tlc == 1);
    CHECK(seg.nlc == 1);

    const RuleIdSegments all = decode_rule_id(layout, BitString::from_uint(0b11111, 5));
    CHECK(all.alc == layout.reserved_segment(Layer::kApplication));
    CHECK(all.tlc == layout.reserved_segment(Layer::kTransport));
    CHECK(all.nlc == layout.reserved_segment(Layer::kNetwork));
}

TEST_CASE("segment overflow and width mismatch")
{
    RuleIdLayout layout;
    try {
        encode_rule_id(layout, 0, 4, 0);  // tlc is 2 bits
        FAIL("expected throw");
    } catch (const SchcError& e) {
        CHECK(e.code() == Errc::kSegmentOverflow);
    }
    try {
        decode_rule_id(layout, BitString::from_uint(0, 4));
        FAIL("expected throw");
    } catch (const SchcError& e) {
        CHECK(e.code() == Errc::kWidthMismatch);
    }
}

TEST_CASE("rule ID round trip across layouts")
{
    Rng rng(42);
    for (int iter = 0; iter < 300; ++iter) {
        RuleIdLayout layout;
        layout.alc_bits = rng.u32(1, 6);
        layout.tlc_bits = rng.u32(1, 6);
        layout.nlc_bits = rng.u32(1, 4);
        layout.total_rule_bits = layout.alc_bits + layout.tlc_bits + layout.nlc_bits;
        REQUIRE(layout.total_rule_bits <= 16);
        const uint32_t alc = rng.u32(0, (1u << layout.alc_bits) - 1);
        const uint32_t tlc = rng.u32(0, (1u << layout.tlc_bits) - 1);
        const uint32_t nlc = rng.u32(0, (1u << layout.nlc_bits) - 1);
        const BitString bits = encode_rule_id(layout, alc, tlc, nlc);
        CHECK(bits.bit_size() == layout.total_rule_bits);
        const RuleIdSegments seg = decode_rule_id(layout, bits);
        CHECK(seg.alc == alc);
        CHECK(seg.tlc == tlc);
        CHECK(seg.nlc == nlc);
    }
}

TEST_CASE("canonical rule passes validation")
{
    CHECK(validate_context(canonical_flat_context()).empty());
}

TEST_CASE("duplicate layer rules are flagged")
{
    LayeredContext ctx;
    const auto fields = slice_layer(canonical_udp_rule().fields, Layer::kNetwork);
    ctx.nlc.push_back({0, Layer::kNetwork, fields});
    ctx.nlc.push_back({1, Layer::kNetwork, fields});
    const auto violations = validate_context(ctx);
    REQUIRE(!violations.empty());
    bool found = false;
    for (const auto& v : violations)
        if (v.invariant.find("descriptor-identical") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("equal without target is flagged")
{
    FlatContext ctx = canonical_flat_context();
    ctx.rules[0].fields[0].target.reset();
    const auto violations = validate_context(ctx);
    REQUIRE(!violations.empty());
    CHECK(violations[0].invariant.find("target") != std::string::npos);
}

TEST_CASE("structural descriptor rules")
{
    FlatContext ctx = canonical_flat_context();

    SUBCASE("not-sent requires equal")
    {
        ctx.rules[0].fields[0].op = MatchOp::kIgnore;
        ctx.rules[0].fields[0].target.reset();
        CHECK(!validate_context(ctx).empty());
    }
    SUBCASE("comp-length outside length fields")
    {
        ctx.rules[0].fields[1] = fd_ign(FieldId::kIpv6TrafficClass, CdAction::kCompLength);
        CHECK(!validate_context(ctx).empty());
    }
    SUBCASE("nonzero position")
    {
        ctx.rules[0].fields[0].position = 1;
        CHECK(!validate_context(ctx).empty());
    }
    SUBCASE("incomplete header coverage")
    {
        ctx.rules[0].fields.pop_back();
        CHECK(!validate_context(ctx).empty());
    }
    SUBCASE("reserved rule ID")
    {
        ctx.rules[0].rule_id = 31;
        CHECK(!validate_context(ctx).empty());
    }
}

TEST_CASE("flatten duplicates shared network descriptors")
{
    // One shared IPv6 rule, two UDP port variants: the layered form keeps 10
    // network descriptors once (18 total), the flat cross-product twice (28).
    LayeredContext layered;
    const auto net = slice_layer(canonical_udp_rule().fields, Layer::kNetwork);
    auto udp_a = slice_layer(canonical_udp_rule().fields, Layer::kTransport);
    auto udp_b = udp_a;
    udp_b[0].target = BitString::from_uint(5230, 16);
    udp_b[1].target = BitString::from_uint(5230, 16);
    layered.nlc.push_back({1, Layer::kNetwork, net});
    layered.tlc.push_back({1, Layer::kTransport, udp_a});
    layered.tlc.push_back({2, Layer::kTransport, udp_b});
    CHECK(validate_context(layered).empty());
    CHECK(descriptor_count(layered) == 18);

    const FlatContext flat = flatten(layered);
    REQUIRE(flat.rules.size() == 2);
    CHECK(descriptor_count(flat) == 28);
    CHECK(flat.rules[0].fields.size() == 14);
    // Both flat rules carry their own copy of the network descriptors.
    CHECK(std::vector<FieldDescriptor>(flat.rules[0].fields.begin(),
                                       flat.rules[0].fields.begin() + 10) == net);
    CHECK(std::vector<FieldDescriptor>(flat.rules[1].fields.begin(),
                                       flat.rules[1].fields.begin() + 10) == net);
    CHECK(validate_context(flat).empty());
}

TEST_CASE("flatten with empty transport context keeps network rules")
{
    LayeredContext layered;
    auto net = slice_layer(canonical_udp_rule().fields, Layer::kNetwork);
    net[4] = fd_ign(FieldId::kIpv6NextHeader, CdAction::kValueSent);  // no pinned transport
    layered.nlc.push_back({0, Layer::kNetwork, net});
    const FlatContext flat = flatten(layered);
    REQUIRE(flat.rules.size() == 1);
    CHECK(flat.rules[0].fields == net);
}

TEST_CASE("flatten honors next-header pinning")
{
    LayeredContext layered;
    const auto net_udp = slice_layer(canonical_udp_rule().fields, Layer::kNetwork);  // NH 17
    auto net_icmp = net_udp;
    net_icmp[4] = fd_eq(FieldId::kIpv6NextHeader, 58);
    layered.nlc.push_back({0, Layer::kNetwork, net_udp});
    layered.nlc.push_back({1, Layer::kNetwork, net_icmp});
    layered.tlc.push_back({0, Layer::kTransport, slice_layer(canonical_udp_rule().fields,
                                                             Layer::kTransport)});
    const FlatContext flat = flatten(layered);
    // The UDP transport chains only under the NH=17 network rule; the other
    // network rule stays alone.
    REQUIRE(flat.rules.size() == 2);
    CHECK(flat.rules[0].fields.size() == 14);
    CHECK(flat.rules[1].fields.size() == 10);
}

TEST_CASE("flatten output is a valid flat context")
{
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const LayeredCase c = random_layered_case(rng);
        REQUIRE(validate_context(c.ctx).empty());
        if (c.flat.rules.size() <= c.flat.layout.usable_flat_ids())
            CHECK(validate_context(c.flat).empty());
        // Sequential IDs in emission order keep tie-breaking aligned with
        // the per-layer lowest-ID rule.
        for (size_t r = 0; r < c.flat.rules.size(); ++r)
            CHECK(c.flat.rules[r].rule_id == r);
    }
}

TEST_CASE("layout validation")
{
    LayeredContext ctx;
    ctx.layout.alc_bits = 2;  // 2+2+2 != 5
    const auto violations = validate_context(ctx);
    REQUIRE(!violations.empty());
    CHECK(violations[0].invariant.find("sum") != std::string::npos);
}
