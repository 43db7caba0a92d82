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

#include <vector>

#include "schc/metrics.hpp"
#include "schc/errors.hpp"

using namespace schc;

TEST_CASE("compression factor is the exact quotient")
{
    CHECK(compression_factor(48, 1) == doctest::Approx(48.0));
    CHECK(compression_factor(44, 2) == doctest::Approx(22.0));
    CHECK(compression_factor(17, 17) == doctest::Approx(1.0));
    try {
        compression_factor(48, 0);
        FAIL("expected throw");
    } catch (const SchcError& e) {
        CHECK(e.code() == Errc::kDivisionByZero);
    }
}

TEST_CASE("weighted octets per packet")
{
    SUBCASE("single flow")
    {
        const std::vector<FlowStats> stats{{"one", 123.0, 48, 1}};
        CHECK(average_octets_per_packet(stats) == doctest::Approx(1.0));
    }
    SUBCASE("reported flow mix")
    {
        // 358.33 one-octet packets and 301.66 two-octet packets. Note this
        // weighted mean is ~1.457, not the published emulation average.
        const std::vector<FlowStats> stats{{"udp", 358.33, 48, 1}, {"icmp", 301.66, 44, 2}};
        CHECK(average_octets_per_packet(stats) == doctest::Approx(1.457).epsilon(0.001));
    }
    SUBCASE("equal counts take the midpoint")
    {
        const std::vector<FlowStats> stats{{"a", 10, 48, 4}, {"b", 10, 48, 6}};
        CHECK(average_octets_per_packet(stats) == doctest::Approx(5.0));
    }
    SUBCASE("empty input")
    {
        const std::vector<FlowStats> stats;
        try {
            average_octets_per_packet(stats);
            FAIL("expected throw");
        } catch (const SchcError& e) {
            CHECK(e.code() == Errc::kEmptyInput);
        }
    }
    SUBCASE("mean stays within the per-flow range")
    {
        const std::vector<FlowStats> stats{{"a", 3.5, 48, 2}, {"b", 1.25, 48, 7},
                                           {"c", 9, 48, 4}};
        const double mean = average_octets_per_packet(stats);
        CHECK(mean >= 2.0);
        CHECK(mean <= 7.0);
    }
}

TEST_CASE("time on air matches the frozen oracle value at SF7")
{
    // Independently computed: SF7, 125 kHz, CR 4/5, 8 preamble symbols,
    // explicit header, CRC on, 1 payload octet.
    const LoraParams p = lora_params_for_sf(7);
    CHECK(lora_time_on_air(p, 1) == doctest::Approx(25.856).epsilon(1e-9));
    CHECK(lora_time_on_air(p, 2) == doctest::Approx(30.976).epsilon(1e-9));
}

TEST_CASE("doubling bandwidth halves airtime exactly")
{
    for (uint32_t sf = 7; sf <= 10; ++sf) {
        LoraParams narrow = lora_params_for_sf(sf, 125000);
        LoraParams wide = narrow;
        wide.bandwidth_hz = 250000;
        for (uint32_t pl : {1u, 10u, 51u})
            CHECK(lora_time_on_air(narrow, pl) ==
                  doctest::Approx(2.0 * lora_time_on_air(wide, pl)).epsilon(1e-12));
    }
}

TEST_CASE("airtime grows with spreading factor and payload")
{
    for (uint32_t pl : {1u, 12u, 60u}) {
        double prev = 0.0;
        for (uint32_t sf = 7; sf <= 12; ++sf) {
            const double toa = lora_time_on_air(lora_params_for_sf(sf), pl);
            CHECK(toa > prev);
            prev = toa;
        }
    }
    for (uint32_t sf = 7; sf <= 12; ++sf) {
        const LoraParams p = lora_params_for_sf(sf);
        double prev = 0.0;
        for (uint32_t pl = 1; pl <= 60; ++pl) {
            const double toa = lora_time_on_air(p, pl);
            CHECK(toa >= prev);
            prev = toa;
        }
    }
}

TEST_CASE("payload symbol floor keeps airtime above the preamble")
{
    // max(..., 0): at least 8 payload symbols regardless of payload size.
    const LoraParams p = lora_params_for_sf(12);  // big SF, tiny payload
    const double tsym = 4096.0 / 125000.0 * 1000.0;
    CHECK(lora_time_on_air(p, 1) >= (8 + 4.25) * tsym + 8 * tsym);
}

TEST_CASE("low data rate optimization kicks in at SF11")
{
    CHECK(!lora_params_for_sf(10).low_data_rate_optimize);
    CHECK(lora_params_for_sf(11).low_data_rate_optimize);
    CHECK(lora_params_for_sf(12).low_data_rate_optimize);
    CHECK(!lora_params_for_sf(11, 250000).low_data_rate_optimize);
}

TEST_CASE("parameter validation")
{
    LoraParams p = lora_params_for_sf(7);
    SUBCASE("spreading factor")
    {
        p.spreading_factor = 6;
        CHECK_THROWS_AS(lora_time_on_air(p, 1), SchcError);
    }
    SUBCASE("bandwidth")
    {
        p.bandwidth_hz = 100000;
        CHECK_THROWS_AS(lora_time_on_air(p, 1), SchcError);
    }
    SUBCASE("coding rate")
    {
        p.coding_rate_denominator = 9;
        CHECK_THROWS_AS(lora_time_on_air(p, 1), SchcError);
    }
    SUBCASE("zero payload")
    {
        try {
            lora_time_on_air(p, 0);
            FAIL("expected throw");
        } catch (const SchcError& e) {
            CHECK(e.code() == Errc::kInvalidParams);
        }
    }
}

TEST_CASE("duty cycle off-time")
{
    CHECK(duty_cycle_min_interval(100.0, 0.001) == doctest::Approx(99900.0));
    CHECK(duty_cycle_min_interval(123.0, 1.0) == doctest::Approx(0.0));
    CHECK(duty_cycle_min_interval(50.0, 0.01) == doctest::Approx(4950.0));
    try {
        duty_cycle_min_interval(10.0, 0.0);
        FAIL("expected throw");
    } catch (const SchcError& e) {
        CHECK(e.code() == Errc::kInvalidDuty);
    }
}

TEST_CASE("airtime report rows are increasing in SF and ordered by flow")
{
    const std::vector<FlowStats> stats{{"udp", 358.33, 48, 1}, {"icmp", 301.66, 44, 2}};
    std::vector<LoraParams> params;
    for (uint32_t sf = 7; sf <= 12; ++sf)
        params.push_back(lora_params_for_sf(sf));
    const AirtimeReport report = airtime_report(stats, params);
    REQUIRE(report.toa_ms.size() == 2);
    REQUIRE(report.spreading_factors.size() == 6);
    CHECK(report.flow_labels[0] == "udp");
    for (const auto& row : report.toa_ms)
        for (size_t i = 1; i < row.size(); ++i)
            CHECK(row[i] > row[i - 1]);
    // compressed (1 octet) never exceeds the 2-octet row
    for (size_t i = 0; i < report.spreading_factors.size(); ++i)
        CHECK(report.toa_ms[0][i] <= report.toa_ms[1][i]);
}
