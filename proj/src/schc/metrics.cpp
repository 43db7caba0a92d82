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

#include "schc/metrics.hpp"

#include <cmath>

#include "schc/errors.hpp"

namespace schc {

LoraParams lora_params_for_sf(uint32_t sf, uint32_t bandwidth_hz)
{
    LoraParams p;
    p.spreading_factor = sf;
    p.bandwidth_hz = bandwidth_hz;
    const double symbol_ms = std::pow(2.0, sf) / bandwidth_hz * 1000.0;
    p.low_data_rate_optimize = symbol_ms > 16.0;
    return p;
}

void validate_lora_params(const LoraParams& params)
{
    if (params.spreading_factor < 7 || params.spreading_factor > 12)
        raise(Errc::kInvalidParams, "spreading factor must be 7..12");
    if (params.bandwidth_hz != 125000 && params.bandwidth_hz != 250000 &&
        params.bandwidth_hz != 500000)
        raise(Errc::kInvalidParams, "bandwidth must be 125, 250 or 500 kHz");
    if (params.coding_rate_denominator < 5 || params.coding_rate_denominator > 8)
        raise(Errc::kInvalidParams, "coding rate must be 4/5..4/8");
    if (params.preamble_symbols == 0)
        raise(Errc::kInvalidParams, "preamble needs at least one symbol");
    if (!(params.duty_cycle > 0.0 && params.duty_cycle <= 1.0))
        raise(Errc::kInvalidDuty, "duty cycle must be in (0, 1]");
}

double compression_factor(uint32_t uncompressed_octets, uint32_t compressed_octets)
{
    if (compressed_octets == 0)
        raise(Errc::kDivisionByZero, "compressed size is zero");
    return static_cast<double>(uncompressed_octets) / compressed_octets;
}

double average_octets_per_packet(std::span<const FlowStats> stats)
{
    double total = 0.0;
    double weighted = 0.0;
    for (const auto& s : stats) {
        total += s.packet_count;
        weighted += s.packet_count * s.compressed_header_octets;
    }
    if (!(total > 0.0))
        raise(Errc::kEmptyInput, "no packets to average");
    return weighted / total;
}

double lora_time_on_air(const LoraParams& params, uint32_t payload_octets)
{
    validate_lora_params(params);
    if (payload_octets == 0)
        raise(Errc::kInvalidParams, "payload must be at least one octet");

    const double symbol_ms =
        std::pow(2.0, params.spreading_factor) / params.bandwidth_hz * 1000.0;
    const double preamble_ms = (params.preamble_symbols + 4.25) * symbol_ms;

    const int sf = static_cast<int>(params.spreading_factor);
    const int crc = params.crc_on ? 1 : 0;
    const int header = params.explicit_header ? 0 : 1;  // H=0 when the header is present
    const int de = params.low_data_rate_optimize ? 1 : 0;
    const double numerator = 8.0 * payload_octets - 4.0 * sf + 28.0 + 16.0 * crc - 20.0 * header;
    const double denominator = 4.0 * (sf - 2 * de);
    const double extra =
        std::ceil(numerator / denominator) * params.coding_rate_denominator;
    const double payload_symbols = 8.0 + std::max(extra, 0.0);

    return preamble_ms + payload_symbols * symbol_ms;
}

double duty_cycle_min_interval(double toa_ms, double duty)
{
    if (!(duty > 0.0 && duty <= 1.0))
        raise(Errc::kInvalidDuty, "duty cycle must be in (0, 1]");
    return toa_ms * (1.0 / duty - 1.0);
}

AirtimeReport airtime_report(std::span<const FlowStats> stats,
                             std::span<const LoraParams> params_per_sf)
{
    AirtimeReport report;
    for (const auto& p : params_per_sf)
        report.spreading_factors.push_back(p.spreading_factor);
    for (const auto& s : stats) {
        report.flow_labels.push_back(s.flow_label);
        std::vector<double> row;
        row.reserve(params_per_sf.size());
        for (const auto& p : params_per_sf)
            row.push_back(lora_time_on_air(p, s.compressed_header_octets));
        report.toa_ms.push_back(std::move(row));
    }
    return report;
}

} // namespace schc
