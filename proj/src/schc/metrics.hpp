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

#ifndef SCHC_METRICS_HPP_
#define SCHC_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace schc {

/// Per-flow header size statistics. Packet counts may be fractional
/// (averaged over emulation runs).
struct FlowStats {
    std::string flow_label;
    double packet_count = 0.0;
    uint32_t uncompressed_header_octets = 0;
    uint32_t compressed_header_octets = 0;
};

/// LoRa modem settings for airtime computation.
struct LoraParams {
    uint32_t spreading_factor = 7;        // 7..12
    uint32_t bandwidth_hz = 125000;       // 125k, 250k or 500k
    uint32_t coding_rate_denominator = 5; // 4/5 .. 4/8
    uint32_t preamble_symbols = 8;
    bool explicit_header = true;
    bool crc_on = true;
    bool low_data_rate_optimize = false;
    double duty_cycle = 0.001;
};

/// Defaults for one spreading factor; low-data-rate optimization switches
/// on when the symbol time exceeds 16 ms (SF11/SF12 at 125 kHz).
LoraParams lora_params_for_sf(uint32_t sf, uint32_t bandwidth_hz = 125000);

void validate_lora_params(const LoraParams& params);

/// Uncompressed size over compressed size.
double compression_factor(uint32_t uncompressed_octets, uint32_t compressed_octets);

/// Count-weighted mean of compressed header octets per packet.
double average_octets_per_packet(std::span<const FlowStats> stats);

/// SX127x-style airtime in milliseconds for a payload of `payload_octets`.
double lora_time_on_air(const LoraParams& params, uint32_t payload_octets);

/// Mandatory off-time after one transmission of `toa_ms` under a duty-cycle
/// cap: toa * (1/duty - 1).
double duty_cycle_min_interval(double toa_ms, double duty);

/// Airtime matrix: one row per flow, one column per parameter set.
struct AirtimeReport {
    std::vector<std::string> flow_labels;
    std::vector<uint32_t> spreading_factors;
    std::vector<std::vector<double>> toa_ms;  // [flow][sf index]
};

AirtimeReport airtime_report(std::span<const FlowStats> stats,
                             std::span<const LoraParams> params_per_sf);

} // namespace schc

#endif // SCHC_METRICS_HPP_
