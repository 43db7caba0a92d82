/*
 * Copyright 2026 The schc-engine Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the SCHC/LSCHC header compression engine.
 *
 * Contexts and registries are opaque handles. Functions return a status
 * code; buffers produced by the library are malloc'd and must be released
 * with schc_free(). schc_last_error() returns a thread-local detail message
 * for the most recent failure on the calling thread.
 *
 * Loaded contexts are immutable: sharing one handle across threads for
 * compression and decompression is safe. Registry handles are not
 * internally synchronized; serialize mutating calls externally.
 */

#ifndef SCHC_SCHC_H_
#define SCHC_SCHC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef SCHC_API
#define SCHC_API __attribute__((visibility("default")))
#endif

typedef struct schc_context schc_context;
typedef struct schc_registry schc_registry;

typedef enum schc_status {
    SCHC_OK = 0,
    SCHC_ERR_TRUNCATED_HEADER,
    SCHC_ERR_BAD_VERSION,
    SCHC_ERR_INCONSISTENT_CHAIN,
    SCHC_ERR_LENGTH_MISMATCH,
    SCHC_ERR_FIELD_ABSENT,
    SCHC_ERR_POSITION_OUT_OF_RANGE,
    SCHC_ERR_WIDTH_MISMATCH,
    SCHC_ERR_SEGMENT_OVERFLOW,
    SCHC_ERR_CONTEXT_INVALID,
    SCHC_ERR_UNKNOWN_RULE_ID,
    SCHC_ERR_RESIDUE_UNDERFLOW,
    SCHC_ERR_DISPATCH_MISMATCH,
    SCHC_ERR_MALFORMED_DOCUMENT,
    SCHC_ERR_UNSUPPORTED_VERSION,
    SCHC_ERR_VALIDATION_FAILED,
    SCHC_ERR_REGISTRY_FULL,
    SCHC_ERR_TOO_MANY_RULES,
    SCHC_ERR_UNKNOWN_LONG_ID,
    SCHC_ERR_UNKNOWN_DEVICE,
    SCHC_ERR_UNKNOWN_SHORT_ID,
    SCHC_ERR_INVALID_PARAMS,
    SCHC_ERR_DIVISION_BY_ZERO,
    SCHC_ERR_EMPTY_INPUT,
    SCHC_ERR_INVALID_DUTY,
    SCHC_ERR_IO,
    SCHC_ERR_INTERNAL
} schc_status;

typedef enum schc_direction { SCHC_DIR_UP = 0, SCHC_DIR_DOWN = 1 } schc_direction;

/* Rule scope of a registry short ID: the layer segment it lives in, or
 * SCHC_SCOPE_FLAT for undivided rule IDs. */
typedef enum schc_scope {
    SCHC_SCOPE_FLAT = -1,
    SCHC_SCOPE_NETWORK = 0,
    SCHC_SCOPE_TRANSPORT = 1,
    SCHC_SCOPE_APPLICATION = 2
} schc_scope;

SCHC_API const char* schc_version(void);
SCHC_API const char* schc_status_name(schc_status status);
SCHC_API const char* schc_last_error(void);
SCHC_API void schc_free(void* ptr);

/* ---- contexts ---------------------------------------------------------- */

SCHC_API schc_status schc_context_load(const uint8_t* data, size_t len, schc_context** out);
SCHC_API schc_status schc_context_load_file(const char* path, schc_context** out);

/* binary != 0 selects the canonical CBOR form, 0 the JSON text form. */
SCHC_API schc_status schc_context_save(const schc_context* ctx, int binary, uint8_t** out,
                                       size_t* out_len);
SCHC_API void schc_context_free(schc_context* ctx);

/* 1 when the context is layered, 0 when flat. */
SCHC_API int schc_context_layered(const schc_context* ctx);
SCHC_API size_t schc_context_rule_count(const schc_context* ctx);
SCHC_API size_t schc_context_descriptor_count(const schc_context* ctx);

/* Structural check. On violations sets *report to a malloc'd text listing
 * (one finding per line) and returns SCHC_ERR_VALIDATION_FAILED; on a clean
 * context *report is NULL. */
SCHC_API schc_status schc_context_validate(const schc_context* ctx, char** report);

/* ---- compression ------------------------------------------------------- */

typedef struct schc_compress_info {
    int matched;              /* 0 when the reserved uncompressed ID was used */
    uint32_t rule_id;         /* numeric value of the rule-ID bits on the wire */
    uint32_t alc;             /* layered segment values; zero in flat mode */
    uint32_t tlc;
    uint32_t nlc;
    uint32_t residue_bits;
    uint32_t header_octets;   /* dispatch + rule ID + residue, padded */
} schc_compress_info;

SCHC_API schc_status schc_compress(const schc_context* ctx, const uint8_t* packet, size_t len,
                                   schc_direction direction, uint8_t** out, size_t* out_len,
                                   schc_compress_info* info);

/* device_iid may be NULL when no rule uses dev-iid reconstruction. */
SCHC_API schc_status schc_decompress(const schc_context* ctx, const uint8_t* frame, size_t len,
                                     schc_direction direction, const uint8_t device_iid[8],
                                     uint8_t** out, size_t* out_len);

/* ---- registry ---------------------------------------------------------- */

SCHC_API schc_status schc_registry_new(int layered, schc_registry** out);
SCHC_API schc_status schc_registry_load(const uint8_t* data, size_t len, schc_registry** out);
SCHC_API schc_status schc_registry_load_file(const char* path, schc_registry** out);
SCHC_API schc_status schc_registry_save(const schc_registry* reg, int binary, uint8_t** out,
                                        size_t* out_len);
SCHC_API void schc_registry_free(schc_registry* reg);

/* Registers every rule of a context document; ids_out (capacity `cap`)
 * receives the assigned long IDs. Re-registering a stored rule returns its
 * existing ID. */
SCHC_API schc_status schc_registry_register(schc_registry* reg, const schc_context* rules,
                                            uint16_t* ids_out, size_t cap, size_t* count_out);

/* Picks stored rules for a device, assigns dense short IDs and returns the
 * device-side context. */
SCHC_API schc_status schc_registry_provision(schc_registry* reg, const uint8_t* device_address,
                                             size_t address_len, const uint16_t* long_ids,
                                             size_t count, schc_context** device_ctx);

/* Maps (device, scope, short ID) back to the stored rule; *text gets a
 * malloc'd description and long_id_out the network-side ID. */
SCHC_API schc_status schc_registry_resolve(const schc_registry* reg,
                                           const uint8_t* device_address, size_t address_len,
                                           schc_scope scope, uint32_t short_id,
                                           uint16_t* long_id_out, char** text);

/* Rebuilds the context provisioned for a device. */
SCHC_API schc_status schc_registry_device_context(const schc_registry* reg,
                                                  const uint8_t* device_address,
                                                  size_t address_len, schc_context** out);

SCHC_API schc_status schc_registry_describe(const schc_registry* reg, char** text);
SCHC_API size_t schc_registry_rule_count(const schc_registry* reg);

/* ---- metrics ----------------------------------------------------------- */

typedef struct schc_lora_params {
    uint32_t spreading_factor;
    uint32_t bandwidth_hz;
    uint32_t coding_rate_denominator; /* 5 for 4/5 */
    uint32_t preamble_symbols;
    int explicit_header;
    int crc_on;
    int low_data_rate_optimize;
    double duty_cycle;
} schc_lora_params;

/* Defaults for one spreading factor at 125 kHz: CR 4/5, 8 preamble symbols,
 * explicit header, CRC on, LDRO for SF11/SF12, duty cycle 0.1%. */
SCHC_API schc_status schc_lora_params_default(uint32_t sf, schc_lora_params* out);

SCHC_API schc_status schc_lora_time_on_air(const schc_lora_params* params,
                                           uint32_t payload_octets, double* toa_ms);

SCHC_API schc_status schc_duty_cycle_min_interval(double toa_ms, double duty,
                                                  double* interval_ms);

/* ---- built-in evaluation ------------------------------------------------ */

/* Compression-factor, octets-per-packet and airtime report for the built-in
 * three-flow scenario. format: 0 text, 1 CSV. total_packets <= 0 selects
 * the default mix. */
SCHC_API schc_status schc_bench_report(int layered, double total_packets, int format,
                                       char** text);

/* Airtime table for a fixed payload size. sfs may be NULL to cover 7..12. */
SCHC_API schc_status schc_airtime_table(uint32_t payload_octets, const uint32_t* sfs,
                                        size_t sf_count, double duty_cycle, int format,
                                        char** text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCHC_SCHC_H_ */
