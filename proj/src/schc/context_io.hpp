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

#ifndef SCHC_CONTEXT_IO_HPP_
#define SCHC_CONTEXT_IO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schc/rules.hpp"

namespace schc {

constexpr uint32_t kDocumentFormatVersion = 1;

enum class ContextEncoding { kBinary, kText };

/// Serializes a context. The binary form is the canonical CBOR encoding
/// (byte-stable: saving the same context always produces the same bytes);
/// the text form is the identical document as pretty-printed JSON.
std::vector<uint8_t> save_context(const Context& ctx, ContextEncoding encoding);

/// Parses either encoding (auto-detected) and validates the result.
/// Violations are reported as a ValidationFailed error.
Context load_context(std::span<const uint8_t> bytes);

/// A rule stored at the network side. `layer` is empty for whole-chain
/// (flat) rules.
struct StoredRule {
    std::optional<Layer> layer;
    std::vector<FieldDescriptor> fields;

    bool operator==(const StoredRule& other) const = default;
};

/// Scope half of a device short-ID key: the layer segment the short ID
/// lives in, or Flat for undivided rule IDs.
enum class RuleScope : int8_t { kFlat = -1, kNetwork = 0, kTransport = 1, kApplication = 2 };

RuleScope scope_of(const StoredRule& rule);
const char* scope_name(RuleScope scope);

/// Network-side rule store: long-ID rules plus per-device short-ID maps.
/// Distinct devices may map different short IDs to the same stored rule;
/// each distinct rule is stored once.
class RuleRegistry {
public:
    RuleRegistry() = default;
    RuleRegistry(bool layered, RuleIdLayout layout) : layered_(layered), layout_(layout) {}

    bool layered() const { return layered_; }
    const RuleIdLayout& layout() const { return layout_; }

    /// Registers a rule, deduplicating on descriptor equality: a rule that
    /// is already stored returns its existing long ID.
    uint16_t register_rule(const StoredRule& rule);

    /// Assigns dense short IDs (from 0, per segment in layered mode) to the
    /// selected long rules, records the device mapping, and returns the
    /// device-side context holding only those rules.
    Context provision_device(const std::vector<uint8_t>& device_address,
                             const std::vector<uint16_t>& selection);

    /// The stored rule a device's short ID refers to, with its long ID.
    std::pair<uint16_t, const StoredRule*> resolve(const std::vector<uint8_t>& device_address,
                                                   RuleScope scope, uint32_t short_id) const;

    /// Rebuilds the device context previously handed out by provisioning.
    Context device_context(const std::vector<uint8_t>& device_address) const;

    size_t rule_count() const { return rules_.size(); }
    size_t device_count() const { return devices_.size(); }
    const std::map<uint16_t, StoredRule>& rules() const { return rules_; }

    std::string describe() const;

    std::vector<uint8_t> save(ContextEncoding encoding) const;
    static RuleRegistry load(std::span<const uint8_t> bytes);

private:
    using ShortKey = std::pair<RuleScope, uint32_t>;

    bool layered_ = false;
    RuleIdLayout layout_;
    std::map<uint16_t, StoredRule> rules_;
    std::map<std::vector<uint8_t>, std::map<ShortKey, uint16_t>> devices_;
};

/// One line per descriptor, fixed columns; used by the CLI.
std::string describe_fields(const std::vector<FieldDescriptor>& fields);

/// Registers every rule of a context document as stored rules.
std::vector<uint16_t> register_context_rules(RuleRegistry& reg, const Context& ctx);

std::string hex_encode(std::span<const uint8_t> bytes);
std::vector<uint8_t> hex_decode(const std::string& hex);

} // namespace schc

#endif // SCHC_CONTEXT_IO_HPP_
