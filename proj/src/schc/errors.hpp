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

#ifndef SCHC_ERRORS_HPP_
#define SCHC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace schc {

/// Error categories surfaced by the engine. Mirrored one-to-one by the
/// status codes of the public C API.
enum class Errc {
    kTruncatedHeader,
    kBadVersion,
    kInconsistentChain,
    kLengthMismatch,
    kFieldAbsent,
    kPositionOutOfRange,
    kWidthMismatch,
    kSegmentOverflow,
    kContextInvalid,
    kUnknownRuleId,
    kResidueUnderflow,
    kDispatchMismatch,
    kMalformedDocument,
    kUnsupportedVersion,
    kValidationFailed,
    kRegistryFull,
    kTooManyRules,
    kUnknownLongId,
    kUnknownDevice,
    kUnknownShortId,
    kInvalidParams,
    kDivisionByZero,
    kEmptyInput,
    kInvalidDuty,
    kIo,
    kInternal,
};

const char* errc_name(Errc e);

class SchcError : public std::runtime_error {
public:
    SchcError(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw SchcError(code, what); }

} // namespace schc

#endif // SCHC_ERRORS_HPP_
