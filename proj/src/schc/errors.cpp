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

#include "schc/errors.hpp"

namespace schc {

const char* errc_name(Errc e)
{
    switch (e) {
    case Errc::kTruncatedHeader: return "TruncatedHeader";
    case Errc::kBadVersion: return "BadVersion";
    case Errc::kInconsistentChain: return "InconsistentChain";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kFieldAbsent: return "FieldAbsent";
    case Errc::kPositionOutOfRange: return "PositionOutOfRange";
    case Errc::kWidthMismatch: return "WidthMismatch";
    case Errc::kSegmentOverflow: return "SegmentOverflow";
    case Errc::kContextInvalid: return "ContextInvalid";
    case Errc::kUnknownRuleId: return "UnknownRuleId";
    case Errc::kResidueUnderflow: return "ResidueUnderflow";
    case Errc::kDispatchMismatch: return "DispatchMismatch";
    case Errc::kMalformedDocument: return "MalformedDocument";
    case Errc::kUnsupportedVersion: return "UnsupportedVersion";
    case Errc::kValidationFailed: return "ValidationFailed";
    case Errc::kRegistryFull: return "RegistryFull";
    case Errc::kTooManyRules: return "TooManyRules";
    case Errc::kUnknownLongId: return "UnknownLongId";
    case Errc::kUnknownDevice: return "UnknownDevice";
    case Errc::kUnknownShortId: return "UnknownShortId";
    case Errc::kInvalidParams: return "InvalidParams";
    case Errc::kDivisionByZero: return "DivisionByZero";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kInvalidDuty: return "InvalidDuty";
    case Errc::kIo: return "Io";
    case Errc::kInternal: return "Internal";
    }
    return "Unknown";
}

} // namespace schc
