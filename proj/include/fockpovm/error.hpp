// Copyright 2026 The fockpovm Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fockpovm {

enum class ErrorKind {
    TruncationTooSmall,
    IndexOutOfRange,
    InvalidResolution,
    InvalidState,
    InvalidArgument,
    NegligibleOutcome,
    GridInsufficient,
};

inline std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::TruncationTooSmall:
            return "TruncationTooSmall";
        case ErrorKind::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorKind::InvalidResolution:
            return "InvalidResolution";
        case ErrorKind::InvalidState:
            return "InvalidState";
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::NegligibleOutcome:
            return "NegligibleOutcome";
        case ErrorKind::GridInsufficient:
            return "GridInsufficient";
    }
    return "Unknown";
}

/// Every failure raised by the library. `kind()` lets callers (the CLI in
/// particular) tell argument problems apart from numerical ones.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }

    /// True for errors caused by bad inputs rather than by the numerics.
    bool is_argument_error() const noexcept {
        return kind_ == ErrorKind::InvalidResolution || kind_ == ErrorKind::InvalidArgument ||
               kind_ == ErrorKind::IndexOutOfRange || kind_ == ErrorKind::InvalidState;
    }

   private:
    ErrorKind kind_;
};

}  // namespace fockpovm
