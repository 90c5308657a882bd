// Copyright 2026 The dfsdecoh Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfsdecoh {

enum class ErrorKind {
    InvalidState,
    InvalidCoherenceFactor,
    NotInSubspace,
    UnsupportedAnalytic,
    ResolutionError,
    GridError,
    FockOverflow,
    NonPositiveVisibility,
    DegenerateDesign,
    RangeError,
    ParseError,
    OrderError,
    ConfigError,
};

inline const char *to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::InvalidCoherenceFactor: return "InvalidCoherenceFactor";
        case ErrorKind::NotInSubspace: return "NotInSubspace";
        case ErrorKind::UnsupportedAnalytic: return "UnsupportedAnalytic";
        case ErrorKind::ResolutionError: return "ResolutionError";
        case ErrorKind::GridError: return "GridError";
        case ErrorKind::FockOverflow: return "FockOverflow";
        case ErrorKind::NonPositiveVisibility: return "NonPositiveVisibility";
        case ErrorKind::DegenerateDesign: return "DegenerateDesign";
        case ErrorKind::RangeError: return "RangeError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::OrderError: return "OrderError";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library. `line()` is the 1-based input line
/// for errors tied to a file row, 0 otherwise.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message, std::size_t line = 0)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), line_(line) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }
    std::size_t line() const noexcept {
        return line_;
    }

  private:
    ErrorKind kind_;
    std::size_t line_;
};

}  // namespace dfsdecoh
