// Copyright 2026 The otocqp Authors
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

namespace otocqp {

enum class Errc {
    NotHermitian,
    NoConvergence,
    DimensionTooLarge,
    DimensionMismatch,
    BadSite,
    GroupingAmbiguous,
    NotUnitary,
    NonpositiveTemperature,
    InvalidState,
    IndexOutOfRange,
    BasisMismatch,
    StepOutOfRange,
    NotProjector,
    CompletenessUnreachable,
    ZeroCoupling,
    CouplingPhase,
    SingularAngle,
    UnsupportedState,
    InvalidArgument,
    ConfigInvalid,
    Io,
};

constexpr std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NotHermitian: return "NotHermitian";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::DimensionTooLarge: return "DimensionTooLarge";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::BadSite: return "BadSite";
        case Errc::GroupingAmbiguous: return "GroupingAmbiguous";
        case Errc::NotUnitary: return "NotUnitary";
        case Errc::NonpositiveTemperature: return "NonpositiveTemperature";
        case Errc::InvalidState: return "InvalidState";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::BasisMismatch: return "BasisMismatch";
        case Errc::StepOutOfRange: return "StepOutOfRange";
        case Errc::NotProjector: return "NotProjector";
        case Errc::CompletenessUnreachable: return "CompletenessUnreachable";
        case Errc::ZeroCoupling: return "ZeroCoupling";
        case Errc::CouplingPhase: return "CouplingPhase";
        case Errc::SingularAngle: return "SingularAngle";
        case Errc::UnsupportedState: return "UnsupportedState";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

// Every failure in the library is reported through this type; `code()` is
// stable and is what tests and the CLI dispatch on.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

}  // namespace otocqp
