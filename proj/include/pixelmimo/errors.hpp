// SPDX-License-Identifier: Apache-2.0
//
// pixelmimo - capacity toolkit for MIMO links with switch-reconfigurable
// pixel antennas
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pixelmimo
{
    // Shape or size disagreement between an operation's inputs.
    struct DimensionError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // The loaded pixel network (Z_PP + Z_L) cannot be solved for a coder.
    struct SingularNetworkError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // A radiation pattern collapsed to (numerically) zero.
    struct DegeneratePatternError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // A transmit covariance input is not Hermitian positive semidefinite.
    struct InvalidCovarianceError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // A JSON artifact is malformed; the message names the offending field.
    struct ParseError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Random model synthesis failed to satisfy the model invariants.
    struct SynthesisError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Bad selection string / CLI usage.
    struct UsageError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // An enumeration-based solver refused an instance above its hard cap.
    struct CapExceededError : std::runtime_error
    {
        CapExceededError(const std::string &msg, std::uint64_t required)
            : std::runtime_error(msg), required_evaluations(required) {}

        std::uint64_t required_evaluations;
    };
}
