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

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "../channel.hpp"

namespace pixelmimo
{
    struct IterateRecord
    {
        std::uint64_t iteration = 0;
        double rate = 0.0;
        std::uint64_t bits_changed = 0;
        std::uint64_t nodes_expanded = 0;
    };

    struct RateSolution
    {
        CoderAssignment assignment;
        WaterFillResult covariance;
        double rate = 0.0;          // bits/s/Hz
        std::string method;
        double wall_time_s = 0.0;
        std::uint64_t eval_count = 0; // effective-channel evaluations
        std::uint64_t node_count = 0; // search-tree nodes (branch-and-bound only)
        bool converged = true;        // false when a budget or cap cut the run short
        std::vector<IterateRecord> iterates;
    };

    namespace detail
    {
        class WallTimer
        {
        public:
            WallTimer() : start_(std::chrono::steady_clock::now()) {}

            double seconds() const
            {
                return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            }

        private:
            std::chrono::steady_clock::time_point start_;
        };
    }
}
