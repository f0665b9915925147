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

#include <limits>
#include <string>

#include "../instance.hpp"
#include "solution.hpp"

namespace pixelmimo
{
    struct ExhaustiveConfig
    {
        arma::uword max_bits = 24; // refuse instances beyond 2^max_bits assignments
    };

    namespace detail
    {
        // Writes the code-th decision vector in lexicographic order: bit 0 of
        // the vector is the most significant bit of the counter.
        inline void lexicographic_bits(std::uint64_t code, arma::uword n_bits, BitVec &out)
        {
            for (arma::uword n = 0; n < n_bits; ++n)
                out[n] = std::uint8_t((code >> (n_bits - 1 - n)) & 1u);
        }

        inline std::uint64_t two_to(arma::uword n) // saturating
        {
            return n < 64 ? std::uint64_t(1) << n : std::numeric_limits<std::uint64_t>::max();
        }
    }

    // Enumerates every coder assignment, water-fills each, and returns the
    // maximum-rate solution. Rate ties within kRateTieTol resolve to the
    // lexicographically smallest decision vector.
    inline RateSolution exhaustive_solve(const Instance &inst, const ExhaustiveConfig &config = {})
    {
        const detail::WallTimer timer;
        const arma::uword n_bits = inst.bits();
        if (n_bits > config.max_bits)
            throw CapExceededError("exhaustive search refused: " + std::to_string(n_bits) +
                                       " binary variables require " +
                                       std::to_string(detail::two_to(n_bits)) + " evaluations (cap " +
                                       std::to_string(detail::two_to(config.max_bits)) + ")",
                                   detail::two_to(n_bits));

        Evaluator ev(inst);
        BitVec bits(n_bits, 0);
        BitVec best_bits;
        WaterFillResult best;
        double best_rate = 0.0;
        bool have_best = false;

        const std::uint64_t total = std::uint64_t(1) << n_bits;
        for (std::uint64_t code = 0; code < total; ++code)
        {
            detail::lexicographic_bits(code, n_bits, bits);
            WaterFillResult wf = ev.water_filled(bits);
            if (!have_best || wf.rate > best_rate + kRateTieTol)
            {
                have_best = true;
                best_rate = wf.rate;
                best = std::move(wf);
                best_bits = bits;
            }
        }

        RateSolution sol;
        sol.assignment = to_assignment(best_bits, inst.S(), inst.N_T(), inst.N_R());
        sol.covariance = std::move(best);
        sol.rate = best_rate;
        sol.method = "exhaustive";
        sol.eval_count = ev.evaluations();
        sol.wall_time_s = timer.seconds();
        return sol;
    }
}
