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

#include <utility>
#include <vector>

#include "../instance.hpp"
#include "solution.hpp"

// Greedy bit fixing followed by single-flip local refinement. Seeds the
// branch-and-bound incumbent and doubles as a standalone heuristic.

namespace pixelmimo
{
    namespace detail
    {
        // Single-bit local search; accepts flips that improve by more than
        // kImproveTol, pass by pass, until a pass makes no change or the
        // pass cap is hit. Returns the number of accepted flips.
        template <class RateFn>
        arma::uword refine_bits(BitVec &bits, double &current_rate, RateFn &&rate_of,
                                arma::uword pass_cap)
        {
            arma::uword accepted = 0;
            for (arma::uword pass = 0; pass < pass_cap; ++pass)
            {
                bool improved = false;
                for (std::size_t n = 0; n < bits.size(); ++n)
                {
                    bits[n] ^= 1u;
                    const double r = rate_of(bits);
                    if (r > current_rate + kImproveTol)
                    {
                        current_rate = r;
                        improved = true;
                        ++accepted;
                    }
                    else
                    {
                        bits[n] ^= 1u;
                    }
                }
                if (!improved)
                    break;
            }
            return accepted;
        }

        // Stage 1: fix indices in order from the all-zeros vector, keeping
        // the better of bit 0 / bit 1 with undecided bits at their current
        // values. Stage 2: refine_bits. pass_rates, when given, records the
        // rate after the greedy stage and after each refinement pass.
        template <class RateFn>
        std::pair<BitVec, double> dive(arma::uword n_bits, RateFn &&rate_of, arma::uword pass_cap,
                                       std::vector<double> *pass_rates = nullptr)
        {
            BitVec bits(n_bits, 0);
            double current = rate_of(bits);
            for (arma::uword n = 0; n < n_bits; ++n)
            {
                bits[n] = 0;
                const double r0 = rate_of(bits);
                bits[n] = 1;
                const double r1 = rate_of(bits);
                if (r1 > r0 + kRateTieTol)
                {
                    current = r1;
                }
                else
                {
                    bits[n] = 0;
                    current = r0;
                }
            }
            if (pass_rates)
                pass_rates->push_back(current);

            for (arma::uword pass = 0; pass < pass_cap; ++pass)
            {
                if (refine_bits(bits, current, rate_of, 1) == 0)
                    break;
                if (pass_rates)
                    pass_rates->push_back(current);
            }
            return {std::move(bits), current};
        }
    }

    // Standalone diving heuristic under water-filled covariances; the result
    // is a feasible lower bound on the instance optimum.
    inline RateSolution diving_heuristic(const Instance &inst, arma::uword refinement_pass_cap = 20,
                                         std::vector<double> *pass_rates = nullptr)
    {
        const detail::WallTimer timer;
        Evaluator ev(inst);
        auto rate_of = [&ev](const BitVec &b) { return ev.water_filled(b).rate; };
        auto [bits, r] = detail::dive(inst.bits(), rate_of, refinement_pass_cap, pass_rates);

        RateSolution sol;
        sol.assignment = to_assignment(bits, inst.S(), inst.N_T(), inst.N_R());
        sol.covariance = ev.water_filled(bits);
        sol.rate = sol.covariance.rate;
        sol.method = "diving";
        sol.eval_count = ev.evaluations();
        sol.wall_time_s = timer.seconds();
        (void)r;
        return sol;
    }
}
