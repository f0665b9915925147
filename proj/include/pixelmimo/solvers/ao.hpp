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
#include <optional>
#include <vector>

#include "../instance.hpp"
#include "../random.hpp"
#include "solution.hpp"

// Element-wise alternating optimization: the covariance update is the
// closed-form water-filling solution, each coder bit is set by comparing the
// achievable rate at its two values, and the whole procedure restarts from
// several random initializations. Each restart's rate sequence is
// nondecreasing because every sub-step is solved to optimality.

namespace pixelmimo
{
    struct AoConfig
    {
        arma::uword restarts = 8;  // L random initializations
        arma::uword max_iters = 50;
        double rel_tol = 1e-6;
        std::uint64_t seed = 0;
        std::optional<CoderAssignment> initial; // overrides the first restart's initialization
    };

    inline RateSolution ao_solve(const Instance &inst, const AoConfig &config = {})
    {
        if (config.restarts < 1)
            throw std::invalid_argument("AO needs at least one restart");

        const detail::WallTimer timer;
        Evaluator ev(inst);
        const arma::uword n_bits = inst.bits();

        BitVec best_bits(n_bits, 0);
        WaterFillResult best_wf;
        double best_rate = -std::numeric_limits<double>::infinity();
        bool best_converged = false;
        std::vector<IterateRecord> iterates;

        for (arma::uword restart = 0; restart < config.restarts; ++restart)
        {
            BitVec bits(n_bits, 0);
            if (restart == 0 && config.initial)
            {
                bits = flatten(*config.initial);
                if (bits.size() != n_bits)
                    throw DimensionError("initial assignment does not match the instance");
            }
            else
            {
                Rng rng(derive_seed(config.seed, {0xA0ULL, restart}));
                for (auto &b : bits)
                    b = std::uint8_t(rng.integer(2));
            }

            double prev_rate = -std::numeric_limits<double>::infinity();
            bool converged = false;
            std::vector<IterateRecord> restart_log;

            for (arma::uword iter = 1; iter <= config.max_iters; ++iter)
            {
                const WaterFillResult wf = ev.water_filled(bits);
                ev.set_covariance(wf.Q);

                arma::uword changed = 0;
                double sweep_rate = wf.rate;
                for (arma::uword n = 0; n < n_bits; ++n)
                {
                    const std::uint8_t current = bits[n];
                    bits[n] = 0;
                    const double r0 = ev.covariance_rate(bits);
                    bits[n] = 1;
                    const double r1 = ev.covariance_rate(bits);

                    std::uint8_t chosen;
                    if (std::abs(r1 - r0) <= kRateTieTol)
                        chosen = current; // exact tie keeps the current state
                    else
                        chosen = r1 > r0 ? 1 : 0;
                    bits[n] = chosen;
                    changed += chosen != current;
                    sweep_rate = chosen ? r1 : r0;
                }

                restart_log.push_back({iter, sweep_rate, changed, 0});

                if (changed == 0 && std::isfinite(prev_rate) &&
                    sweep_rate - prev_rate < config.rel_tol * std::max(prev_rate, 1e-12))
                {
                    converged = true;
                    break;
                }
                prev_rate = sweep_rate;
            }

            const WaterFillResult wf = ev.water_filled(bits);
            if (wf.rate > best_rate + kRateTieTol)
            {
                best_rate = wf.rate;
                best_bits = bits;
                best_wf = wf;
                best_converged = converged;
            }
            iterates.insert(iterates.end(), restart_log.begin(), restart_log.end());
        }

        RateSolution sol;
        sol.assignment = to_assignment(best_bits, inst.S(), inst.N_T(), inst.N_R());
        sol.covariance = std::move(best_wf);
        sol.rate = best_rate;
        sol.method = "ao";
        sol.eval_count = ev.evaluations();
        sol.converged = best_converged;
        sol.wall_time_s = timer.seconds();
        sol.iterates = std::move(iterates); // iteration numbering restarts at 1 per restart
        return sol;
    }
}
