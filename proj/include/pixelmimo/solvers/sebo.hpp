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
#include <vector>

#include "../instance.hpp"
#include "../random.hpp"
#include "solution.hpp"

// Successive exhaustive boolean optimization: the coder bits are split into
// consecutive blocks that are exhaustively re-optimized one at a time,
// alternating with the closed-form covariance update, followed by random
// single-bit perturbations with re-convergence.

namespace pixelmimo
{
    struct SeboConfig
    {
        arma::uword block_size = 3; // J bits per block (the last block may be smaller)
        arma::uword bit_flips = 8;  // random perturbations after convergence
        arma::uword max_rounds = 100;
        std::uint64_t seed = 0;
    };

    inline RateSolution sebo_solve(const Instance &inst, const SeboConfig &config = {})
    {
        if (config.block_size < 1)
            throw std::invalid_argument("SEBO block size must be at least 1");

        const detail::WallTimer timer;
        Evaluator ev(inst);
        const arma::uword n_bits = inst.bits();

        std::vector<IterateRecord> iterates;
        bool hit_round_cap = false;

        // Block-coordinate convergence from the given start; returns the
        // water-filled result of the converged bits.
        auto converge = [&](BitVec &bits) -> WaterFillResult {
            WaterFillResult wf = ev.water_filled(bits);
            for (arma::uword round = 1; round <= config.max_rounds; ++round)
            {
                ev.set_covariance(wf.Q);
                arma::uword blocks_changed = 0;

                for (arma::uword start = 0; start < n_bits; start += config.block_size)
                {
                    const arma::uword len = std::min<arma::uword>(config.block_size, n_bits - start);
                    const std::uint64_t options = std::uint64_t(1) << len;

                    double best_rate = -std::numeric_limits<double>::infinity();
                    std::uint64_t best_code = 0;
                    std::uint64_t current_code = 0;
                    for (arma::uword k = 0; k < len; ++k)
                        current_code |= std::uint64_t(bits[start + k]) << k;

                    for (std::uint64_t code = 0; code < options; ++code)
                    {
                        for (arma::uword k = 0; k < len; ++k)
                            bits[start + k] = std::uint8_t((code >> k) & 1u);
                        const double r = ev.covariance_rate(bits);
                        if (r > best_rate + kRateTieTol)
                        {
                            best_rate = r;
                            best_code = code;
                        }
                        else if (code == current_code && r >= best_rate - kRateTieTol)
                        {
                            best_code = code; // tie keeps the incoming block
                        }
                    }
                    for (arma::uword k = 0; k < len; ++k)
                        bits[start + k] = std::uint8_t((best_code >> k) & 1u);
                    blocks_changed += best_code != current_code;
                }

                wf = ev.water_filled(bits);
                iterates.push_back({round, wf.rate, blocks_changed, 0});
                if (blocks_changed == 0)
                    return wf;
            }
            hit_round_cap = true;
            return wf;
        };

        BitVec best_bits(n_bits, 0);
        WaterFillResult best_wf = converge(best_bits);
        double best_rate = best_wf.rate;

        if (n_bits > 0)
        {
            Rng rng(derive_seed(config.seed, {0x5EB0ULL}));
            for (arma::uword flip = 0; flip < config.bit_flips; ++flip)
            {
                BitVec candidate = best_bits;
                candidate[rng.integer(n_bits)] ^= 1u;
                WaterFillResult wf = converge(candidate);
                if (wf.rate > best_rate + kRateTieTol)
                {
                    best_rate = wf.rate;
                    best_bits = std::move(candidate);
                    best_wf = std::move(wf);
                }
            }
        }

        RateSolution sol;
        sol.assignment = to_assignment(best_bits, inst.S(), inst.N_T(), inst.N_R());
        sol.covariance = std::move(best_wf);
        sol.rate = best_rate;
        sol.method = "sebo";
        sol.eval_count = ev.evaluations();
        sol.converged = !hit_round_cap;
        sol.wall_time_s = timer.seconds();
        sol.iterates = std::move(iterates);
        return sol;
    }
}
