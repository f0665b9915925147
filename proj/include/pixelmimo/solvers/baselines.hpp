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
#include "../random.hpp"
#include "solution.hpp"

// Benchmark coder schemes. Switch convention: bit 0 = "on" (short), bit 1 =
// "off" (open), so all-on is the all-zeros assignment.

namespace pixelmimo
{
    enum class BaselineScheme
    {
        conventional,      // fixed feed pattern, covariance optimization only
        best_single_off,   // one "off" port per antenna, position searched
        best_single_on,    // one "on" port per antenna, position searched
        random_single_off, // one "off" port per antenna, position drawn uniformly
        random_single_on,
        all_off,
        all_on
    };

    inline BaselineScheme parse_baseline(const std::string &name)
    {
        if (name == "conventional")
            return BaselineScheme::conventional;
        if (name == "best-single-off")
            return BaselineScheme::best_single_off;
        if (name == "best-single-on")
            return BaselineScheme::best_single_on;
        if (name == "random-single-off")
            return BaselineScheme::random_single_off;
        if (name == "random-single-on")
            return BaselineScheme::random_single_on;
        if (name == "all-off")
            return BaselineScheme::all_off;
        if (name == "all-on")
            return BaselineScheme::all_on;
        throw UsageError("unknown baseline scheme '" + name + "'");
    }

    inline std::string baseline_name(BaselineScheme scheme)
    {
        switch (scheme)
        {
        case BaselineScheme::conventional: return "conventional";
        case BaselineScheme::best_single_off: return "best-single-off";
        case BaselineScheme::best_single_on: return "best-single-on";
        case BaselineScheme::random_single_off: return "random-single-off";
        case BaselineScheme::random_single_on: return "random-single-on";
        case BaselineScheme::all_off: return "all-off";
        case BaselineScheme::all_on: return "all-on";
        }
        throw UsageError("unknown baseline scheme");
    }

    namespace detail
    {
        // Fills antenna a's S-bit block with a single-position pattern.
        inline void set_single_position(BitVec &bits, arma::uword antenna, arma::uword S,
                                        arma::uword position, bool off_at_position)
        {
            for (arma::uword s = 0; s < S; ++s)
                bits[antenna * S + s] = std::uint8_t(off_at_position ? (s == position ? 1 : 0)
                                                                     : (s == position ? 0 : 1));
        }

        // Sequential per-antenna position search (transmit antennas first,
        // then receive), each choice made with the others held fixed.
        inline RateSolution best_single(const Instance &inst, bool off_at_position)
        {
            Evaluator ev(inst);
            const arma::uword S = inst.S();
            const arma::uword antennas = inst.N_T() + inst.N_R();
            BitVec bits(inst.bits(), 0);

            if (S == 0)
            {
                RateSolution sol;
                sol.covariance = ev.water_filled(bits);
                sol.rate = sol.covariance.rate;
                sol.assignment = to_assignment(bits, S, inst.N_T(), inst.N_R());
                sol.eval_count = ev.evaluations();
                return sol;
            }

            for (arma::uword a = 0; a < antennas; ++a)
                set_single_position(bits, a, S, 0, off_at_position);

            WaterFillResult chosen;
            for (arma::uword a = 0; a < antennas; ++a)
            {
                double best_rate = -std::numeric_limits<double>::infinity();
                arma::uword best_pos = 0;
                for (arma::uword pos = 0; pos < S; ++pos)
                {
                    set_single_position(bits, a, S, pos, off_at_position);
                    WaterFillResult wf = ev.water_filled(bits);
                    if (wf.rate > best_rate + kRateTieTol)
                    {
                        best_rate = wf.rate;
                        best_pos = pos;
                        chosen = std::move(wf);
                    }
                }
                set_single_position(bits, a, S, best_pos, off_at_position);
            }

            RateSolution sol;
            sol.assignment = to_assignment(bits, S, inst.N_T(), inst.N_R());
            sol.covariance = std::move(chosen);
            sol.rate = sol.covariance.rate;
            sol.eval_count = ev.evaluations();
            return sol;
        }

        inline RateSolution random_single(const Instance &inst, bool off_at_position,
                                          std::uint64_t seed)
        {
            Evaluator ev(inst);
            const arma::uword S = inst.S();
            BitVec bits(inst.bits(), 0);
            if (S > 0)
            {
                Rng rng(derive_seed(seed, {0xBA5EULL}));
                for (arma::uword a = 0; a < inst.N_T() + inst.N_R(); ++a)
                    set_single_position(bits, a, S, rng.integer(S), off_at_position);
            }
            RateSolution sol;
            sol.assignment = to_assignment(bits, S, inst.N_T(), inst.N_R());
            sol.covariance = ev.water_filled(bits);
            sol.rate = sol.covariance.rate;
            sol.eval_count = ev.evaluations();
            return sol;
        }

        inline RateSolution constant_coder(const Instance &inst, std::uint8_t value)
        {
            Evaluator ev(inst);
            BitVec bits(inst.bits(), value);
            RateSolution sol;
            sol.assignment = to_assignment(bits, inst.S(), inst.N_T(), inst.N_R());
            sol.covariance = ev.water_filled(bits);
            sol.rate = sol.covariance.rate;
            sol.eval_count = ev.evaluations();
            return sol;
        }

        // Conventional MIMO: every antenna radiates the fixed feed pattern.
        // Modeled as the same instance with the pixel networks removed, so
        // the reported (empty) assignment and rate stay consistent.
        inline RateSolution conventional(const Instance &inst)
        {
            Instance fixed(strip_pixels(inst.model_t()), strip_pixels(inst.model_r()), inst.H_V(),
                           inst.N_T(), inst.N_R(), inst.power(), inst.sigma2());
            Evaluator ev(fixed);
            RateSolution sol;
            sol.assignment = to_assignment(BitVec{}, 0, inst.N_T(), inst.N_R());
            sol.covariance = ev.water_filled(BitVec{});
            sol.rate = sol.covariance.rate;
            sol.eval_count = ev.evaluations();
            return sol;
        }
    }

    inline RateSolution baseline_solve(const Instance &inst, BaselineScheme scheme,
                                       std::uint64_t seed = 0)
    {
        const detail::WallTimer timer;
        RateSolution sol;
        switch (scheme)
        {
        case BaselineScheme::conventional:
            sol = detail::conventional(inst);
            break;
        case BaselineScheme::best_single_off:
            sol = detail::best_single(inst, true);
            break;
        case BaselineScheme::best_single_on:
            sol = detail::best_single(inst, false);
            break;
        case BaselineScheme::random_single_off:
            sol = detail::random_single(inst, true, seed);
            break;
        case BaselineScheme::random_single_on:
            sol = detail::random_single(inst, false, seed);
            break;
        case BaselineScheme::all_off:
            sol = detail::constant_coder(inst, 1);
            break;
        case BaselineScheme::all_on:
            sol = detail::constant_coder(inst, 0);
            break;
        }
        sol.method = "baseline:" + baseline_name(scheme);
        sol.wall_time_s = timer.seconds();
        return sol;
    }

    inline RateSolution baseline_solve(const Instance &inst, const std::string &scheme,
                                       std::uint64_t seed = 0)
    {
        return baseline_solve(inst, parse_baseline(scheme), seed);
    }
}
