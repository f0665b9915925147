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

#include <string>

#include "ao.hpp"
#include "baselines.hpp"
#include "bnb.hpp"
#include "diving.hpp"
#include "exhaustive.hpp"
#include "sebo.hpp"

// Solver selection by string: exhaustive | bnb | ao | sebo | baseline:<name>.

namespace pixelmimo
{
    struct SolverSpec
    {
        std::string name = "exhaustive";
        ExhaustiveConfig exhaustive;
        BnbConfig bnb;
        AoConfig ao;
        SeboConfig sebo;
    };

    inline bool is_known_solver(const std::string &name)
    {
        if (name == "exhaustive" || name == "bnb" || name == "ao" || name == "sebo")
            return true;
        if (name.rfind("baseline:", 0) == 0)
        {
            try
            {
                parse_baseline(name.substr(9));
                return true;
            }
            catch (const UsageError &)
            {
                return false;
            }
        }
        return false;
    }

    inline SolverSpec parse_solver_spec(const std::string &name)
    {
        if (!is_known_solver(name))
            throw UsageError("unknown solver '" + name +
                             "' (expected exhaustive | bnb | ao | sebo | baseline:<name>)");
        SolverSpec spec;
        spec.name = name;
        return spec;
    }

    // Runs one solver on one instance; the seed drives any internal
    // randomness (AO restarts, SEBO bit flips, random baselines).
    inline RateSolution run_solver(const Instance &inst, const SolverSpec &spec, std::uint64_t seed)
    {
        RateSolution sol;
        if (spec.name == "exhaustive")
        {
            sol = exhaustive_solve(inst, spec.exhaustive);
        }
        else if (spec.name == "bnb")
        {
            sol = bnb_solve(inst, spec.bnb);
        }
        else if (spec.name == "ao")
        {
            AoConfig cfg = spec.ao;
            cfg.seed = seed;
            sol = ao_solve(inst, cfg);
        }
        else if (spec.name == "sebo")
        {
            SeboConfig cfg = spec.sebo;
            cfg.seed = seed;
            sol = sebo_solve(inst, cfg);
        }
        else if (spec.name.rfind("baseline:", 0) == 0)
        {
            sol = baseline_solve(inst, parse_baseline(spec.name.substr(9)), seed);
        }
        else
        {
            throw UsageError("unknown solver '" + spec.name + "'");
        }
        sol.method = spec.name;
        return sol;
    }
}
