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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "../instance.hpp"
#include "diving.hpp"
#include "solution.hpp"

// Branch-and-bound over the flattened coder vector for the fixed-covariance
// subproblem, plus the outer alternation with water-filling.
//
// Bounding is hierarchical: nodes with few free variables are closed by
// exhaustive completion (exact); all other nodes get a channel-power bound
// built from an ideal channel with min(N_T, N_R) equal eigenvalues carrying
// gamma(f) * N_R * N_T * ||H_V||_F^2 of total power. In safe mode gamma is
// pinned to 1, which makes the bound valid (unit-norm pattern columns give
// ||E||_2 <= sqrt(N)) and the returned solution exact; heuristic mode trades
// that guarantee for tighter bounds gamma(f) = c1 + c2 f.

namespace pixelmimo
{
    // Child bounds may exceed the parent's by at most this much (safe mode).
    inline constexpr double kBoundMonotoneTol = 1e-9;

    struct PseudocostTable
    {
        explicit PseudocostTable(arma::uword n_vars = 0)
            : sum0(n_vars, arma::fill::zeros), sum1(n_vars, arma::fill::zeros),
              count0(n_vars, arma::fill::zeros), count1(n_vars, arma::fill::zeros)
        {
        }

        // Bound degradations observed when branching variable n to 0 / 1.
        arma::vec sum0, sum1;
        arma::uvec count0, count1;

        void add(arma::uword n, int value, double degradation)
        {
            if (value)
            {
                sum1(n) += degradation;
                ++count1(n);
            }
            else
            {
                sum0(n) += degradation;
                ++count0(n);
            }
        }

        double mean0(arma::uword n) const { return count0(n) ? sum0(n) / double(count0(n)) : 0.0; }
        double mean1(arma::uword n) const { return count1(n) ? sum1(n) / double(count1(n)) : 0.0; }
        double score(arma::uword n) const { return mean0(n) + mean1(n); }
    };

    struct BoundConfig
    {
        enum class Mode
        {
            safe,     // gamma = 1, bound provably valid, search exact
            heuristic // gamma = c1 + c2 f, tighter but may prune the optimum
        };

        double c1 = 0.5;
        double c2 = 0.5;
        Mode mode = Mode::safe;
        arma::uword t_leaf = 10;          // free-variable count closed by exhaustive completion
        arma::uword diving_pass_cap = 20; // refinement pass cap inside the warm start
        arma::uword primal_period = 50;   // expanded nodes between primal heuristic runs
    };

    struct BnbNode
    {
        std::vector<std::uint8_t> fixed; // 1 = variable decided
        BitVec values;                   // meaningful where fixed
        double upper_bound = 0.0;
        arma::uword depth = 0;
        std::uint64_t seq = 0; // FIFO tie-break among equal bounds

        arma::uword free_count() const
        {
            arma::uword f = 0;
            for (auto b : fixed)
                f += b == 0;
            return f;
        }
    };

    struct BnbConfig
    {
        BoundConfig bound;
        bool warm_start = true;
        std::uint64_t node_budget = std::uint64_t(1) << 22;
        arma::uword outer_max_iters = 20; // alternation rounds between the two subproblems
        double outer_rel_tol = 1e-6;
    };

    // Optional instrumentation for replay / soundness checks.
    struct BnbTrace
    {
        struct PruneEvent
        {
            std::vector<std::uint8_t> fixed;
            BitVec values;
            double upper_bound = 0.0;
            double incumbent_rate = 0.0;
        };

        std::vector<arma::uword> branch_indices;
        std::vector<PruneEvent> pruned;
        PseudocostTable pseudocosts;
    };

    struct BoundResult
    {
        double value = 0.0; // upper bound on the subtree's best fixed-covariance rate
        bool exact = false; // true when value is the exact subtree optimum
        BitVec best;        // argmax completion when exact
    };

    // Upper bound of one node for the fixed-covariance subproblem. The
    // evaluator must already hold the covariance (set_covariance).
    inline BoundResult bnb_upper_bound(const BnbNode &node, Evaluator &ev, const BoundConfig &config)
    {
        const Instance &inst = ev.instance();
        const arma::uword n_bits = inst.bits();
        const arma::uword free = node.free_count();

        BoundResult out;
        if (free == 0)
        {
            out.best = node.values;
            out.value = ev.covariance_rate(out.best);
            out.exact = true;
            return out;
        }

        if (free <= config.t_leaf)
        {
            std::vector<std::size_t> free_idx;
            free_idx.reserve(free);
            for (std::size_t n = 0; n < node.fixed.size(); ++n)
                if (!node.fixed[n])
                    free_idx.push_back(n);

            BitVec bits = node.values;
            double best_rate = 0.0;
            bool have_best = false;
            const std::uint64_t total = std::uint64_t(1) << free;
            for (std::uint64_t code = 0; code < total; ++code)
            {
                for (arma::uword k = 0; k < free; ++k)
                    bits[free_idx[k]] = std::uint8_t((code >> (free - 1 - k)) & 1u);
                const double r = ev.covariance_rate(bits);
                if (!have_best || r > best_rate + kRateTieTol)
                {
                    have_best = true;
                    best_rate = r;
                    out.best = bits;
                }
            }
            out.value = best_rate;
            out.exact = true;
            return out;
        }

        const double f = double(free) / double(n_bits);
        const double gamma = config.mode == BoundConfig::Mode::safe ? 1.0 : config.c1 + config.c2 * f;
        const double w_adj = gamma * double(inst.N_R()) * double(inst.N_T()) * inst.h_v_frobenius_sq();
        const double t_star = double(std::min(inst.N_T(), inst.N_R()));
        const double lambda_ideal = w_adj / t_star;
        out.value = t_star * std::log2(1.0 + (inst.power() / t_star) * lambda_ideal / inst.sigma2());
        return out;
    }

    // Best-first branch-and-bound for the coder subproblem with the transmit
    // covariance held fixed. Safe mode returns the exact subproblem optimum;
    // heuristic mode returns a feasible lower bound.
    inline RateSolution bnb_solve_coders(const Instance &inst, const arma::cx_mat &q_fixed,
                                         const BnbConfig &config = {}, BnbTrace *trace = nullptr)
    {
        const detail::WallTimer timer;
        if (q_fixed.n_rows != inst.N_T())
            throw DimensionError("fixed covariance size does not match N_T");
        validate_covariance(q_fixed);
        if (arma::trace(q_fixed).real() > inst.power() * (1.0 + 1e-9) + 1e-15)
            throw InvalidCovarianceError("fixed covariance trace exceeds the power budget");

        Evaluator ev(inst);
        ev.set_covariance(q_fixed);
        const arma::uword n_bits = inst.bits();

        PseudocostTable pc(n_bits);
        BitVec incumbent_bits(n_bits, 0);
        double incumbent_rate = -std::numeric_limits<double>::infinity();
        bool have_incumbent = false;

        auto rate_of = [&ev](const BitVec &b) { return ev.covariance_rate(b); };
        auto offer_incumbent = [&](const BitVec &bits, double r) {
            if (!have_incumbent || r > incumbent_rate + kRateTieTol)
            {
                have_incumbent = true;
                incumbent_rate = r;
                incumbent_bits = bits;
                return true;
            }
            return false;
        };

        if (config.warm_start && n_bits > 0)
        {
            auto [bits, r] = detail::dive(n_bits, rate_of, config.bound.diving_pass_cap);
            offer_incumbent(bits, r);
        }

        std::uint64_t node_count = 0;
        std::uint64_t expanded = 0;
        std::uint64_t seq = 0;
        bool budget_ok = true;

        auto heap_less = [](const BnbNode &a, const BnbNode &b) {
            if (a.upper_bound != b.upper_bound)
                return a.upper_bound < b.upper_bound;
            return a.seq > b.seq;
        };
        std::vector<BnbNode> queue;

        auto record_prune = [&](const BnbNode &node) {
            if (trace)
                trace->pruned.push_back({node.fixed, node.values, node.upper_bound, incumbent_rate});
        };

        BnbNode root;
        root.fixed.assign(n_bits, 0);
        root.values.assign(n_bits, 0);
        root.seq = seq++;
        BoundResult root_bound = bnb_upper_bound(root, ev, config.bound);
        ++node_count;
        root.upper_bound = root_bound.value;
        if (root_bound.exact)
        {
            offer_incumbent(root_bound.best, root_bound.value);
        }
        else
        {
            queue.push_back(root);
        }

        while (!queue.empty())
        {
            std::pop_heap(queue.begin(), queue.end(), heap_less);
            BnbNode node = std::move(queue.back());
            queue.pop_back();

            if (have_incumbent && node.upper_bound <= incumbent_rate + kRateTieTol)
            {
                // Best-first order: everything left is dominated too.
                record_prune(node);
                for (const BnbNode &rest : queue)
                    record_prune(rest);
                queue.clear();
                break;
            }

            if (node_count + 2 > config.node_budget)
            {
                budget_ok = false;
                break;
            }
            ++expanded;

            // Branch on the variable with the largest learned degradation;
            // cold or tied pseudocosts fall back to the lowest free index.
            arma::uword branch = n_bits;
            double best_score = -1.0;
            for (arma::uword n = 0; n < n_bits; ++n)
            {
                if (node.fixed[n])
                    continue;
                const double s = pc.score(n);
                if (s > best_score)
                {
                    best_score = s;
                    branch = n;
                }
            }
            if (trace)
                trace->branch_indices.push_back(branch);

            for (int value = 0; value <= 1; ++value)
            {
                BnbNode child;
                child.fixed = node.fixed;
                child.values = node.values;
                child.fixed[branch] = 1;
                child.values[branch] = std::uint8_t(value);
                child.depth = node.depth + 1;
                child.seq = seq++;

                BoundResult cb = bnb_upper_bound(child, ev, config.bound);
                ++node_count;
                pc.add(branch, value, std::max(0.0, node.upper_bound - cb.value));

                if (config.bound.mode == BoundConfig::Mode::safe &&
                    cb.value > node.upper_bound + kBoundMonotoneTol)
                    throw std::logic_error("branch-and-bound: child bound exceeds parent bound in safe mode");

                if (cb.exact)
                {
                    offer_incumbent(cb.best, cb.value);
                }
                else
                {
                    child.upper_bound = cb.value;
                    if (!have_incumbent || cb.value > incumbent_rate + kRateTieTol)
                    {
                        queue.push_back(std::move(child));
                        std::push_heap(queue.begin(), queue.end(), heap_less);
                    }
                    else
                    {
                        record_prune(child);
                    }
                }
            }

            if (config.bound.primal_period > 0 && have_incumbent &&
                expanded % config.bound.primal_period == 0)
            {
                BitVec probe = incumbent_bits;
                double probe_rate = incumbent_rate;
                detail::refine_bits(probe, probe_rate, rate_of,
                                    std::max<arma::uword>(config.bound.diving_pass_cap, 1));
                if (offer_incumbent(probe, probe_rate))
                {
                    // Dynamic pruning: rescan the whole queue against the
                    // improved incumbent.
                    std::vector<BnbNode> kept;
                    kept.reserve(queue.size());
                    for (BnbNode &q : queue)
                    {
                        if (q.upper_bound <= incumbent_rate + kRateTieTol)
                            record_prune(q);
                        else
                            kept.push_back(std::move(q));
                    }
                    queue = std::move(kept);
                    std::make_heap(queue.begin(), queue.end(), heap_less);
                }
            }
        }

        if (!have_incumbent) // budget hit before any feasible point was seen
            offer_incumbent(incumbent_bits, ev.covariance_rate(incumbent_bits));

        RateSolution sol;
        sol.assignment = to_assignment(incumbent_bits, inst.S(), inst.N_T(), inst.N_R());
        sol.covariance.Q = q_fixed;
        sol.covariance.rate = incumbent_rate;
        sol.rate = incumbent_rate;
        sol.method = "bnb-coders";
        sol.eval_count = ev.evaluations();
        sol.node_count = node_count;
        sol.converged = budget_ok;
        sol.wall_time_s = timer.seconds();
        if (trace)
            trace->pseudocosts = pc;
        return sol;
    }

    // Full solver: alternate the closed-form covariance update and the coder
    // branch-and-bound from an isotropic start until the rate improvement
    // stalls. The recorded outer rate sequence is nondecreasing.
    inline RateSolution bnb_solve(const Instance &inst, const BnbConfig &config = {})
    {
        const detail::WallTimer timer;
        Evaluator ev(inst);

        arma::cx_mat q = (inst.power() / double(inst.N_T())) *
                         arma::cx_mat(arma::eye<arma::mat>(inst.N_T(), inst.N_T()),
                                      arma::zeros<arma::mat>(inst.N_T(), inst.N_T()));

        BitVec best_bits(inst.bits(), 0);
        BitVec prev_bits(inst.bits(), 0);
        WaterFillResult best_wf;
        double best_rate = -std::numeric_limits<double>::infinity();
        bool converged = false;
        bool budget_ok = true;
        std::uint64_t inner_evals = 0;
        std::uint64_t nodes_total = 0;
        std::vector<IterateRecord> iterates;

        for (arma::uword k = 1; k <= config.outer_max_iters; ++k)
        {
            RateSolution inner = bnb_solve_coders(inst, q, config);
            inner_evals += inner.eval_count;
            nodes_total += inner.node_count;
            budget_ok = budget_ok && inner.converged;

            BitVec bits = flatten(inner.assignment);
            WaterFillResult wf = ev.water_filled(bits);

            if (wf.rate < best_rate - kRateTieTol)
            {
                // Heuristic bounds can send the alternation downhill; keep
                // the best iterate and stop.
                converged = true;
                break;
            }

            iterates.push_back({k, wf.rate, hamming_distance(bits, prev_bits), inner.node_count});
            const double prev_rate = best_rate;
            best_rate = wf.rate;
            best_bits = bits;
            best_wf = wf;
            prev_bits = std::move(bits);
            q = best_wf.Q;

            if (std::isfinite(prev_rate) &&
                best_rate - prev_rate <= config.outer_rel_tol * std::max(prev_rate, 1e-12))
            {
                converged = true;
                break;
            }
        }

        RateSolution sol;
        sol.assignment = to_assignment(best_bits, inst.S(), inst.N_T(), inst.N_R());
        sol.covariance = std::move(best_wf);
        sol.rate = best_rate;
        sol.method = "bnb";
        sol.eval_count = ev.evaluations() + inner_evals;
        sol.node_count = nodes_total;
        sol.converged = converged && budget_ok;
        sol.wall_time_s = timer.seconds();
        sol.iterates = std::move(iterates);
        return sol;
    }
}
