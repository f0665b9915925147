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

// End-to-end acceptance suite. Each criterion runs standalone, prints one
// PASS/FAIL line, and the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <pixelmimo/cli.hpp>
#include <pixelmimo/pixelmimo.hpp>

#include "../test_util.hpp"

using namespace pixelmimo;

namespace
{
    struct CheckFailure : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    void check(bool condition, const std::string &what)
    {
        if (!condition)
            throw CheckFailure(what);
    }

    std::string fmt(double v)
    {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    }

    // ---- criterion 1: safe branch-and-bound equals the subproblem oracle ----
    void criterion_exact_bnb()
    {
        auto run_batch = [](arma::uword S, int count, std::uint64_t seed_base) {
            for (int i = 0; i < count; ++i)
            {
                const Instance inst = testutil::make_instance(S, 2, 2, 8, seed_base + i);
                const arma::cx_mat q_iso = testutil::isotropic_covariance(inst);

                BnbConfig cfg;
                cfg.bound.t_leaf = 3;
                const double oracle = testutil::brute_force_best_rate_fixed_q(inst, q_iso);
                const double found = bnb_solve_coders(inst, q_iso, cfg).rate;
                check(std::abs(found - oracle) <= 1e-9,
                      "S=" + std::to_string(S) + " seed " + std::to_string(seed_base + i) +
                          ": bnb " + fmt(found) + " vs oracle " + fmt(oracle));

                if (S == 2 && i < 5)
                {
                    const arma::cx_mat q_wf = exhaustive_solve(inst).covariance.Q;
                    const double oracle_wf = testutil::brute_force_best_rate_fixed_q(inst, q_wf);
                    const double found_wf = bnb_solve_coders(inst, q_wf, cfg).rate;
                    check(std::abs(found_wf - oracle_wf) <= 1e-9,
                          "water-filled covariance: bnb " + fmt(found_wf) + " vs oracle " +
                              fmt(oracle_wf));
                }
            }
        };
        run_batch(2, 20, 1000);
        run_batch(3, 10, 2000);
    }

    // ---- criterion 2: water-filling optimality and KKT structure ----
    void criterion_water_filling()
    {
        Rng rng(0xACCE5501ULL);
        for (int trial = 0; trial < 200; ++trial)
        {
            const arma::uword n_r = 2 + rng.integer(3);
            const arma::uword n_t = 2 + rng.integer(3);
            const arma::cx_mat H = rng.cx_matrix(n_r, n_t);
            const double total_power = 0.5 + 2.5 * rng.uniform();
            const double sigma2 = 0.3 + rng.uniform();

            const EffectiveChannel ec = make_effective_channel(H);
            const WaterFillResult wf = water_fill(ec, total_power, sigma2);

            check(arma::trace(wf.Q).real() <= total_power + 1e-9, "trace exceeds budget");
            check(arma::abs(arma::cx_mat(wf.Q - wf.Q.t())).max() <= 1e-12, "Q not Hermitian");
            check(arma::eig_sym(arma::cx_mat(wf.Q)).min() >= -1e-10, "Q has a negative eigenvalue");
            check(std::abs(arma::accu(wf.powers) - total_power) <= 1e-9, "powers do not sum to P");
            for (arma::uword i = 0; i < ec.D; ++i)
            {
                const double floor_level = sigma2 / (ec.sv(i) * ec.sv(i));
                if (wf.powers(i) > 0.0)
                    check(std::abs(wf.powers(i) + floor_level - wf.water_level) <= 1e-9,
                          "active stream off the water level");
                else
                    check(wf.water_level <= floor_level + 1e-9, "inactive stream misclassified");
            }
            check(std::abs(wf.rate - rate(ec, wf.Q, sigma2)) <= 1e-9, "rate field inconsistent");

            const arma::cx_mat iso =
                (total_power / double(n_t)) * arma::eye<arma::cx_mat>(n_t, n_t);
            check(wf.rate + 1e-9 >= rate(ec, iso, sigma2), "isotropic covariance beat water-filling");

            for (int k = 0; k < 500; ++k)
            {
                arma::cx_mat A = rng.cx_matrix(n_t, n_t);
                arma::cx_mat Q = A * A.t();
                Q *= total_power / arma::trace(Q).real();
                if (rate(ec, Q, sigma2) > wf.rate + 1e-9)
                    throw CheckFailure("random trace-P covariance beat water-filling");
            }
        }
    }

    // ---- criterion 3: AO monotone convergence and oracle gap ----
    void criterion_ao_quality()
    {
        // Regression fixture: relative gap and hit-rate thresholds.
        constexpr double kGapThreshold = 0.02;
        constexpr int kRequiredHits = 18; // of 20 instances

        int hits = 0;
        for (int i = 0; i < 20; ++i)
        {
            const Instance inst = testutil::make_instance(2, 2, 2, 8, 3000 + i);
            const double optimum = exhaustive_solve(inst).rate;

            AoConfig cfg;
            cfg.restarts = 8;
            cfg.seed = 9000 + i;
            const RateSolution sol = ao_solve(inst, cfg);

            std::size_t restart_start = 0;
            for (std::size_t k = 0; k < sol.iterates.size(); ++k)
            {
                if (sol.iterates[k].iteration == 1)
                    restart_start = k;
                else
                    check(sol.iterates[k].rate >= sol.iterates[k - 1].rate - 1e-9,
                          "restart sequence decreased at step " + std::to_string(k - restart_start));
            }

            check(sol.rate <= optimum + 1e-9, "AO exceeded the exhaustive optimum");
            if (sol.rate >= (1.0 - kGapThreshold) * optimum)
                ++hits;
        }
        check(hits >= kRequiredHits, "only " + std::to_string(hits) +
                                         "/20 instances within 2% of the optimum");
    }

    // ---- criterion 4: mean-rate ordering across schemes ----
    void criterion_scheme_ordering()
    {
        const arma::uword trials = 100;
        const std::uint64_t master = 0x0F1A5ULL;
        const AntennaModel mt = synthesize_antenna_model(3, 8, antenna_seed(master, 3, false));
        const AntennaModel mr = synthesize_antenna_model(3, 8, antenna_seed(master, 3, true));
        const ChannelConfig cc;
        const double sigma2 = dbm_to_watts(-90.0);

        std::map<std::string, double> mean;
        auto tally = [&mean](const std::string &name, double r) { mean[name] += r; };

        for (arma::uword t = 0; t < trials; ++t)
        {
            const std::uint64_t chan_seed = trial_channel_seed(master, t);
            const VirtualChannel vc = sample_virtual_channel(8, cc, chan_seed);
            const double power = power_from_snr(0.0, sigma2, vc.beta);
            const Instance inst(mt, mr, vc.H_V, 2, 2, power, sigma2);

            tally("exhaustive", exhaustive_solve(inst).rate);

            BnbConfig bnb_cfg;
            bnb_cfg.bound.mode = BoundConfig::Mode::heuristic;
            tally("bnb", bnb_solve(inst, bnb_cfg).rate);

            AoConfig ao_cfg;
            ao_cfg.restarts = 8;
            ao_cfg.seed = solver_seed(chan_seed, "ao");
            tally("ao", ao_solve(inst, ao_cfg).rate);

            SeboConfig sebo_cfg;
            sebo_cfg.seed = solver_seed(chan_seed, "sebo");
            tally("sebo", sebo_solve(inst, sebo_cfg).rate);

            for (const char *name : {"conventional", "best-single-off", "best-single-on",
                                     "random-single-off", "random-single-on", "all-off", "all-on"})
                tally(std::string("baseline:") + name,
                      baseline_solve(inst, parse_baseline(name),
                                     solver_seed(chan_seed, std::string("baseline:") + name))
                          .rate);
        }
        for (auto &[name, sum] : mean)
            sum /= double(trials);

        const double top = mean.at("exhaustive");
        for (const auto &[name, value] : mean)
            check(top + 1e-9 >= value,
                  "mean ordering violated: exhaustive " + fmt(top) + " < " + name + " " + fmt(value));
        check(mean.at("baseline:best-single-off") + 1e-9 >= mean.at("baseline:random-single-off"),
              "best-single-off mean below random-single-off mean");
    }

    // ---- criterion 5: rate gain versus pixel count ----
    void criterion_pixel_gain()
    {
        ExperimentConfig cfg = default_experiment_config();
        cfg.K = 8;
        cfg.trials = 50;
        cfg.s_grid = {0, 1, 2, 3, 4};
        cfg.snr_db = 0.0;
        cfg.master_seed = 0x5EED5ULL;
        cfg.measure_time = false;
        cfg.solvers = {parse_solver_spec("exhaustive")};

        const std::vector<SweepResult> results = run_s_sweep(cfg);
        std::vector<double> means(5, 0.0);
        means[0] = mean_rate_of(results, 0.0, "baseline:conventional");
        for (arma::uword s = 1; s <= 4; ++s)
            means[s] = mean_rate_of(results, double(s), "exhaustive");

        check(means[4] > means[0],
              "exhaustive at S=4 (" + fmt(means[4]) + ") does not exceed conventional (" +
                  fmt(means[0]) + ")");

        int nondecreasing = 0;
        for (int s = 0; s < 4; ++s)
            if (means[s + 1] >= means[s] - 1e-9)
                ++nondecreasing;
        check(nondecreasing >= 3, "means " + fmt(means[0]) + "," + fmt(means[1]) + "," +
                                      fmt(means[2]) + "," + fmt(means[3]) + "," + fmt(means[4]) +
                                      " rise in only " + std::to_string(nondecreasing) + "/4 steps");
    }

    // ---- criterion 6: complexity counters ----
    void criterion_counters()
    {
        for (arma::uword s : {1u, 2u, 3u})
        {
            const Instance inst = testutil::make_instance(s, 2, 2, 8, 4000 + s);
            check(exhaustive_solve(inst).eval_count == (std::uint64_t(1) << (4 * s)),
                  "exhaustive count wrong at S=" + std::to_string(s));
        }

        double ao_sum_2 = 0.0, ao_sum_4 = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            const Instance inst2 = testutil::make_instance(2, 2, 2, 8, 5000 + i);
            const Instance inst4 = testutil::make_instance(4, 2, 2, 8, 5000 + i);
            AoConfig cfg;
            cfg.restarts = 8;
            cfg.seed = 100 + i;
            ao_sum_2 += double(ao_solve(inst2, cfg).eval_count);
            ao_sum_4 += double(ao_solve(inst4, cfg).eval_count);
        }
        const double ao_growth = ao_sum_4 / ao_sum_2;
        check(ao_growth < 4.0, "AO count grew by " + fmt(ao_growth) + "x from S=2 to S=4");

        for (int i = 0; i < 5; ++i)
        {
            const Instance inst2 = testutil::make_instance(2, 2, 2, 8, 5100 + i);
            const Instance inst4 = testutil::make_instance(4, 2, 2, 8, 5100 + i);
            const std::uint64_t e2 = exhaustive_solve(inst2).eval_count;
            const std::uint64_t e4 = exhaustive_solve(inst4).eval_count;
            check(e4 == e2 * 256, "exhaustive growth is not 2^(2(N_T+N_R))");
        }

        int warm_not_worse = 0;
        for (int i = 0; i < 20; ++i)
        {
            const Instance inst = testutil::make_instance(2, 2, 2, 8, 5200 + i);
            const arma::cx_mat q_iso = testutil::isotropic_covariance(inst);
            BnbConfig warm;
            warm.bound.t_leaf = 2;
            BnbConfig cold = warm;
            cold.warm_start = false;

            const RateSolution with_warm = bnb_solve_coders(inst, q_iso, warm);
            const RateSolution without = bnb_solve_coders(inst, q_iso, cold);
            check(std::abs(with_warm.rate - without.rate) <= 1e-9,
                  "warm start changed the safe-mode rate");
            check(with_warm.node_count <= (std::uint64_t(1) << (inst.bits() + 1)) - 1,
                  "node count exceeds the full tree");
            if (with_warm.node_count <= without.node_count)
                ++warm_not_worse;
        }
        check(warm_not_worse >= 16, "warm start reduced node counts on only " +
                                        std::to_string(warm_not_worse) + "/20 seeds");
    }

    // ---- criterion 7: model-layer numerics ----
    void criterion_model_numerics()
    {
        const AntennaModel m = synthesize_antenna_model(4, 8, 777);
        for (std::uint64_t idx = 0; idx < 16; ++idx)
        {
            const arma::uvec coder = coder_from_index(idx, 4);
            const RadiationPattern p = radiation_pattern(m, coder);
            check(std::abs(arma::norm(p.e_bar) - 1.0) <= 1e-12, "pattern not unit norm");

            const arma::cx_vec i_p = pixel_currents(m, coder, {1.0, 0.0});
            arma::cx_vec superposed = m.e_A;
            for (arma::uword s = 0; s < m.S; ++s)
                superposed += m.E_P.col(s) * i_p(s);
            check(arma::norm(p.e - superposed) <= 1e-12 * arma::norm(p.e),
                  "pattern disagrees with the current superposition");
        }

        AntennaModel ladder = synthesize_antenna_model(3, 8, 778);
        const arma::cx_vec reference = ladder.e_A / arma::norm(ladder.e_A);
        double previous = -1.0;
        for (double z : {1e6, 1e9, 1e12})
        {
            ladder.Z_off = arma::cx_double(z, 0.0);
            const double err =
                arma::norm(radiation_pattern(ladder, arma::uvec{1, 1, 1}).e_bar - reference);
            if (previous > 0.0)
                check(err / previous < 1e-2 && err / previous > 1e-4,
                      "open-circuit error shrank by " + fmt(err / previous) + " per 1000x step");
            previous = err;
        }

        const auto tmp = std::filesystem::temp_directory_path() / "pixelmimo_acceptance_model.json";
        write_antenna_model(m, tmp.string());
        const AntennaModel r = read_antenna_model(tmp.string());
        std::filesystem::remove(tmp);
        check(arma::norm(arma::cx_mat(r.Z_PP - m.Z_PP), "fro") == 0.0 &&
                  arma::norm(r.e_A - m.e_A) == 0.0 &&
                  arma::norm(arma::cx_mat(r.E_P - m.E_P), "fro") == 0.0 &&
                  arma::norm(r.z_PA - m.z_PA) == 0.0 && r.z_AA == m.z_AA,
              "JSON round trip not exact");
    }

    // ---- criterion 8: sweep determinism through the CLI ----
    void criterion_determinism()
    {
        const auto dir = std::filesystem::temp_directory_path() / "pixelmimo_acceptance_csv";
        std::filesystem::create_directories(dir);
        const std::string a = (dir / "a.csv").string();
        const std::string b = (dir / "b.csv").string();

        auto run = [](const std::string &out) {
            std::ostringstream sink; // keep the CLI summary out of this report
            std::streambuf *saved = std::cout.rdbuf(sink.rdbuf());
            const int status =
                cli_main({"sweep-snr", "--out", out, "--trials", "2", "--seed", "11", "--S", "2",
                          "--K", "4", "--snr-grid", "0,10", "--solvers",
                          "exhaustive,ao,baseline:all-on", "--no-timing"});
            std::cout.rdbuf(saved);
            return status;
        };
        check(run(a) == 0, "first sweep failed");
        check(run(b) == 0, "second sweep failed");

        auto slurp = [](const std::string &path) {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream os;
            os << in.rdbuf();
            return os.str();
        };
        const std::string first = slurp(a);
        check(!first.empty() && first == slurp(b), "CSV bytes differ between reruns");
        std::filesystem::remove_all(dir);
    }
}

int main()
{
    struct Criterion
    {
        const char *label;
        std::function<void()> run;
    };

    const std::vector<Criterion> criteria = {
        {"1 exact branch-and-bound on the fixed-covariance subproblem", criterion_exact_bnb},
        {"2 water-filling optimality and KKT structure", criterion_water_filling},
        {"3 AO monotone convergence within 2% of the optimum", criterion_ao_quality},
        {"4 mean-rate ordering across all schemes", criterion_scheme_ordering},
        {"5 rate gain versus pixel count", criterion_pixel_gain},
        {"6 complexity counters", criterion_counters},
        {"7 model-layer numerics", criterion_model_numerics},
        {"8 byte-identical sweep reruns", criterion_determinism},
    };

    int failures = 0;
    for (const Criterion &c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        try
        {
            c.run();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::printf("[PASS] criterion %s (%.1f s)\n", c.label, secs);
        }
        catch (const std::exception &e)
        {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::printf("[FAIL] criterion %s (%.1f s): %s\n", c.label, secs, e.what());
            ++failures;
        }
        std::fflush(stdout);
    }

    if (failures == 0)
        std::printf("RESULT: all %zu criteria passed\n", criteria.size());
    else
        std::printf("RESULT: %d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
