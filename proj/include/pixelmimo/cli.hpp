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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "pixelmimo.hpp"

// Command line front end. Exit codes: 0 success, 1 usage error, 2 runtime
// error (bad file, schema violation, solver refusal).

namespace pixelmimo
{
    namespace cli_detail
    {
        struct SolveArgs
        {
            std::string antenna_path;
            std::string antenna_t_path;
            std::string antenna_r_path;
            std::string channel_path;
            arma::uword S = 3;
            arma::uword K = 8;
            std::uint64_t antenna_seed = 1;
            std::uint64_t channel_seed = 1;
            ChannelConfig channel;
            arma::uword n_t = 2;
            arma::uword n_r = 2;
            double snr_db = 0.0;
            double sigma2_dbm = -90.0;
        };

        inline Instance build_instance(const SolveArgs &a)
        {
            AntennaModel model_t, model_r;
            if (!a.antenna_t_path.empty() || !a.antenna_r_path.empty())
            {
                if (a.antenna_t_path.empty() || a.antenna_r_path.empty())
                    throw UsageError("--antenna-t and --antenna-r must be given together");
                model_t = read_antenna_model(a.antenna_t_path);
                model_r = read_antenna_model(a.antenna_r_path);
            }
            else if (!a.antenna_path.empty())
            {
                model_t = read_antenna_model(a.antenna_path);
                model_r = model_t;
            }
            else
            {
                model_t = synthesize_antenna_model(a.S, a.K, derive_seed(a.antenna_seed, {1}));
                model_r = synthesize_antenna_model(a.S, a.K, derive_seed(a.antenna_seed, {2}));
            }

            const VirtualChannel vc = a.channel_path.empty()
                                          ? sample_virtual_channel(model_t.K, a.channel, a.channel_seed)
                                          : read_virtual_channel(a.channel_path);

            const double sigma2 = dbm_to_watts(a.sigma2_dbm);
            const double power = power_from_snr(a.snr_db, sigma2, vc.beta);
            return Instance(model_t, model_r, vc.H_V, a.n_t, a.n_r, power, sigma2);
        }

        inline void add_channel_options(CLI::App *cmd, ChannelConfig &cfg)
        {
            cmd->add_option("--beta0-db", cfg.beta0_db, "channel power at the reference distance [dB]");
            cmd->add_option("--d", cfg.d, "link distance [m]");
            cmd->add_option("--d0", cfg.d0, "reference distance [m]");
            cmd->add_option("--alpha", cfg.alpha_bar, "path-loss exponent");
        }

        inline void print_sweep_summary(const std::vector<SweepResult> &results,
                                        const std::string &kind, std::ostream &out)
        {
            for (const SweepResult &r : results)
                out << kind << "=" << detail::format_double(r.grid_value) << " solver=" << r.solver
                    << " mean_rate=" << detail::format_double(r.mean_rate)
                    << " stderr=" << detail::format_double(r.stderr_rate)
                    << " mean_time_s=" << detail::format_double(r.mean_wall_time)
                    << " mean_evals=" << detail::format_double(r.mean_eval_count) << "\n";

            if (kind != "snr")
            {
                // Rate gain of the exhaustive scheme across the S grid.
                double lo_s = 0.0, hi_s = 0.0, lo = 0.0, hi = 0.0;
                bool have_lo = false, have_hi = false;
                for (const SweepResult &r : results)
                {
                    if (r.solver != "exhaustive" || r.grid_value < 1.0)
                        continue;
                    if (!have_lo || r.grid_value < lo_s)
                    {
                        lo_s = r.grid_value;
                        lo = r.mean_rate;
                        have_lo = true;
                    }
                    if (!have_hi || r.grid_value > hi_s)
                    {
                        hi_s = r.grid_value;
                        hi = r.mean_rate;
                        have_hi = true;
                    }
                }
                if (have_lo && have_hi && hi_s > lo_s)
                    out << "exhaustive gain (S=" << detail::format_double(hi_s) << " vs S="
                        << detail::format_double(lo_s) << "): "
                        << detail::format_double(hi - lo) << " bps/Hz\n";
            }
        }
    }

    inline int cli_main(int argc, const char *const *argv)
    {
        CLI::App app{"pixel-antenna MIMO capacity toolkit"};
        app.require_subcommand(1);

        // --- gen-antenna ---------------------------------------------------
        auto *gen_antenna = app.add_subcommand("gen-antenna", "synthesize an antenna model JSON");
        struct
        {
            arma::uword S = 3, K = 8;
            std::uint64_t seed = 1;
            double z_off_re = 1e6, z_off_im = 0.0;
            std::string out;
        } ga;
        gen_antenna->add_option("--S", ga.S, "pixel port count");
        gen_antenna->add_option("--K", ga.K, "sampled angle count");
        gen_antenna->add_option("--seed", ga.seed, "synthesis seed");
        gen_antenna->add_option("--z-off-re", ga.z_off_re, "real part of the off load [ohm]");
        gen_antenna->add_option("--z-off-im", ga.z_off_im, "imaginary part of the off load [ohm]");
        gen_antenna->add_option("--out", ga.out, "output path")->required();
        gen_antenna->callback([&ga]() {
            AntennaModel m = synthesize_antenna_model(ga.S, ga.K, ga.seed);
            m.Z_off = arma::cx_double(ga.z_off_re, ga.z_off_im);
            validate_antenna_model(m);
            write_antenna_model(m, ga.out);
        });

        // --- gen-channel -----------------------------------------------------
        auto *gen_channel = app.add_subcommand("gen-channel", "sample a virtual channel JSON");
        struct
        {
            arma::uword K = 8;
            std::uint64_t seed = 1;
            ChannelConfig channel;
            std::string out;
        } gc;
        gen_channel->add_option("--K", gc.K, "sampled angle count");
        gen_channel->add_option("--seed", gc.seed, "channel seed");
        cli_detail::add_channel_options(gen_channel, gc.channel);
        gen_channel->add_option("--out", gc.out, "output path")->required();
        gen_channel->callback([&gc]() {
            write_virtual_channel(sample_virtual_channel(gc.K, gc.channel, gc.seed), gc.out);
        });

        // --- solve -----------------------------------------------------------
        auto *solve = app.add_subcommand("solve", "run one solver on one instance");
        cli_detail::SolveArgs sa;
        struct
        {
            std::string method = "exhaustive";
            std::uint64_t solver_seed = 1;
            std::string out;
            std::string iterate_log;
            arma::uword ao_restarts = 8, ao_max_iters = 50;
            arma::uword sebo_block = 3, sebo_flips = 8;
            std::string bnb_mode = "safe";
            double bnb_c1 = 0.5, bnb_c2 = 0.5;
            arma::uword bnb_t_leaf = 10, bnb_outer_iters = 20;
            std::uint64_t bnb_node_budget = std::uint64_t(1) << 22;
            bool no_warm_start = false;
            arma::uword max_bits = 24;
        } so;
        solve->add_option("--antenna", sa.antenna_path, "antenna model JSON for both sides");
        solve->add_option("--antenna-t", sa.antenna_t_path, "transmit antenna model JSON");
        solve->add_option("--antenna-r", sa.antenna_r_path, "receive antenna model JSON");
        solve->add_option("--channel", sa.channel_path, "virtual channel JSON");
        solve->add_option("--S", sa.S, "pixel port count (synthesized instance)");
        solve->add_option("--K", sa.K, "sampled angle count (synthesized instance)");
        solve->add_option("--antenna-seed", sa.antenna_seed, "antenna synthesis seed");
        solve->add_option("--channel-seed", sa.channel_seed, "channel sampling seed");
        cli_detail::add_channel_options(solve, sa.channel);
        solve->add_option("--nt", sa.n_t, "transmit antenna count");
        solve->add_option("--nr", sa.n_r, "receive antenna count");
        solve->add_option("--snr-db", sa.snr_db, "receive SNR [dB]");
        solve->add_option("--sigma2-dbm", sa.sigma2_dbm, "noise power [dBm]");
        solve->add_option("--method", so.method,
                          "exhaustive | bnb | ao | sebo | baseline:<name>");
        solve->add_option("--solver-seed", so.solver_seed, "seed for solver-internal randomness");
        solve->add_option("--out", so.out, "write the solution JSON here instead of stdout");
        solve->add_option("--iterate-log", so.iterate_log, "write iterate records as JSON lines");
        solve->add_option("--ao-restarts", so.ao_restarts, "AO random restarts");
        solve->add_option("--ao-max-iters", so.ao_max_iters, "AO iteration cap per restart");
        solve->add_option("--sebo-block", so.sebo_block, "SEBO block size");
        solve->add_option("--sebo-flips", so.sebo_flips, "SEBO random bit flips");
        solve->add_option("--bnb-mode", so.bnb_mode, "bound mode: safe | heuristic");
        solve->add_option("--bnb-c1", so.bnb_c1, "bound constant c1 (heuristic mode)");
        solve->add_option("--bnb-c2", so.bnb_c2, "bound constant c2 (heuristic mode)");
        solve->add_option("--bnb-t-leaf", so.bnb_t_leaf, "exhaustive-completion threshold");
        solve->add_option("--bnb-outer-iters", so.bnb_outer_iters, "outer alternation cap");
        solve->add_option("--bnb-node-budget", so.bnb_node_budget, "search node budget");
        solve->add_flag("--no-warm-start", so.no_warm_start, "disable the diving warm start");
        solve->add_option("--max-bits", so.max_bits, "exhaustive enumeration cap (binary variables)");
        solve->callback([&sa, &so]() {
            SolverSpec spec = parse_solver_spec(so.method);
            spec.exhaustive.max_bits = so.max_bits;
            spec.ao.restarts = so.ao_restarts;
            spec.ao.max_iters = so.ao_max_iters;
            spec.sebo.block_size = so.sebo_block;
            spec.sebo.bit_flips = so.sebo_flips;
            if (so.bnb_mode == "safe")
                spec.bnb.bound.mode = BoundConfig::Mode::safe;
            else if (so.bnb_mode == "heuristic")
                spec.bnb.bound.mode = BoundConfig::Mode::heuristic;
            else
                throw UsageError("--bnb-mode must be 'safe' or 'heuristic'");
            spec.bnb.bound.c1 = so.bnb_c1;
            spec.bnb.bound.c2 = so.bnb_c2;
            spec.bnb.bound.t_leaf = so.bnb_t_leaf;
            spec.bnb.outer_max_iters = so.bnb_outer_iters;
            spec.bnb.node_budget = so.bnb_node_budget;
            spec.bnb.warm_start = !so.no_warm_start;

            const Instance inst = cli_detail::build_instance(sa);
            const RateSolution sol = run_solver(inst, spec, so.solver_seed);
            const nlohmann::json j = solution_to_json(sol);
            if (so.out.empty())
            {
                std::cout << j.dump(2) << "\n";
            }
            else
            {
                std::ofstream out(so.out);
                if (!out)
                    throw std::runtime_error("cannot open '" + so.out + "' for writing");
                out << j.dump(2) << "\n";
            }
            if (!so.iterate_log.empty())
                write_iterate_log(sol, so.iterate_log);
        });

        // --- sweeps ----------------------------------------------------------
        struct SweepArgs
        {
            std::string config_path;
            std::string out;
            arma::uword trials = 0;
            std::uint64_t seed = 0;
            std::vector<double> snr_grid;
            std::vector<arma::uword> s_grid;
            double snr_db = 0.0;
            std::vector<std::string> solvers;
            bool no_timing = false;
            double timeout_s = 0.0;
            arma::uword n_t = 0, n_r = 0, S = 0, K = 0;
            double sigma2_dbm = 0.0;
        };

        auto add_sweep = [&app](const std::string &name, const std::string &desc, SweepArgs &args) {
            auto *cmd = app.add_subcommand(name, desc);
            cmd->add_option("--config", args.config_path, "experiment config JSON");
            cmd->add_option("--out", args.out, "output CSV path")->required();
            cmd->add_option("--trials", args.trials, "channel realizations per cell");
            cmd->add_option("--seed", args.seed, "master seed");
            cmd->add_option("--snr-grid", args.snr_grid, "SNR grid [dB]")->delimiter(',');
            cmd->add_option("--s-grid", args.s_grid, "pixel port grid")->delimiter(',');
            cmd->add_option("--snr-db", args.snr_db, "fixed SNR for s/time sweeps [dB]");
            cmd->add_option("--solvers", args.solvers, "solver selection strings")->delimiter(',');
            cmd->add_option("--nt", args.n_t, "transmit antenna count");
            cmd->add_option("--nr", args.n_r, "receive antenna count");
            cmd->add_option("--S", args.S, "pixel port count (SNR sweep)");
            cmd->add_option("--K", args.K, "sampled angle count");
            cmd->add_option("--sigma2-dbm", args.sigma2_dbm, "noise power [dBm]");
            cmd->add_flag("--no-timing", args.no_timing, "write wall_time_s as 0 (byte-stable CSV)");
            cmd->add_option("--timeout-s", args.timeout_s, "per-cell timeout marker (time sweep)");
            return cmd;
        };

        auto run_sweep_command = [](const SweepArgs &args, CLI::App *cmd, const std::string &kind) {
            ExperimentConfig cfg = args.config_path.empty() ? default_experiment_config()
                                                            : load_experiment_config(args.config_path);
            if (cmd->count("--trials"))
                cfg.trials = args.trials;
            if (cmd->count("--seed"))
                cfg.master_seed = args.seed;
            if (cmd->count("--snr-grid"))
                cfg.snr_grid_db = args.snr_grid;
            if (cmd->count("--s-grid"))
                cfg.s_grid = args.s_grid;
            if (cmd->count("--snr-db"))
                cfg.snr_db = args.snr_db;
            if (cmd->count("--nt"))
                cfg.N_T = args.n_t;
            if (cmd->count("--nr"))
                cfg.N_R = args.n_r;
            if (cmd->count("--S"))
                cfg.S = args.S;
            if (cmd->count("--K"))
                cfg.K = args.K;
            if (cmd->count("--sigma2-dbm"))
                cfg.sigma2_dbm = args.sigma2_dbm;
            if (args.no_timing)
                cfg.measure_time = false;
            if (cmd->count("--timeout-s"))
                cfg.cell_timeout_s = args.timeout_s;
            if (cmd->count("--solvers"))
            {
                cfg.solvers.clear();
                for (const std::string &name : args.solvers)
                    cfg.solvers.push_back(parse_solver_spec(name));
            }

            std::vector<SweepResult> results;
            if (kind == "snr")
                results = run_snr_sweep(cfg);
            else if (kind == "s")
                results = run_s_sweep(cfg);
            else
                results = run_timing_sweep(cfg);

            write_sweep_csv(results, args.out);
            write_run_manifest(cfg, kind, args.out + ".meta.json");
            cli_detail::print_sweep_summary(results, kind, std::cout);
        };

        SweepArgs snr_args, s_args, time_args;
        auto *snr_cmd = add_sweep("sweep-snr", "achievable rate versus receive SNR", snr_args);
        auto *s_cmd = add_sweep("sweep-s", "achievable rate versus pixel port count", s_args);
        auto *time_cmd = add_sweep("sweep-time", "computation cost versus pixel port count", time_args);
        snr_cmd->callback([&]() { run_sweep_command(snr_args, snr_cmd, "snr"); });
        s_cmd->callback([&]() { run_sweep_command(s_args, s_cmd, "s"); });
        time_cmd->callback([&]() { run_sweep_command(time_args, time_cmd, "time"); });

        try
        {
            app.parse(argc, argv);
            return 0;
        }
        catch (const CLI::CallForHelp &e)
        {
            return app.exit(e);
        }
        catch (const CLI::CallForAllHelp &e)
        {
            return app.exit(e);
        }
        catch (const CLI::ParseError &e)
        {
            app.exit(e);
            return 1;
        }
        catch (const UsageError &e)
        {
            std::cerr << "usage error: " << e.what() << "\n";
            return 1;
        }
        catch (const std::exception &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    inline int cli_main(const std::vector<std::string> &args)
    {
        std::vector<std::string> full;
        full.reserve(args.size() + 1);
        full.push_back("pixelmimo");
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char *> argv;
        argv.reserve(full.size());
        for (const std::string &s : full)
            argv.push_back(s.c_str());
        return cli_main(int(argv.size()), argv.data());
    }
}
