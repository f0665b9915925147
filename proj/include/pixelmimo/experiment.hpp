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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "instance.hpp"
#include "json_io.hpp"
#include "solvers/dispatch.hpp"

// Experiment harness: SNR sweeps, pixel-count sweeps, and timing sweeps over
// seeded channel realizations, with per-trial CSV records. Each trial's
// channel seed is derived from the master seed alone, so every solver in a
// cell sees the same realization and any cell can be reproduced from its row.

namespace pixelmimo
{
    inline constexpr std::string_view kSweepCsvHeader =
        "grid_kind,grid_value,solver,trial,channel_seed,rate_bps_hz,wall_time_s,"
        "eval_count,node_count,converged";

    struct ExperimentConfig
    {
        arma::uword N_T = 2;
        arma::uword N_R = 2;
        arma::uword S = 3;
        arma::uword K = 8;
        ChannelConfig channel;
        double sigma2_dbm = -90.0;
        std::vector<double> snr_grid_db = {-10, -5, 0, 5, 10, 15, 20};
        std::vector<arma::uword> s_grid = {0, 1, 2, 3, 4};
        double snr_db = 0.0; // fixed SNR for pixel-count and timing sweeps
        arma::uword trials = 100;
        std::uint64_t master_seed = 1;
        bool measure_time = true;     // false writes wall_time_s as 0 for byte-stable CSV
        double cell_timeout_s = 0.0;  // > 0 marks over-budget timing cells as not converged
        std::vector<SolverSpec> solvers;
    };

    inline std::vector<SolverSpec> default_solver_list()
    {
        std::vector<SolverSpec> out;
        for (const char *name : {"exhaustive", "bnb", "ao", "sebo", "baseline:conventional",
                                 "baseline:best-single-off", "baseline:best-single-on",
                                 "baseline:random-single-off", "baseline:random-single-on",
                                 "baseline:all-off", "baseline:all-on"})
            out.push_back(parse_solver_spec(name));
        return out;
    }

    inline ExperimentConfig default_experiment_config()
    {
        ExperimentConfig cfg;
        cfg.solvers = default_solver_list();
        return cfg;
    }

    // Seed derivations shared by the sweeps and by cell reproduction.
    inline std::uint64_t trial_channel_seed(std::uint64_t master_seed, arma::uword trial)
    {
        return derive_seed(master_seed, {0xC4A17ULL, trial});
    }

    inline std::uint64_t antenna_seed(std::uint64_t master_seed, arma::uword S, bool receive_side)
    {
        return derive_seed(master_seed, {receive_side ? 0xA17ULL : 0xA07ULL, S});
    }

    inline std::uint64_t solver_seed(std::uint64_t channel_seed, const std::string &solver_name)
    {
        return derive_seed(channel_seed, {fnv1a(solver_name)});
    }

    inline double power_from_snr(double snr_db, double sigma2, double beta)
    {
        return db_to_linear(snr_db) * sigma2 / beta;
    }

    struct SweepRecord
    {
        std::string grid_kind; // "snr" | "s" | "time"
        double grid_value = 0.0;
        std::string solver;
        arma::uword trial = 0;
        std::uint64_t channel_seed = 0;
        double rate_bps_hz = 0.0; // NaN when the solver refused the cell
        double wall_time_s = 0.0;
        std::uint64_t eval_count = 0;
        std::uint64_t node_count = 0;
        bool converged = true;
    };

    struct SweepResult
    {
        std::string grid_kind;
        double grid_value = 0.0;
        std::string solver;
        double mean_rate = 0.0;
        double stderr_rate = 0.0;
        double mean_wall_time = 0.0;
        double mean_eval_count = 0.0;
        std::vector<SweepRecord> records; // one per trial
    };

    namespace detail
    {
        inline std::string format_double(double v)
        {
            if (std::isnan(v))
                return "nan";
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }

        inline void sort_records(std::vector<SweepRecord> &records)
        {
            std::sort(records.begin(), records.end(), [](const SweepRecord &a, const SweepRecord &b) {
                if (a.grid_value != b.grid_value)
                    return a.grid_value < b.grid_value;
                if (a.solver != b.solver)
                    return a.solver < b.solver;
                return a.trial < b.trial;
            });
        }

        inline std::vector<SweepResult> aggregate_records(std::vector<SweepRecord> records)
        {
            sort_records(records);
            std::vector<SweepResult> out;
            for (const SweepRecord &rec : records)
            {
                if (out.empty() || out.back().grid_value != rec.grid_value ||
                    out.back().solver != rec.solver)
                {
                    SweepResult r;
                    r.grid_kind = rec.grid_kind;
                    r.grid_value = rec.grid_value;
                    r.solver = rec.solver;
                    out.push_back(std::move(r));
                }
                out.back().records.push_back(rec);
            }
            for (SweepResult &r : out)
            {
                double sum = 0.0, sum_sq = 0.0, time_sum = 0.0, eval_sum = 0.0;
                arma::uword n = 0;
                for (const SweepRecord &rec : r.records)
                {
                    if (std::isnan(rec.rate_bps_hz))
                        continue;
                    sum += rec.rate_bps_hz;
                    sum_sq += rec.rate_bps_hz * rec.rate_bps_hz;
                    time_sum += rec.wall_time_s;
                    eval_sum += double(rec.eval_count);
                    ++n;
                }
                if (n == 0)
                {
                    r.mean_rate = std::numeric_limits<double>::quiet_NaN();
                    continue;
                }
                r.mean_rate = sum / double(n);
                r.mean_wall_time = time_sum / double(n);
                r.mean_eval_count = eval_sum / double(n);
                if (n > 1)
                {
                    const double var =
                        std::max(0.0, (sum_sq - sum * sum / double(n)) / double(n - 1));
                    r.stderr_rate = std::sqrt(var / double(n));
                }
            }
            return out;
        }

        inline void validate_experiment_config(const ExperimentConfig &cfg, bool needs_snr_grid,
                                               bool needs_s_grid)
        {
            if (cfg.trials < 1)
                throw std::invalid_argument("trials must be at least 1");
            if (cfg.solvers.empty())
                throw std::invalid_argument("solver list is empty");
            for (std::size_t i = 0; i < cfg.solvers.size(); ++i)
            {
                if (!is_known_solver(cfg.solvers[i].name))
                    throw UsageError("unknown solver '" + cfg.solvers[i].name + "'");
                for (std::size_t j = i + 1; j < cfg.solvers.size(); ++j)
                    if (cfg.solvers[i].name == cfg.solvers[j].name)
                        throw std::invalid_argument("duplicate solver '" + cfg.solvers[i].name + "'");
            }
            if (needs_snr_grid && cfg.snr_grid_db.empty())
                throw std::invalid_argument("snr_grid_db is empty");
            if (needs_s_grid && cfg.s_grid.empty())
                throw std::invalid_argument("s_grid is empty");
        }

        inline std::vector<SweepResult> run_sweep(const ExperimentConfig &cfg,
                                                  const std::string &kind)
        {
            const bool snr_sweep = kind == "snr";
            validate_experiment_config(cfg, snr_sweep, !snr_sweep);

            const double sigma2 = dbm_to_watts(cfg.sigma2_dbm);
            const double beta = path_gain(cfg.channel);

            std::vector<arma::uword> s_values = snr_sweep ? std::vector<arma::uword>{cfg.S}
                                                          : cfg.s_grid;
            std::map<arma::uword, std::pair<AntennaModel, AntennaModel>> models;
            for (arma::uword s : s_values)
                if (!models.count(s))
                    models.emplace(s, std::make_pair(
                                          synthesize_antenna_model(s, cfg.K,
                                                                   antenna_seed(cfg.master_seed, s, false)),
                                          synthesize_antenna_model(s, cfg.K,
                                                                   antenna_seed(cfg.master_seed, s, true))));

            const SolverSpec conventional_only = parse_solver_spec("baseline:conventional");
            std::vector<SweepRecord> records;

            for (arma::uword trial = 0; trial < cfg.trials; ++trial)
            {
                const std::uint64_t channel_seed = trial_channel_seed(cfg.master_seed, trial);
                const VirtualChannel vc = sample_virtual_channel(cfg.K, cfg.channel, channel_seed);

                const std::size_t n_points = snr_sweep ? cfg.snr_grid_db.size() : cfg.s_grid.size();
                for (std::size_t g = 0; g < n_points; ++g)
                {
                    const arma::uword s = snr_sweep ? cfg.S : cfg.s_grid[g];
                    const double snr_db = snr_sweep ? cfg.snr_grid_db[g] : cfg.snr_db;
                    const double grid_value = snr_sweep ? snr_db : double(s);
                    const double power = power_from_snr(snr_db, sigma2, beta);

                    const auto &pair = models.at(s);
                    const Instance inst(pair.first, pair.second, vc.H_V, cfg.N_T, cfg.N_R, power,
                                        sigma2);

                    // A pixel-free geometry leaves only the conventional scheme.
                    const std::vector<SolverSpec> &active =
                        s == 0 ? std::vector<SolverSpec>{conventional_only} : cfg.solvers;

                    for (const SolverSpec &spec : active)
                    {
                        SweepRecord rec;
                        rec.grid_kind = kind;
                        rec.grid_value = grid_value;
                        rec.solver = spec.name;
                        rec.trial = trial;
                        rec.channel_seed = channel_seed;
                        try
                        {
                            RateSolution sol =
                                run_solver(inst, spec, solver_seed(channel_seed, spec.name));
                            rec.rate_bps_hz = sol.rate;
                            rec.wall_time_s = cfg.measure_time ? sol.wall_time_s : 0.0;
                            rec.eval_count = sol.eval_count;
                            rec.node_count = sol.node_count;
                            rec.converged = sol.converged;
                            if (kind == "time" && cfg.cell_timeout_s > 0.0 &&
                                sol.wall_time_s > cfg.cell_timeout_s)
                                rec.converged = false;
                        }
                        catch (const CapExceededError &)
                        {
                            rec.rate_bps_hz = std::numeric_limits<double>::quiet_NaN();
                            rec.converged = false;
                        }
                        records.push_back(std::move(rec));
                    }
                }
            }
            return aggregate_records(std::move(records));
        }
    }

    // Achievable rate versus receive SNR on a fixed geometry.
    inline std::vector<SweepResult> run_snr_sweep(const ExperimentConfig &cfg)
    {
        return detail::run_sweep(cfg, "snr");
    }

    // Achievable rate versus pixel port count at fixed SNR; the S = 0 cell
    // carries the conventional reference.
    inline std::vector<SweepResult> run_s_sweep(const ExperimentConfig &cfg)
    {
        return detail::run_sweep(cfg, "s");
    }

    // Like the pixel-count sweep, but read for its wall times and counters.
    inline std::vector<SweepResult> run_timing_sweep(const ExperimentConfig &cfg)
    {
        return detail::run_sweep(cfg, "time");
    }

    inline double mean_rate_of(const std::vector<SweepResult> &results, double grid_value,
                               const std::string &solver)
    {
        for (const SweepResult &r : results)
            if (r.grid_value == grid_value && r.solver == solver)
                return r.mean_rate;
        throw std::invalid_argument("no sweep cell for solver '" + solver + "' at grid value " +
                                    detail::format_double(grid_value));
    }

    inline void write_sweep_csv(const std::vector<SweepResult> &results, std::ostream &out)
    {
        out << kSweepCsvHeader << "\n";
        for (const SweepResult &res : results)
            for (const SweepRecord &rec : res.records)
                out << rec.grid_kind << ',' << detail::format_double(rec.grid_value) << ','
                    << rec.solver << ',' << rec.trial << ',' << rec.channel_seed << ','
                    << detail::format_double(rec.rate_bps_hz) << ','
                    << detail::format_double(rec.wall_time_s) << ',' << rec.eval_count << ','
                    << rec.node_count << ',' << (rec.converged ? "true" : "false") << "\n";
    }

    inline void write_sweep_csv(const std::vector<SweepResult> &results, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_sweep_csv(results, out);
    }

    // --- configuration JSON ---------------------------------------------

    inline nlohmann::json solver_spec_to_json(const SolverSpec &spec)
    {
        nlohmann::json j;
        j["name"] = spec.name;
        if (spec.name == "exhaustive")
        {
            j["max_bits"] = spec.exhaustive.max_bits;
        }
        else if (spec.name == "bnb")
        {
            j["mode"] = spec.bnb.bound.mode == BoundConfig::Mode::safe ? "safe" : "heuristic";
            j["c1"] = spec.bnb.bound.c1;
            j["c2"] = spec.bnb.bound.c2;
            j["t_leaf"] = spec.bnb.bound.t_leaf;
            j["diving_pass_cap"] = spec.bnb.bound.diving_pass_cap;
            j["primal_period"] = spec.bnb.bound.primal_period;
            j["warm_start"] = spec.bnb.warm_start;
            j["node_budget"] = spec.bnb.node_budget;
            j["outer_max_iters"] = spec.bnb.outer_max_iters;
        }
        else if (spec.name == "ao")
        {
            j["restarts"] = spec.ao.restarts;
            j["max_iters"] = spec.ao.max_iters;
        }
        else if (spec.name == "sebo")
        {
            j["block_size"] = spec.sebo.block_size;
            j["bit_flips"] = spec.sebo.bit_flips;
        }
        return j;
    }

    inline SolverSpec solver_spec_from_json(const nlohmann::json &j)
    {
        if (j.is_string())
            return parse_solver_spec(j.get<std::string>());
        if (!j.is_object() || !j.contains("name"))
            throw ParseError("solvers[]: expected a name string or an object with 'name'");
        SolverSpec spec = parse_solver_spec(j["name"].get<std::string>());
        auto get_uint = [&j](const char *key, arma::uword fallback) {
            return j.contains(key) ? j[key].get<arma::uword>() : fallback;
        };
        if (spec.name == "exhaustive")
        {
            spec.exhaustive.max_bits = get_uint("max_bits", spec.exhaustive.max_bits);
        }
        else if (spec.name == "bnb")
        {
            if (j.contains("mode"))
            {
                const std::string mode = j["mode"].get<std::string>();
                if (mode == "safe")
                    spec.bnb.bound.mode = BoundConfig::Mode::safe;
                else if (mode == "heuristic")
                    spec.bnb.bound.mode = BoundConfig::Mode::heuristic;
                else
                    throw ParseError("bnb mode: expected 'safe' or 'heuristic'");
            }
            if (j.contains("c1"))
                spec.bnb.bound.c1 = j["c1"].get<double>();
            if (j.contains("c2"))
                spec.bnb.bound.c2 = j["c2"].get<double>();
            spec.bnb.bound.t_leaf = get_uint("t_leaf", spec.bnb.bound.t_leaf);
            spec.bnb.bound.diving_pass_cap =
                get_uint("diving_pass_cap", spec.bnb.bound.diving_pass_cap);
            spec.bnb.bound.primal_period = get_uint("primal_period", spec.bnb.bound.primal_period);
            if (j.contains("warm_start"))
                spec.bnb.warm_start = j["warm_start"].get<bool>();
            if (j.contains("node_budget"))
                spec.bnb.node_budget = j["node_budget"].get<std::uint64_t>();
            spec.bnb.outer_max_iters = get_uint("outer_max_iters", spec.bnb.outer_max_iters);
        }
        else if (spec.name == "ao")
        {
            spec.ao.restarts = get_uint("restarts", spec.ao.restarts);
            spec.ao.max_iters = get_uint("max_iters", spec.ao.max_iters);
        }
        else if (spec.name == "sebo")
        {
            spec.sebo.block_size = get_uint("block_size", spec.sebo.block_size);
            spec.sebo.bit_flips = get_uint("bit_flips", spec.sebo.bit_flips);
        }
        return spec;
    }

    inline nlohmann::json experiment_config_to_json(const ExperimentConfig &cfg)
    {
        nlohmann::json j;
        j["N_T"] = cfg.N_T;
        j["N_R"] = cfg.N_R;
        j["S"] = cfg.S;
        j["K"] = cfg.K;
        j["channel"] = {{"beta0_db", cfg.channel.beta0_db},
                        {"d", cfg.channel.d},
                        {"d0", cfg.channel.d0},
                        {"alpha_bar", cfg.channel.alpha_bar}};
        j["sigma2_dbm"] = cfg.sigma2_dbm;
        j["snr_grid_db"] = cfg.snr_grid_db;
        j["s_grid"] = cfg.s_grid;
        j["snr_db"] = cfg.snr_db;
        j["trials"] = cfg.trials;
        j["master_seed"] = cfg.master_seed;
        j["measure_time"] = cfg.measure_time;
        j["cell_timeout_s"] = cfg.cell_timeout_s;
        j["solvers"] = nlohmann::json::array();
        for (const SolverSpec &spec : cfg.solvers)
            j["solvers"].push_back(solver_spec_to_json(spec));
        return j;
    }

    inline ExperimentConfig experiment_config_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw ParseError("experiment config: expected a JSON object");
        ExperimentConfig cfg = default_experiment_config();
        auto get_uint = [&j](const char *key, arma::uword fallback) {
            return j.contains(key) ? j[key].get<arma::uword>() : fallback;
        };
        cfg.N_T = get_uint("N_T", cfg.N_T);
        cfg.N_R = get_uint("N_R", cfg.N_R);
        cfg.S = get_uint("S", cfg.S);
        cfg.K = get_uint("K", cfg.K);
        if (j.contains("channel"))
        {
            const nlohmann::json &c = j["channel"];
            cfg.channel.beta0_db = detail::number_field(c, "beta0_db");
            cfg.channel.d = detail::number_field(c, "d");
            cfg.channel.d0 = detail::number_field(c, "d0");
            cfg.channel.alpha_bar = detail::number_field(c, "alpha_bar");
        }
        if (j.contains("sigma2_dbm"))
            cfg.sigma2_dbm = j["sigma2_dbm"].get<double>();
        if (j.contains("snr_grid_db"))
            cfg.snr_grid_db = j["snr_grid_db"].get<std::vector<double>>();
        if (j.contains("s_grid"))
            cfg.s_grid = j["s_grid"].get<std::vector<arma::uword>>();
        if (j.contains("snr_db"))
            cfg.snr_db = j["snr_db"].get<double>();
        cfg.trials = get_uint("trials", cfg.trials);
        if (j.contains("master_seed"))
            cfg.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("measure_time"))
            cfg.measure_time = j["measure_time"].get<bool>();
        if (j.contains("cell_timeout_s"))
            cfg.cell_timeout_s = j["cell_timeout_s"].get<double>();
        if (j.contains("solvers"))
        {
            cfg.solvers.clear();
            for (const nlohmann::json &s : j["solvers"])
                cfg.solvers.push_back(solver_spec_from_json(s));
        }
        return cfg;
    }

    inline ExperimentConfig load_experiment_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file '" + path + "'");
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ParseError("config '" + path + "': " + e.what());
        }
        return experiment_config_from_json(j);
    }

    // Sidecar manifest: full config echo (master seed included) so any CSV
    // row can be traced back and re-run.
    inline void write_run_manifest(const ExperimentConfig &cfg, const std::string &kind,
                                   const std::string &path)
    {
        nlohmann::json j;
        j["sweep"] = kind;
        j["csv_header"] = std::string(kSweepCsvHeader);
        j["config"] = experiment_config_to_json(cfg);
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << j.dump(2) << "\n";
    }

    // --- solution JSON ----------------------------------------------------

    inline nlohmann::json assignment_to_json(const CoderAssignment &a)
    {
        auto mat_to_json = [](const arma::umat &m) {
            nlohmann::json rows = nlohmann::json::array();
            for (arma::uword i = 0; i < m.n_rows; ++i)
            {
                nlohmann::json row = nlohmann::json::array();
                for (arma::uword j = 0; j < m.n_cols; ++j)
                    row.push_back(m(i, j));
                rows.push_back(row);
            }
            return rows;
        };
        return {{"B_T", mat_to_json(a.B_T)}, {"B_R", mat_to_json(a.B_R)}};
    }

    inline nlohmann::json solution_to_json(const RateSolution &sol)
    {
        nlohmann::json j;
        j["method"] = sol.method;
        j["rate_bps_hz"] = sol.rate;
        j["wall_time_s"] = sol.wall_time_s;
        j["eval_count"] = sol.eval_count;
        j["node_count"] = sol.node_count;
        j["converged"] = sol.converged;
        j["assignment"] = assignment_to_json(sol.assignment);
        j["covariance"] = {{"Q", detail::to_json(sol.covariance.Q)},
                           {"powers", std::vector<double>(sol.covariance.powers.begin(),
                                                          sol.covariance.powers.end())},
                           {"water_level", sol.covariance.water_level},
                           {"rate", sol.covariance.rate}};
        return j;
    }

    inline void write_iterate_log(const RateSolution &sol, const std::string &path)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        for (const IterateRecord &it : sol.iterates)
        {
            nlohmann::json j = {{"iteration", it.iteration},
                                {"rate", it.rate},
                                {"bits_changed", it.bits_changed},
                                {"nodes_expanded", it.nodes_expanded}};
            out << j.dump() << "\n";
        }
    }
}
