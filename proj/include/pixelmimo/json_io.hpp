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

#include <fstream>
#include <string>

#include <json.hpp>

#include "antenna_model.hpp"
#include "channel.hpp"
#include "errors.hpp"

// JSON artifacts: antenna models and virtual channels. Complex values are
// stored as [re, im] pairs at full double precision, so a write/read round
// trip reproduces every field exactly.

namespace pixelmimo
{
    namespace detail
    {
        using nlohmann::json;

        inline json to_json(arma::cx_double v)
        {
            return json::array({v.real(), v.imag()});
        }

        inline json to_json(const arma::cx_vec &v)
        {
            json out = json::array();
            for (arma::uword i = 0; i < v.n_elem; ++i)
                out.push_back(to_json(v(i)));
            return out;
        }

        inline json to_json(const arma::cx_mat &m) // row-major nesting
        {
            json out = json::array();
            for (arma::uword i = 0; i < m.n_rows; ++i)
            {
                json row = json::array();
                for (arma::uword j = 0; j < m.n_cols; ++j)
                    row.push_back(to_json(m(i, j)));
                out.push_back(row);
            }
            return out;
        }

        inline arma::cx_double complex_from_json(const json &j, const std::string &path)
        {
            if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
                throw ParseError(path + ": expected a [re, im] pair");
            return {j[0].get<double>(), j[1].get<double>()};
        }

        inline arma::cx_vec cx_vec_from_json(const json &j, arma::uword expected,
                                             const std::string &path)
        {
            if (!j.is_array())
                throw ParseError(path + ": expected an array");
            if (j.size() != expected)
                throw ParseError(path + ": expected length " + std::to_string(expected) +
                                 ", got " + std::to_string(j.size()));
            arma::cx_vec v(expected);
            for (arma::uword i = 0; i < expected; ++i)
                v(i) = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
            return v;
        }

        inline arma::cx_mat cx_mat_from_json(const json &j, arma::uword rows, arma::uword cols,
                                             const std::string &path)
        {
            if (!j.is_array())
                throw ParseError(path + ": expected an array");
            if (j.size() != rows)
                throw ParseError(path + ": expected " + std::to_string(rows) + " rows, got " +
                                 std::to_string(j.size()));
            arma::cx_mat m(rows, cols);
            for (arma::uword i = 0; i < rows; ++i)
            {
                const json &row = j[i];
                if (!row.is_array() || row.size() != cols)
                    throw ParseError(path + "[" + std::to_string(i) + "]: expected " +
                                     std::to_string(cols) + " columns");
                for (arma::uword c = 0; c < cols; ++c)
                    m(i, c) = complex_from_json(row[c], path + "[" + std::to_string(i) + "][" +
                                                            std::to_string(c) + "]");
            }
            return m;
        }

        inline const json &require_field(const json &j, const std::string &key)
        {
            auto it = j.find(key);
            if (it == j.end())
                throw ParseError("missing field '" + key + "'");
            return *it;
        }

        inline arma::uword uint_field(const json &j, const std::string &key)
        {
            const json &f = require_field(j, key);
            if (!f.is_number_unsigned() && !(f.is_number_integer() && f.get<long long>() >= 0))
                throw ParseError(key + ": expected a nonnegative integer");
            return f.get<arma::uword>();
        }

        inline double number_field(const json &j, const std::string &key)
        {
            const json &f = require_field(j, key);
            if (!f.is_number())
                throw ParseError(key + ": expected a number");
            return f.get<double>();
        }
    }

    inline nlohmann::json antenna_model_to_json(const AntennaModel &m)
    {
        nlohmann::json j;
        j["S"] = m.S;
        j["K"] = m.K;
        j["z_AA"] = detail::to_json(m.z_AA);
        j["z_AP"] = detail::to_json(m.z_AP);
        j["z_PA"] = detail::to_json(m.z_PA);
        j["Z_PP"] = detail::to_json(m.Z_PP);
        j["e_A"] = detail::to_json(m.e_A);
        j["E_P"] = detail::to_json(m.E_P);
        j["Z_on"] = detail::to_json(m.Z_on);
        j["Z_off"] = detail::to_json(m.Z_off);
        return j;
    }

    inline AntennaModel antenna_model_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw ParseError("antenna model: expected a JSON object");

        AntennaModel m;
        m.S = detail::uint_field(j, "S");
        m.K = detail::uint_field(j, "K");
        if (m.K < 1)
            throw ParseError("K: must be at least 1");
        m.z_AA = detail::complex_from_json(detail::require_field(j, "z_AA"), "z_AA");
        m.z_AP = detail::cx_vec_from_json(detail::require_field(j, "z_AP"), m.S, "z_AP");
        m.z_PA = detail::cx_vec_from_json(detail::require_field(j, "z_PA"), m.S, "z_PA");
        m.Z_PP = detail::cx_mat_from_json(detail::require_field(j, "Z_PP"), m.S, m.S, "Z_PP");
        m.e_A = detail::cx_vec_from_json(detail::require_field(j, "e_A"), 2 * m.K, "e_A");
        m.E_P = detail::cx_mat_from_json(detail::require_field(j, "E_P"), 2 * m.K, m.S, "E_P");

        if (j.contains("Z_on"))
        {
            m.Z_on = detail::complex_from_json(j["Z_on"], "Z_on");
            if (m.Z_on != arma::cx_double(0.0, 0.0))
                throw ParseError("Z_on: must be [0, 0]");
        }
        m.Z_off = j.contains("Z_off")
                      ? detail::complex_from_json(j["Z_off"], "Z_off")
                      : arma::cx_double(1e6, 0.0);

        try
        {
            validate_antenna_model(m);
        }
        catch (const std::invalid_argument &e)
        {
            throw ParseError(std::string("antenna model invariant violated: ") + e.what());
        }
        return m;
    }

    inline void write_antenna_model(const AntennaModel &m, const std::string &path)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << antenna_model_to_json(m).dump(2) << "\n";
    }

    inline AntennaModel read_antenna_model(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open antenna model file '" + path + "'");
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ParseError("antenna model '" + path + "': " + e.what());
        }
        return antenna_model_from_json(j);
    }

    inline nlohmann::json virtual_channel_to_json(const VirtualChannel &vc)
    {
        nlohmann::json j;
        j["K"] = vc.K;
        j["beta"] = vc.beta;
        j["H_V"] = detail::to_json(vc.H_V);
        j["seed"] = vc.seed;
        j["config"] = {{"beta0_db", vc.config.beta0_db},
                       {"d", vc.config.d},
                       {"d0", vc.config.d0},
                       {"alpha_bar", vc.config.alpha_bar}};
        return j;
    }

    inline VirtualChannel virtual_channel_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw ParseError("virtual channel: expected a JSON object");
        VirtualChannel vc;
        vc.K = detail::uint_field(j, "K");
        if (vc.K < 1)
            throw ParseError("K: must be at least 1");
        vc.beta = detail::number_field(j, "beta");
        vc.H_V = detail::cx_mat_from_json(detail::require_field(j, "H_V"), 2 * vc.K, 2 * vc.K, "H_V");
        vc.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0;
        if (j.contains("config"))
        {
            const nlohmann::json &c = j["config"];
            vc.config.beta0_db = detail::number_field(c, "beta0_db");
            vc.config.d = detail::number_field(c, "d");
            vc.config.d0 = detail::number_field(c, "d0");
            vc.config.alpha_bar = detail::number_field(c, "alpha_bar");
        }
        return vc;
    }

    inline void write_virtual_channel(const VirtualChannel &vc, const std::string &path)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        out << virtual_channel_to_json(vc).dump(2) << "\n";
    }

    inline VirtualChannel read_virtual_channel(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open virtual channel file '" + path + "'");
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ParseError("virtual channel '" + path + "': " + e.what());
        }
        return virtual_channel_from_json(j);
    }
}
