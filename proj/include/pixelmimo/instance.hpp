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

#include <armadillo>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "antenna_model.hpp"
#include "channel.hpp"
#include "errors.hpp"

// One solvable problem instance (antenna models, virtual channel, power
// budget, noise power) plus the evaluation machinery shared by all solvers.

namespace pixelmimo
{
    // Rates within this distance count as a tie; ties resolve to the
    // lexicographically smaller decision vector / the earlier candidate.
    inline constexpr double kRateTieTol = 1e-12;

    // Local searches accept a flip only above this improvement.
    inline constexpr double kImproveTol = 1e-9;

    // Flattened decision vector: vec(B_T) column-major, then vec(B_R).
    using BitVec = std::vector<std::uint8_t>;

    inline std::uint32_t coder_index(const BitVec &bits, std::size_t offset, arma::uword s_bits)
    {
        std::uint32_t idx = 0;
        for (arma::uword s = 0; s < s_bits; ++s)
            idx |= std::uint32_t(bits[offset + s]) << s;
        return idx;
    }

    inline CoderAssignment to_assignment(const BitVec &bits, arma::uword S,
                                         arma::uword n_t, arma::uword n_r)
    {
        CoderAssignment a;
        a.B_T.set_size(S, n_t);
        a.B_R.set_size(S, n_r);
        for (arma::uword j = 0; j < n_t; ++j)
            for (arma::uword s = 0; s < S; ++s)
                a.B_T(s, j) = bits[S * j + s];
        for (arma::uword j = 0; j < n_r; ++j)
            for (arma::uword s = 0; s < S; ++s)
                a.B_R(s, j) = bits[S * n_t + S * j + s];
        return a;
    }

    inline BitVec flatten(const CoderAssignment &a)
    {
        const arma::uword S = a.B_T.n_rows;
        BitVec bits(S * (a.B_T.n_cols + a.B_R.n_cols), 0);
        for (arma::uword j = 0; j < a.B_T.n_cols; ++j)
            for (arma::uword s = 0; s < S; ++s)
                bits[S * j + s] = std::uint8_t(a.B_T(s, j) ? 1 : 0);
        for (arma::uword j = 0; j < a.B_R.n_cols; ++j)
            for (arma::uword s = 0; s < S; ++s)
                bits[S * a.B_T.n_cols + S * j + s] = std::uint8_t(a.B_R(s, j) ? 1 : 0);
        return bits;
    }

    inline arma::uword hamming_distance(const BitVec &a, const BitVec &b)
    {
        arma::uword d = 0;
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i)
            d += a[i] != b[i];
        return d + arma::uword(std::max(a.size(), b.size()) - n);
    }

    namespace detail
    {
        // Precomputed unit patterns for every coder of one antenna model.
        class PatternTable
        {
        public:
            void build(const AntennaModel &model)
            {
                if (model.S > kMaxCachedBits)
                    return;
                cache_.resize(std::size_t(1) << model.S);
                for (std::size_t idx = 0; idx < cache_.size(); ++idx)
                    cache_[idx] = radiation_pattern(model, coder_from_index(idx, model.S)).e_bar;
            }

            arma::cx_vec get(const AntennaModel &model, std::uint32_t idx) const
            {
                if (!cache_.empty())
                    return cache_[idx];
                return radiation_pattern(model, coder_from_index(idx, model.S)).e_bar;
            }

            static constexpr arma::uword kMaxCachedBits = 12;

        private:
            std::vector<arma::cx_vec> cache_;
        };
    }

    class Instance
    {
    public:
        Instance(AntennaModel model_t, AntennaModel model_r, arma::cx_mat h_v,
                 arma::uword n_t, arma::uword n_r, double total_power, double noise_power)
            : model_t_(std::move(model_t)), model_r_(std::move(model_r)), h_v_(std::move(h_v)),
              n_t_(n_t), n_r_(n_r), power_(total_power), sigma2_(noise_power)
        {
            if (n_t_ < 1 || n_r_ < 1)
                throw std::invalid_argument("antenna counts must be at least 1");
            if (!(power_ > 0.0))
                throw std::invalid_argument("total power must be positive");
            if (!(sigma2_ > 0.0))
                throw std::invalid_argument("noise power must be positive");
            if (model_t_.S != model_r_.S)
                throw DimensionError("transmit and receive models disagree on pixel port count");
            if (model_t_.K != model_r_.K)
                throw DimensionError("transmit and receive models disagree on K");
            if (h_v_.n_rows != 2 * model_t_.K || h_v_.n_cols != 2 * model_t_.K)
                throw DimensionError("H_V must be 2K x 2K");

            table_t_.build(model_t_);
            table_r_.build(model_r_);
            const double fro = arma::norm(h_v_, "fro");
            h_v_fro_sq_ = fro * fro;
        }

        const AntennaModel &model_t() const { return model_t_; }
        const AntennaModel &model_r() const { return model_r_; }
        const arma::cx_mat &H_V() const { return h_v_; }
        arma::uword N_T() const { return n_t_; }
        arma::uword N_R() const { return n_r_; }
        arma::uword S() const { return model_t_.S; }
        arma::uword K() const { return model_t_.K; }
        double power() const { return power_; }
        double sigma2() const { return sigma2_; }
        double h_v_frobenius_sq() const { return h_v_fro_sq_; }

        // Length of the flattened decision vector.
        arma::uword bits() const { return S() * (n_t_ + n_r_); }

        arma::cx_vec transmit_pattern(std::uint32_t idx) const { return table_t_.get(model_t_, idx); }
        arma::cx_vec receive_pattern(std::uint32_t idx) const { return table_r_.get(model_r_, idx); }

    private:
        AntennaModel model_t_;
        AntennaModel model_r_;
        arma::cx_mat h_v_;
        arma::uword n_t_;
        arma::uword n_r_;
        double power_;
        double sigma2_;
        double h_v_fro_sq_ = 0.0;
        detail::PatternTable table_t_;
        detail::PatternTable table_r_;
    };

    // Per-solver-run evaluation frontend. Counts every effective-channel
    // construction; not meant to be shared across threads.
    class Evaluator
    {
    public:
        explicit Evaluator(const Instance &inst) : inst_(inst) {}

        arma::cx_mat channel_matrix(const BitVec &bits)
        {
            ++evaluations_;
            const arma::uword S = inst_.S();
            const arma::uword dim = 2 * inst_.K();
            arma::cx_mat patterns_t(dim, inst_.N_T());
            arma::cx_mat patterns_r(dim, inst_.N_R());
            for (arma::uword j = 0; j < inst_.N_T(); ++j)
                patterns_t.col(j) = inst_.transmit_pattern(coder_index(bits, S * j, S));
            for (arma::uword j = 0; j < inst_.N_R(); ++j)
                patterns_r.col(j) = inst_.receive_pattern(coder_index(bits, S * (inst_.N_T() + j), S));
            const arma::cx_mat projected = inst_.H_V() * patterns_t;
            return patterns_r.t() * projected;
        }

        EffectiveChannel channel(const BitVec &bits)
        {
            return make_effective_channel(channel_matrix(bits));
        }

        WaterFillResult water_filled(const BitVec &bits)
        {
            return water_fill(channel(bits), inst_.power(), inst_.sigma2());
        }

        // Fixes the covariance for subsequent covariance_rate() calls.
        void set_covariance(const arma::cx_mat &Q)
        {
            q_sqrt_ = hermitian_sqrt(Q);
        }

        double covariance_rate(const BitVec &bits)
        {
            return detail::rate_from_sqrt(channel_matrix(bits), q_sqrt_, inst_.sigma2());
        }

        std::uint64_t evaluations() const { return evaluations_; }
        const Instance &instance() const { return inst_; }

    private:
        const Instance &inst_;
        arma::cx_mat q_sqrt_;
        std::uint64_t evaluations_ = 0;
    };
}
