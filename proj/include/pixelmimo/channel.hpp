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
#include <cmath>
#include <cstdint>
#include <string>

#include "antenna_model.hpp"
#include "errors.hpp"
#include "random.hpp"

// Virtual and effective MIMO channels, the log-det achievable rate, and
// water-filling over the effective channel's eigenmodes.

namespace pixelmimo
{
    // Singular values below kRankRelTol * sigma_max are treated as rank loss.
    inline constexpr double kRankRelTol = 1e-10;

    // Covariance eigenvalues above -kPsdTolFactor * tr(Q) are round-off.
    inline constexpr double kPsdTolFactor = 1e-8;

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double v) { return 10.0 * std::log10(v); }
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    struct ChannelConfig
    {
        double beta0_db = -30.0;  // channel power at the reference distance [dB]
        double d = 600.0;         // link distance [m]
        double d0 = 1.0;          // reference distance [m]
        double alpha_bar = 3.5;   // path-loss exponent
    };

    // beta = beta0 * (d/d0)^(-alpha_bar), linear power per channel entry
    inline double path_gain(const ChannelConfig &c)
    {
        if (!(c.d > 0.0) || !(c.d0 > 0.0))
            throw std::invalid_argument("channel distances must be positive");
        return db_to_linear(c.beta0_db) * std::pow(c.d / c.d0, -c.alpha_bar);
    }

    struct VirtualChannel
    {
        arma::cx_mat H_V;     // 2K x 2K, propagation between sampled angle-polarization pairs
        double beta = 0.0;    // per-entry variance
        ChannelConfig config;
        arma::uword K = 1;
        std::uint64_t seed = 0;
    };

    // Entries i.i.d. CN(0, beta); deterministic in the seed.
    inline VirtualChannel sample_virtual_channel(arma::uword K, const ChannelConfig &config,
                                                 std::uint64_t seed)
    {
        if (K < 1)
            throw std::invalid_argument("K must be at least 1");
        VirtualChannel vc;
        vc.K = K;
        vc.config = config;
        vc.seed = seed;
        vc.beta = path_gain(config);
        Rng rng(seed);
        vc.H_V = rng.cx_matrix(2 * K, 2 * K, vc.beta);
        return vc;
    }

    struct CoderAssignment
    {
        arma::umat B_T; // S x N_T, binary
        arma::umat B_R; // S x N_R, binary
    };

    // Columns are the unit-power patterns of the per-antenna coders.
    inline arma::cx_mat pattern_matrix(const AntennaModel &model, const arma::umat &coders)
    {
        if (coders.n_cols < 1)
            throw DimensionError("coder matrix needs at least one column");
        if (coders.n_rows != model.S)
            throw DimensionError("coder matrix has " + std::to_string(coders.n_rows) +
                                 " rows, model has " + std::to_string(model.S) + " pixel ports");

        arma::cx_mat patterns(2 * model.K, coders.n_cols);
        for (arma::uword j = 0; j < coders.n_cols; ++j)
        {
            try
            {
                patterns.col(j) = radiation_pattern(model, arma::uvec(coders.col(j))).e_bar;
            }
            catch (const DegeneratePatternError &e)
            {
                throw DegeneratePatternError(std::string(e.what()) + " (pattern matrix column " +
                                             std::to_string(j) + ")");
            }
        }
        return patterns;
    }

    struct EffectiveChannel
    {
        arma::cx_mat H;      // N_R x N_T
        arma::vec sv;        // singular values, descending, length D
        arma::cx_mat U;      // N_R x D, left singular vectors
        arma::cx_mat V;      // N_T x D, right singular vectors
        arma::uword D = 0;   // effective rank
    };

    // Attaches the truncated SVD to a raw channel matrix.
    inline EffectiveChannel make_effective_channel(arma::cx_mat H)
    {
        EffectiveChannel ec;
        ec.H = std::move(H);
        ec.U.set_size(ec.H.n_rows, 0);
        ec.V.set_size(ec.H.n_cols, 0);
        if (ec.H.n_elem == 0 || arma::norm(ec.H, "fro") == 0.0)
            return ec;

        arma::cx_mat U, V;
        arma::vec s;
        if (!arma::svd(U, s, V, ec.H))
            throw std::runtime_error("SVD of the effective channel failed");

        const double cutoff = kRankRelTol * s(0);
        arma::uword d = 0;
        while (d < s.n_elem && s(d) >= cutoff && s(d) > 0.0)
            ++d;
        ec.D = d;
        if (d > 0)
        {
            ec.sv = s.head(d);
            ec.U = U.cols(0, d - 1);
            ec.V = V.cols(0, d - 1);
        }
        return ec;
    }

    // H = E_R^H H_V E_T for one coder assignment.
    inline EffectiveChannel effective_channel(const AntennaModel &model_t, const AntennaModel &model_r,
                                              const arma::cx_mat &H_V, const CoderAssignment &assignment)
    {
        if (model_t.K != model_r.K)
            throw DimensionError("transmit and receive models sample different K");
        const arma::uword dim = 2 * model_t.K;
        if (H_V.n_rows != dim)
            throw DimensionError("H_V rows != 2K");
        if (H_V.n_cols != dim)
            throw DimensionError("H_V cols != 2K");
        if (assignment.B_T.n_rows != model_t.S)
            throw DimensionError("B_T rows != transmit pixel port count");
        if (assignment.B_R.n_rows != model_r.S)
            throw DimensionError("B_R rows != receive pixel port count");

        const arma::cx_mat patterns_t = pattern_matrix(model_t, assignment.B_T);
        const arma::cx_mat patterns_r = pattern_matrix(model_r, assignment.B_R);
        const arma::cx_mat projected = H_V * patterns_t;
        return make_effective_channel(patterns_r.t() * projected);
    }

    namespace detail
    {
        // log2 det(I + H Q H^H / sigma2) given Q^{1/2}; eigenvalue route,
        // result is real and nonnegative by construction.
        inline double rate_from_sqrt(const arma::cx_mat &H, const arma::cx_mat &q_sqrt, double sigma2)
        {
            if (H.n_elem == 0)
                return 0.0;
            const arma::cx_mat shaped = H * q_sqrt;
            arma::vec mu;
            if (!arma::eig_sym(mu, arma::cx_mat(shaped * shaped.t())))
                throw std::runtime_error("eigendecomposition failed in rate evaluation");
            const double inv_ln2 = 1.0 / std::log(2.0);
            double r = 0.0;
            for (double v : mu)
                if (v > 0.0)
                    r += std::log1p(v / sigma2) * inv_ln2;
            return r < 1e-15 ? 0.0 : r;
        }
    }

    // Hermitian PSD square root with negative round-off eigenvalues clamped.
    inline arma::cx_mat hermitian_sqrt(const arma::cx_mat &Q)
    {
        if (Q.n_elem == 0)
            return Q;
        arma::vec w;
        arma::cx_mat basis;
        if (!arma::eig_sym(w, basis, arma::cx_mat(0.5 * (Q + Q.t()))))
            throw std::runtime_error("eigendecomposition of covariance failed");
        for (double &v : w)
            v = v > 0.0 ? std::sqrt(v) : 0.0;
        return basis * arma::diagmat(arma::conv_to<arma::cx_vec>::from(w)) * basis.t();
    }

    inline void validate_covariance(const arma::cx_mat &Q)
    {
        if (!Q.is_square())
            throw InvalidCovarianceError("covariance must be square");
        if (Q.n_elem == 0)
            return;
        const double scale = std::max(1.0, arma::abs(Q).max());
        if (arma::abs(arma::cx_mat(Q - Q.t())).max() > 1e-10 * scale)
            throw InvalidCovarianceError("covariance is not Hermitian");
        const arma::vec w = arma::eig_sym(arma::cx_mat(0.5 * (Q + Q.t())));
        const double tr = arma::trace(arma::cx_mat(Q)).real();
        if (w.min() < -kPsdTolFactor * std::max(tr, 0.0))
            throw InvalidCovarianceError("covariance is not positive semidefinite (min eigenvalue " +
                                         std::to_string(w.min()) + ")");
    }

    // R = log2 det(I + H Q H^H / sigma2)  [bits/s/Hz]
    inline double rate(const arma::cx_mat &H, const arma::cx_mat &Q, double sigma2)
    {
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("sigma2 must be positive");
        if (Q.n_rows != H.n_cols)
            throw DimensionError("covariance size does not match channel columns");
        validate_covariance(Q);
        return detail::rate_from_sqrt(H, hermitian_sqrt(Q), sigma2);
    }

    inline double rate(const EffectiveChannel &ec, const arma::cx_mat &Q, double sigma2)
    {
        return rate(ec.H, Q, sigma2);
    }

    struct WaterFillResult
    {
        arma::cx_mat Q;           // N_T x N_T transmit covariance
        arma::vec powers;         // per-subchannel powers, length D (zeros where inactive)
        double water_level = 0.0; // nu
        double rate = 0.0;        // bits/s/Hz
    };

    // Exact active-set water-filling over the channel's eigenmodes:
    // p_i = max{nu - sigma2/lambda_i^2, 0} with sum p_i = P.
    inline WaterFillResult water_fill(const EffectiveChannel &ec, double total_power, double sigma2)
    {
        if (!(total_power > 0.0))
            throw std::invalid_argument("total power must be positive");
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("sigma2 must be positive");

        WaterFillResult out;
        out.Q.zeros(ec.H.n_cols, ec.H.n_cols);
        if (ec.D == 0)
            return out;

        const arma::vec floor_level = sigma2 / arma::square(ec.sv); // sigma2 / lambda_i^2, ascending
        arma::uword active = 0;
        double nu = 0.0;
        for (arma::uword m = ec.D; m >= 1; --m)
        {
            const double candidate = (total_power + arma::accu(floor_level.head(m))) / double(m);
            if (candidate > floor_level(m - 1))
            {
                active = m;
                nu = candidate;
                break;
            }
        }
        // active >= 1: the strongest mode always accepts since P > 0

        out.powers.zeros(ec.D);
        double r = 0.0;
        for (arma::uword i = 0; i < active; ++i)
        {
            out.powers(i) = nu - floor_level(i);
            r += std::log2(nu / floor_level(i));
        }
        out.water_level = nu;
        out.rate = r;

        const arma::cx_mat v_active = ec.V.cols(0, active - 1);
        const arma::cx_vec p_active =
            arma::conv_to<arma::cx_vec>::from(arma::vec(out.powers.head(active)));
        arma::cx_mat q = v_active * arma::diagmat(p_active) * v_active.t();
        out.Q = 0.5 * (q + q.t()); // strip round-off asymmetry
        return out;
    }

    inline WaterFillResult water_fill(const arma::cx_mat &H, double total_power, double sigma2)
    {
        return water_fill(make_effective_channel(H), total_power, sigma2);
    }
}
