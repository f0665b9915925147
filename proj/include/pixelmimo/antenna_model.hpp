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
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "random.hpp"

// Multi-port network model of a single pixel antenna: one feed port plus S
// pixel ports, each pixel port terminated by an RF switch that is either a
// short ("on", b_s = 0) or a large open-circuit load ("off", b_s = 1).

namespace pixelmimo
{
    // Condition limit for the loaded pixel network; cond > 1/kRcondFloor
    // is treated as singular.
    inline constexpr double kRcondFloor = 1e-12;

    // ||e(b)|| below this fraction of ||e_A|| counts as a collapsed pattern.
    inline constexpr double kDegeneratePatternTol = 1e-14;

    // Required separation between |Z_off| and the largest |Z_PP| entry.
    inline constexpr double kOffLoadSeparation = 1e5;

    struct AntennaModel
    {
        arma::uword S = 0; // number of pixel ports (switches)
        arma::uword K = 1; // number of sampled spatial angles

        arma::cx_double z_AA{0.0, 0.0}; // feed-port self-impedance [ohm]
        arma::cx_vec z_AP;              // feed-to-pixel trans-impedances, length S
        arma::cx_vec z_PA;              // pixel-to-feed trans-impedances, length S
        arma::cx_mat Z_PP;              // pixel-port impedance matrix, S x S, symmetric

        arma::cx_vec e_A; // feed-port fundamental pattern, length 2K (K angles x 2 polarizations)
        arma::cx_mat E_P; // pixel-port fundamental patterns, 2K x S

        arma::cx_double Z_on{0.0, 0.0};   // "on" load (short)
        arma::cx_double Z_off{1e6, 0.0};  // "off" load (large finite open)
    };

    struct RadiationPattern
    {
        arma::cx_vec e;     // unnormalized pattern, length 2K
        arma::cx_vec e_bar; // unit-power pattern, e / ||e||
    };

    inline std::string coder_to_string(const arma::uvec &coder)
    {
        std::ostringstream os;
        os << "[";
        for (arma::uword s = 0; s < coder.n_elem; ++s)
            os << (s ? " " : "") << coder(s);
        os << "]";
        return os.str();
    }

    inline void check_coder(const AntennaModel &model, const arma::uvec &coder)
    {
        if (coder.n_elem != model.S)
            throw DimensionError("coder length " + std::to_string(coder.n_elem) +
                                 " does not match pixel port count " + std::to_string(model.S));
        for (arma::uword s = 0; s < coder.n_elem; ++s)
            if (coder(s) > 1)
                throw std::invalid_argument("coder entry " + std::to_string(s) + " is not binary");
    }

    // Z_L(b) = diag{(1 - b_s) Z_on + b_s Z_off}
    inline arma::cx_mat load_impedance(const AntennaModel &model, const arma::uvec &coder)
    {
        check_coder(model, coder);
        arma::cx_vec d(model.S);
        for (arma::uword s = 0; s < model.S; ++s)
            d(s) = coder(s) ? model.Z_off : model.Z_on;
        return arma::diagmat(d);
    }

    namespace detail
    {
        // Solves (Z_PP + Z_L(b)) y = z_PA. Shared by the current and pattern
        // computations; always a linear solve, never an explicit inverse.
        inline arma::cx_vec solve_pixel_network(const AntennaModel &model, const arma::uvec &coder)
        {
            check_coder(model, coder);
            if (model.S == 0)
                return arma::cx_vec();

            arma::cx_mat loaded = model.Z_PP;
            for (arma::uword s = 0; s < model.S; ++s)
                loaded(s, s) += coder(s) ? model.Z_off : model.Z_on;

            const double rc = arma::rcond(loaded);
            if (!(rc >= kRcondFloor))
                throw SingularNetworkError("loaded pixel network is singular for coder " +
                                           coder_to_string(coder) + " (rcond " + std::to_string(rc) + ")");

            arma::cx_vec y;
            if (!arma::solve(y, loaded, model.z_PA))
                throw SingularNetworkError("linear solve failed for coder " + coder_to_string(coder));
            return y;
        }
    }

    // i_P = -(Z_L(b) + Z_PP)^{-1} z_PA i_A
    inline arma::cx_vec pixel_currents(const AntennaModel &model, const arma::uvec &coder,
                                       arma::cx_double feed_current)
    {
        return -feed_current * detail::solve_pixel_network(model, coder);
    }

    // Overall pattern for unit feed current: e = e_A - E_P (Z_PP + Z_L(b))^{-1} z_PA
    inline RadiationPattern radiation_pattern(const AntennaModel &model, const arma::uvec &coder)
    {
        RadiationPattern p;
        if (model.S == 0)
        {
            check_coder(model, coder);
            p.e = model.e_A;
        }
        else
        {
            p.e = model.e_A - model.E_P * detail::solve_pixel_network(model, coder);
        }

        const double nrm = arma::norm(p.e);
        if (nrm < kDegeneratePatternTol * arma::norm(model.e_A))
            throw DegeneratePatternError("radiation pattern is numerically zero for coder " +
                                         coder_to_string(coder));
        p.e_bar = p.e / nrm;
        return p;
    }

    inline arma::uvec coder_from_index(std::uint64_t index, arma::uword s_bits)
    {
        arma::uvec coder(s_bits);
        for (arma::uword s = 0; s < s_bits; ++s)
            coder(s) = (index >> s) & 1u;
        return coder;
    }

    // Checks the structural model invariants. Invertibility of the loaded
    // network is probed at the two extreme coders plus a seeded sample of
    // random coders. Throws std::invalid_argument naming the failed check.
    inline void validate_antenna_model(const AntennaModel &m,
                                       arma::uword random_coder_checks = 8,
                                       std::uint64_t check_seed = 0x616e7465554aULL)
    {
        if (m.K < 1)
            throw std::invalid_argument("K must be at least 1");
        if (m.z_AP.n_elem != m.S)
            throw std::invalid_argument("z_AP length does not match S");
        if (m.z_PA.n_elem != m.S)
            throw std::invalid_argument("z_PA length does not match S");
        if (m.Z_PP.n_rows != m.S || m.Z_PP.n_cols != m.S)
            throw std::invalid_argument("Z_PP is not S x S");
        if (m.e_A.n_elem != 2 * m.K)
            throw std::invalid_argument("e_A length is not 2K");
        if (m.E_P.n_rows != 2 * m.K || m.E_P.n_cols != m.S)
            throw std::invalid_argument("E_P is not 2K x S");
        if (m.Z_on != arma::cx_double(0.0, 0.0))
            throw std::invalid_argument("Z_on must be 0");
        if (!std::isfinite(m.Z_off.real()) || !std::isfinite(m.Z_off.imag()))
            throw std::invalid_argument("Z_off must be finite");
        if (!(arma::norm(m.e_A) > 0.0))
            throw std::invalid_argument("e_A must be nonzero");

        if (m.S > 0)
        {
            const double max_entry = arma::abs(m.Z_PP).max();
            if (arma::abs(arma::cx_mat(m.Z_PP - m.Z_PP.st())).max() > 1e-9 * (1.0 + max_entry))
                throw std::invalid_argument("Z_PP is not symmetric");
            if (std::abs(m.Z_off) < kOffLoadSeparation * max_entry)
                throw std::invalid_argument("|Z_off| is too small relative to Z_PP entries");

            auto probe = [&m](const arma::uvec &coder) {
                detail::solve_pixel_network(m, coder); // throws SingularNetworkError
            };
            try
            {
                probe(arma::uvec(m.S, arma::fill::zeros));
                probe(arma::uvec(m.S, arma::fill::ones));
                Rng rng(check_seed);
                for (arma::uword i = 0; i < random_coder_checks; ++i)
                {
                    arma::uvec coder(m.S);
                    for (arma::uword s = 0; s < m.S; ++s)
                        coder(s) = rng.integer(2);
                    probe(coder);
                }
            }
            catch (const SingularNetworkError &e)
            {
                throw std::invalid_argument(std::string("loaded network not invertible: ") + e.what());
            }
        }
    }

    // Draws a random but physically plausible model: Z_PP complex symmetric
    // with positive-definite real part (reciprocity + passivity), entries
    // rescaled so the Z_off separation invariant holds at any S, unit-norm
    // feed pattern. Deterministic in the seed.
    inline AntennaModel synthesize_antenna_model(arma::uword S, arma::uword K, std::uint64_t seed,
                                                 arma::uword random_coder_checks = 8)
    {
        if (K < 1)
            throw std::invalid_argument("K must be at least 1");

        constexpr arma::uword kMaxAttempts = 100;
        constexpr double kTargetMaxEntry = 8.0; // keeps |Z_off| / max|Z_PP| >= 1e5

        for (arma::uword attempt = 0; attempt < kMaxAttempts; ++attempt)
        {
            Rng rng(derive_seed(seed, {0x414e54ULL, attempt}));

            AntennaModel m;
            m.S = S;
            m.K = K;
            m.z_AA = arma::cx_double(50.0, 0.0) + rng.cgaussian();
            m.z_AP = rng.cx_vector(S);
            m.z_PA = rng.cx_vector(S);

            if (S > 0)
            {
                arma::cx_mat g = rng.cx_matrix(S, S);
                arma::cx_mat sym = g + g.st();
                arma::vec re_eigs = arma::eig_sym(arma::mat(arma::real(sym)));
                sym.diag() += std::max(0.0, -re_eigs.min()) + 1.0;
                m.Z_PP = sym * (kTargetMaxEntry / arma::abs(sym).max());
            }
            else
            {
                m.Z_PP.set_size(0, 0);
            }

            m.e_A = rng.cx_vector(2 * K);
            const double nrm = arma::norm(m.e_A);
            if (!(nrm > 0.0))
                continue;
            m.e_A /= nrm;
            m.E_P = rng.cx_matrix(2 * K, S);
            m.Z_on = arma::cx_double(0.0, 0.0);
            m.Z_off = arma::cx_double(1e6, 0.0);

            try
            {
                validate_antenna_model(m, random_coder_checks,
                                       derive_seed(seed, {0x434845ULL, attempt}));
                return m;
            }
            catch (const std::invalid_argument &)
            {
                continue;
            }
        }
        throw SynthesisError("antenna model synthesis failed after 100 attempts (S=" +
                             std::to_string(S) + ", K=" + std::to_string(K) +
                             ", seed=" + std::to_string(seed) + ")");
    }

    // Copy with the pixel network removed; its only pattern is e_A.
    inline AntennaModel strip_pixels(const AntennaModel &m)
    {
        AntennaModel out = m;
        out.S = 0;
        out.z_AP.reset();
        out.z_PA.reset();
        out.Z_PP.set_size(0, 0);
        out.E_P.set_size(2 * m.K, 0);
        return out;
    }
}
