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

#include <catch2/catch.hpp>

#include <pixelmimo/pixelmimo.hpp>

#include "test_util.hpp"

using namespace pixelmimo;

TEST_CASE("virtual channel sampling follows the distance power law")
{
    ChannelConfig cc; // beta0 = -30 dB, d = 600 m, d0 = 1 m, alpha = 3.5
    const double expected = 1e-3 * std::pow(600.0, -3.5);
    REQUIRE(path_gain(cc) == Approx(expected).epsilon(1e-12));

    const VirtualChannel vc = sample_virtual_channel(4, cc, 11);
    REQUIRE(vc.beta == Approx(expected).epsilon(1e-12));
    REQUIRE(vc.H_V.n_rows == 8);
    REQUIRE(vc.H_V.n_cols == 8);

    SECTION("same seed, same realization")
    {
        const VirtualChannel again = sample_virtual_channel(4, cc, 11);
        REQUIRE(arma::norm(arma::cx_mat(again.H_V - vc.H_V), "fro") == 0.0);
    }

    SECTION("empirical per-entry variance matches beta within 5%")
    {
        const VirtualChannel big = sample_virtual_channel(50, cc, 3); // 10^4 entries
        const double mean_sq = arma::accu(arma::square(arma::abs(big.H_V))) / double(big.H_V.n_elem);
        REQUIRE(mean_sq == Approx(big.beta).epsilon(0.05));
    }
}

TEST_CASE("pattern matrix stacks per-antenna patterns")
{
    const AntennaModel m = synthesize_antenna_model(3, 4, 8);

    SECTION("single column equals the radiation pattern")
    {
        arma::umat coders(3, 1);
        coders.col(0) = arma::uvec{1, 0, 1};
        const arma::cx_mat E = pattern_matrix(m, coders);
        const RadiationPattern p = radiation_pattern(m, arma::uvec{1, 0, 1});
        REQUIRE(arma::norm(arma::cx_vec(E.col(0)) - p.e_bar) == 0.0);
    }

    SECTION("identical coders give identical columns, all unit norm")
    {
        arma::umat coders(3, 3, arma::fill::zeros);
        coders.col(1) = arma::uvec{1, 1, 0};
        coders.col(2) = arma::uvec{1, 1, 0};
        const arma::cx_mat E = pattern_matrix(m, coders);
        REQUIRE(arma::norm(arma::cx_vec(E.col(1) - E.col(2))) == 0.0);
        for (arma::uword j = 0; j < 3; ++j)
            REQUIRE(std::abs(arma::norm(arma::cx_vec(E.col(j))) - 1.0) < 1e-12);
    }

    SECTION("empty and mismatched coder blocks are dimension errors")
    {
        REQUIRE_THROWS_AS(pattern_matrix(m, arma::umat(3, 0)), DimensionError);
        REQUIRE_THROWS_AS(pattern_matrix(m, arma::umat(2, 1, arma::fill::zeros)), DimensionError);
    }

    SECTION("a collapsed pattern names the offending column")
    {
        AntennaModel degenerate;
        degenerate.S = 1;
        degenerate.K = 1;
        degenerate.z_AP = arma::cx_vec{arma::cx_double(4.0, 0.0)};
        degenerate.z_PA = arma::cx_vec{arma::cx_double(4.0, 0.0)};
        degenerate.Z_PP = arma::cx_mat(1, 1);
        degenerate.Z_PP(0, 0) = arma::cx_double(2.0, 0.0);
        degenerate.e_A = arma::cx_vec{arma::cx_double(2.0, 0.0), arma::cx_double(2.0, 0.0)};
        degenerate.E_P = arma::cx_mat(2, 1, arma::fill::ones);
        // all-on makes e = e_A - E_P * 2 = 0; all-off stays near e_A
        arma::umat coders(1, 2);
        coders(0, 0) = 1;
        coders(0, 1) = 0;
        REQUIRE_THROWS_WITH(pattern_matrix(degenerate, coders),
                            Catch::Matchers::Contains("column 1"));
    }
}

TEST_CASE("effective channel projects the virtual channel through the patterns")
{
    const AntennaModel mt = synthesize_antenna_model(2, 4, 21);
    const AntennaModel mr = synthesize_antenna_model(2, 4, 22);
    const VirtualChannel vc = sample_virtual_channel(4, ChannelConfig{}, 5);

    SECTION("zero virtual channel gives a rank-zero effective channel")
    {
        CoderAssignment a{arma::umat(2, 2, arma::fill::zeros), arma::umat(2, 2, arma::fill::zeros)};
        const EffectiveChannel ec =
            effective_channel(mt, mr, arma::cx_mat(8, 8, arma::fill::zeros), a);
        REQUIRE(ec.D == 0);
        REQUIRE(arma::norm(ec.H, "fro") == 0.0);
    }

    SECTION("scalar case reduces to a pattern inner product")
    {
        CoderAssignment a{arma::umat(2, 1, arma::fill::zeros), arma::umat(2, 1, arma::fill::ones)};
        const EffectiveChannel ec = effective_channel(mt, mr, vc.H_V, a);
        REQUIRE(ec.H.n_rows == 1);
        REQUIRE(ec.H.n_cols == 1);
        const arma::cx_vec et = radiation_pattern(mt, arma::uvec{0, 0}).e_bar;
        const arma::cx_vec er = radiation_pattern(mr, arma::uvec{1, 1}).e_bar;
        const arma::cx_double expected = arma::cdot(er, vc.H_V * et);
        REQUIRE(std::abs(ec.H(0, 0) - expected) < 1e-12 * std::abs(expected));
    }

    SECTION("Frobenius norm is bounded by the unit-column pattern matrices")
    {
        const double hv_norm = arma::norm(vc.H_V, "fro");
        for (std::uint64_t code = 0; code < 256; ++code)
        {
            BitVec bits(8, 0);
            for (arma::uword n = 0; n < 8; ++n)
                bits[n] = std::uint8_t((code >> n) & 1u);
            const CoderAssignment a = to_assignment(bits, 2, 2, 2);
            const EffectiveChannel ec = effective_channel(mt, mr, vc.H_V, a);
            REQUIRE(arma::norm(ec.H, "fro") <= 2.0 * hv_norm * (1.0 + 1e-12));
        }
    }

    SECTION("the attached SVD reconstructs the channel")
    {
        CoderAssignment a{arma::umat{{0u, 1u}, {1u, 0u}}, arma::umat{{1u, 1u}, {0u, 1u}}};
        const EffectiveChannel ec = effective_channel(mt, mr, vc.H_V, a);
        REQUIRE(ec.D <= 2);
        const arma::cx_mat rebuilt =
            ec.U * arma::diagmat(arma::conv_to<arma::cx_vec>::from(ec.sv)) * ec.V.t();
        REQUIRE(arma::norm(arma::cx_mat(ec.H - rebuilt), "fro") <= 1e-9 * arma::norm(ec.H, "fro"));
        REQUIRE(arma::norm(arma::cx_mat(ec.U.t() * ec.U -
                                        arma::eye<arma::cx_mat>(ec.D, ec.D)), "fro") < 1e-9);
        REQUIRE(arma::norm(arma::cx_mat(ec.V.t() * ec.V -
                                        arma::eye<arma::cx_mat>(ec.D, ec.D)), "fro") < 1e-9);
    }

    SECTION("dimension mismatches name the axis")
    {
        CoderAssignment a{arma::umat(2, 2, arma::fill::zeros), arma::umat(2, 2, arma::fill::zeros)};
        REQUIRE_THROWS_WITH(effective_channel(mt, mr, arma::cx_mat(6, 8, arma::fill::zeros), a),
                            Catch::Matchers::Contains("H_V rows"));
        CoderAssignment bad{arma::umat(3, 2, arma::fill::zeros), arma::umat(2, 2, arma::fill::zeros)};
        REQUIRE_THROWS_WITH(effective_channel(mt, mr, vc.H_V, bad),
                            Catch::Matchers::Contains("B_T"));
    }

    SECTION("permuting antennas permutes the channel and keeps the rate")
    {
        const Instance inst = testutil::make_instance(2, 2, 2, 4, 99);
        CoderAssignment a{arma::umat{{0u, 1u}, {1u, 1u}}, arma::umat{{1u, 0u}, {0u, 1u}}};
        const EffectiveChannel ec = effective_channel(inst.model_t(), inst.model_r(), inst.H_V(), a);

        CoderAssignment swapped = a;
        swapped.B_T = arma::fliplr(a.B_T);
        const EffectiveChannel ec2 =
            effective_channel(inst.model_t(), inst.model_r(), inst.H_V(), swapped);
        REQUIRE(arma::norm(arma::cx_mat(arma::fliplr(ec.H) - ec2.H), "fro") <=
                1e-12 * arma::norm(ec.H, "fro"));

        const double r1 = water_fill(ec, inst.power(), inst.sigma2()).rate;
        const double r2 = water_fill(ec2, inst.power(), inst.sigma2()).rate;
        REQUIRE(r1 == Approx(r2).margin(1e-9));
    }
}

TEST_CASE("achievable rate is the log-det of the whitened channel")
{
    SECTION("zero covariance sends nothing")
    {
        const arma::cx_mat H(2, 2, arma::fill::ones);
        REQUIRE(rate(H, arma::cx_mat(2, 2, arma::fill::zeros), 1.0) == 0.0);
    }

    SECTION("two unit subchannels at unit SNR")
    {
        const arma::cx_mat eye2 = arma::eye<arma::cx_mat>(2, 2);
        REQUIRE(rate(eye2, eye2, 1.0) == Approx(2.0).margin(1e-12));
    }

    SECTION("diagonal closed form")
    {
        arma::cx_mat H(2, 2, arma::fill::zeros);
        H(0, 0) = 2.0;
        H(1, 1) = 1.0;
        arma::cx_mat Q(2, 2, arma::fill::zeros);
        Q(0, 0) = 0.875;
        Q(1, 1) = 0.125;
        const double expected = std::log2(1.0 + 0.875 * 4.0) + std::log2(1.0 + 0.125);
        REQUIRE(rate(H, Q, 1.0) == Approx(expected).margin(1e-12));
    }

    SECTION("a covariance with a negative direction is rejected")
    {
        const arma::cx_mat H = arma::eye<arma::cx_mat>(2, 2);
        arma::cx_mat Q(2, 2, arma::fill::zeros);
        Q(0, 0) = 1.0;
        Q(1, 1) = -0.5;
        REQUIRE_THROWS_AS(rate(H, Q, 1.0), InvalidCovarianceError);
    }

    SECTION("non-Hermitian covariance is rejected")
    {
        const arma::cx_mat H = arma::eye<arma::cx_mat>(2, 2);
        arma::cx_mat Q = arma::eye<arma::cx_mat>(2, 2);
        Q(0, 1) = arma::cx_double(0.3, 0.0);
        REQUIRE_THROWS_AS(rate(H, Q, 1.0), InvalidCovarianceError);
    }

    SECTION("determinant identity under operand exchange")
    {
        Rng rng(12);
        for (int k = 0; k < 10; ++k)
        {
            const arma::cx_mat H = rng.cx_matrix(3, 2);
            arma::cx_mat A = rng.cx_matrix(2, 2);
            arma::cx_mat Q = A * A.t();
            Q *= 1.0 / arma::trace(Q).real();
            const arma::cx_mat q_sqrt = hermitian_sqrt(Q);
            const arma::cx_mat left = H * q_sqrt;
            const double r1 = std::log2(std::abs(arma::det(
                arma::cx_mat(arma::eye<arma::cx_mat>(3, 3) + left * left.t()))));
            const double r2 = std::log2(std::abs(arma::det(
                arma::cx_mat(arma::eye<arma::cx_mat>(2, 2) + left.t() * left))));
            REQUIRE(r1 == Approx(r2).margin(1e-9));
            REQUIRE(rate(H, Q, 1.0) == Approx(r1).margin(1e-9));
        }
    }
}
