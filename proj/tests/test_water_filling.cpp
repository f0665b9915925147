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

namespace
{
    EffectiveChannel diagonal_channel(const arma::vec &singular_values)
    {
        arma::cx_mat H(singular_values.n_elem, singular_values.n_elem, arma::fill::zeros);
        for (arma::uword i = 0; i < singular_values.n_elem; ++i)
            H(i, i) = singular_values(i);
        return make_effective_channel(H);
    }

    // Independent oracle: scan the water level on a fine grid and keep the
    // largest level whose implied power fits the budget.
    double grid_search_rate(const arma::vec &gains, double total_power, double sigma2,
                            double step = 1e-6)
    {
        double best_rate = 0.0;
        const double max_level = total_power + sigma2 / gains.min() + 1.0;
        for (double nu = step; nu <= max_level; nu += step)
        {
            double used = 0.0, r = 0.0;
            for (double g : gains)
            {
                const double p = std::max(nu - sigma2 / g, 0.0);
                used += p;
                r += std::log2(1.0 + p * g / sigma2);
            }
            if (used > total_power)
                break;
            best_rate = r;
        }
        return best_rate;
    }

    void check_result_invariants(const EffectiveChannel &ec, const WaterFillResult &wf,
                                 double total_power, double sigma2)
    {
        REQUIRE(arma::trace(wf.Q).real() <= total_power + 1e-9);
        REQUIRE(arma::abs(arma::cx_mat(wf.Q - wf.Q.t())).max() < 1e-12);
        if (wf.Q.n_elem > 0)
            REQUIRE(arma::eig_sym(arma::cx_mat(wf.Q)).min() >= -1e-10);
        if (ec.D > 0)
        {
            REQUIRE(arma::accu(wf.powers) == Approx(total_power).margin(1e-9));
            for (arma::uword i = 0; i < ec.D; ++i)
            {
                const double floor_level = sigma2 / (ec.sv(i) * ec.sv(i));
                if (wf.powers(i) > 0.0)
                    REQUIRE(wf.powers(i) + floor_level == Approx(wf.water_level).margin(1e-9));
                else
                    REQUIRE(wf.water_level <= floor_level + 1e-9);
                REQUIRE(wf.powers(i) == Approx(std::max(wf.water_level - floor_level, 0.0)).margin(1e-9));
            }
        }
        REQUIRE(wf.rate == Approx(rate(ec, wf.Q, sigma2)).margin(1e-9));
    }
}

TEST_CASE("water-filling closed forms")
{
    SECTION("single stream takes all the power")
    {
        const WaterFillResult wf = water_fill(diagonal_channel(arma::vec{1.0}), 1.0, 1.0);
        REQUIRE(wf.powers(0) == Approx(1.0).margin(1e-12));
        REQUIRE(wf.rate == Approx(1.0).margin(1e-12));
    }

    SECTION("equal gains split the power evenly")
    {
        const WaterFillResult wf = water_fill(diagonal_channel(arma::vec{1.0, 1.0}), 2.0, 1.0);
        REQUIRE(wf.powers(0) == Approx(1.0).margin(1e-12));
        REQUIRE(wf.powers(1) == Approx(1.0).margin(1e-12));
        REQUIRE(wf.rate == Approx(2.0).margin(1e-12));
    }

    SECTION("two-stream allocation with gains 4 and 1")
    {
        const EffectiveChannel ec = diagonal_channel(arma::vec{2.0, 1.0}); // gains 4, 1
        const WaterFillResult wf = water_fill(ec, 1.0, 1.0);
        REQUIRE(wf.water_level == Approx(1.125).margin(1e-12));
        REQUIRE(wf.powers(0) == Approx(0.875).margin(1e-12));
        REQUIRE(wf.powers(1) == Approx(0.125).margin(1e-12));
        const double expected = std::log2(4.5) + std::log2(1.125);
        REQUIRE(wf.rate == Approx(expected).margin(1e-12));
        REQUIRE(wf.rate == Approx(grid_search_rate(arma::vec{4.0, 1.0}, 1.0, 1.0)).margin(1e-4));
        check_result_invariants(ec, wf, 1.0, 1.0);
    }

    SECTION("weak stream shut off at low power")
    {
        const EffectiveChannel ec = diagonal_channel(arma::vec{10.0, 0.1});
        const WaterFillResult wf = water_fill(ec, 0.01, 1.0);
        REQUIRE(wf.powers(0) == Approx(0.01).margin(1e-12));
        REQUIRE(wf.powers(1) == 0.0);
        REQUIRE(wf.rate == Approx(grid_search_rate(arma::vec{100.0, 0.01}, 0.01, 1.0, 1e-7)).margin(1e-4));
        check_result_invariants(ec, wf, 0.01, 1.0);
    }

    SECTION("rank-zero channel carries nothing")
    {
        const WaterFillResult wf = water_fill(make_effective_channel(arma::cx_mat(2, 3, arma::fill::zeros)),
                                              1.0, 1.0);
        REQUIRE(wf.rate == 0.0);
        REQUIRE(wf.water_level == 0.0);
        REQUIRE(wf.Q.n_rows == 3);
        REQUIRE(arma::norm(wf.Q, "fro") == 0.0);
    }
}

TEST_CASE("water-filling dominates other trace-limited covariances")
{
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial)
    {
        const arma::uword n_r = 2 + rng.integer(2);
        const arma::uword n_t = 2 + rng.integer(2);
        const arma::cx_mat H = rng.cx_matrix(n_r, n_t);
        const double total_power = 0.5 + rng.uniform() * 2.0;
        const double sigma2 = 0.2 + rng.uniform();

        const EffectiveChannel ec = make_effective_channel(H);
        const WaterFillResult wf = water_fill(ec, total_power, sigma2);
        check_result_invariants(ec, wf, total_power, sigma2);

        const arma::cx_mat iso = (total_power / double(n_t)) * arma::eye<arma::cx_mat>(n_t, n_t);
        REQUIRE(wf.rate + 1e-9 >= rate(ec, iso, sigma2));

        for (int k = 0; k < 100; ++k)
        {
            arma::cx_mat A = rng.cx_matrix(n_t, n_t);
            arma::cx_mat Q = A * A.t();
            Q *= total_power / arma::trace(Q).real();
            REQUIRE(wf.rate + 1e-9 >= rate(ec, Q, sigma2));
        }
    }
}

TEST_CASE("water-filled rate is nondecreasing in the power budget")
{
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial)
    {
        const EffectiveChannel ec = make_effective_channel(rng.cx_matrix(3, 3));
        double previous = -1.0;
        for (int i = 1; i <= 20; ++i)
        {
            const double r = water_fill(ec, 0.25 * i, 1.0).rate;
            REQUIRE(r >= previous - 1e-12);
            previous = r;
        }
    }
}

TEST_CASE("water-filling matches the grid oracle on random channels")
{
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial)
    {
        const EffectiveChannel ec = make_effective_channel(rng.cx_matrix(3, 3));
        const double total_power = 1.0 + rng.uniform();
        const WaterFillResult wf = water_fill(ec, total_power, 1.0);
        const arma::vec gains = arma::square(ec.sv);
        REQUIRE(wf.rate == Approx(grid_search_rate(gains, total_power, 1.0)).margin(1e-4));
    }
}
