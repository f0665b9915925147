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
#include <initializer_list>
#include <random>
#include <string_view>

// Seeded randomness used across the toolkit. All distributions are built
// from the raw mt19937_64 bit stream (no std::*_distribution), so a seed
// reproduces the same values on every standard library.

namespace pixelmimo
{
    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Derives an independent child seed from a base seed and a word path.
    inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words)
    {
        std::uint64_t s = splitmix64(base);
        for (std::uint64_t w : words)
            s = splitmix64(s ^ (w + 0x9e3779b97f4a7c15ULL));
        return s;
    }

    inline std::uint64_t fnv1a(std::string_view text)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : text)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        // Uniform on [0,1), 53-bit resolution.
        double uniform()
        {
            return double(engine_() >> 11) * 0x1.0p-53;
        }

        std::uint64_t integer(std::uint64_t bound) // [0, bound)
        {
            return bound == 0 ? 0 : engine_() % bound;
        }

        // Standard normal via Box-Muller; consumes exactly two draws.
        double gaussian()
        {
            const double u1 = double((engine_() >> 11) + 1) * 0x1.0p-53; // (0,1]
            const double u2 = double(engine_() >> 11) * 0x1.0p-53;
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * arma::datum::pi * u2);
        }

        // Circularly symmetric complex Gaussian CN(0, variance).
        arma::cx_double cgaussian(double variance = 1.0)
        {
            const double u1 = double((engine_() >> 11) + 1) * 0x1.0p-53;
            const double u2 = double(engine_() >> 11) * 0x1.0p-53;
            const double r = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(0.5 * variance);
            const double t = 2.0 * arma::datum::pi * u2;
            return {r * std::cos(t), r * std::sin(t)};
        }

        arma::cx_vec cx_vector(arma::uword n, double variance = 1.0)
        {
            arma::cx_vec v(n);
            for (arma::uword i = 0; i < n; ++i)
                v(i) = cgaussian(variance);
            return v;
        }

        arma::cx_mat cx_matrix(arma::uword rows, arma::uword cols, double variance = 1.0)
        {
            arma::cx_mat m(rows, cols);
            for (arma::uword j = 0; j < cols; ++j)
                for (arma::uword i = 0; i < rows; ++i)
                    m(i, j) = cgaussian(variance);
            return m;
        }

    private:
        std::mt19937_64 engine_;
    };
}
