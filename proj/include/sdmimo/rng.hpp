// SPDX-License-Identifier: Apache-2.0
//
// sdmimo - spatial Sigma-Delta ADC massive MIMO uplink simulator
// Copyright (C) 2026 the sdmimo authors
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

#ifndef SDMIMO_RNG_HPP
#define SDMIMO_RNG_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <random>

namespace sdmimo {

// Deterministic random stream. Gaussian variates are produced from raw
// uniform bits (no std::*_distribution), so a (seed, stream) pair yields the
// same sequence on every platform. Monte Carlo trials take one substream per
// trial index, which makes results independent of the worker count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 1));
    }

    // Uniform on (0, 1].
    double uniform() {
        const std::uint64_t r = gen_();
        return (static_cast<double>(r >> 11) + 1.0) * 0x1.0p-53;
    }

    // Circularly symmetric complex Gaussian, CN(0, 1).
    std::complex<double> cgauss() {
        const double radius = std::sqrt(-std::log(uniform()));
        const double phase = 2.0 * 3.141592653589793238462643383279502884 * uniform();
        return std::polar(radius, phase);
    }

    arma::cx_vec cgauss_vec(arma::uword n) {
        arma::cx_vec v(n);
        for (arma::uword i = 0; i < n; ++i) {
            v(i) = cgauss();
        }
        return v;
    }

    arma::cx_mat cgauss_mat(arma::uword rows, arma::uword cols) {
        arma::cx_mat m(rows, cols);
        for (arma::uword c = 0; c < cols; ++c) {
            for (arma::uword r = 0; r < rows; ++r) {
                m(r, c) = cgauss();
            }
        }
        return m;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

} // namespace sdmimo

#endif // SDMIMO_RNG_HPP
