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

#include "sdmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sdmimo {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void ScenarioGeometry::validate() const {
    if (M < 1 || K < 1 || L < 1) {
        throw std::invalid_argument("ScenarioGeometry: M, K, L must be >= 1");
    }
    if (N < K) {
        throw std::invalid_argument("ScenarioGeometry: pilot length N must be >= K");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("ScenarioGeometry: delta must be > 0");
    }
    if (!(sector_deg > 0.0 && sector_deg < 180.0)) {
        throw std::invalid_argument("ScenarioGeometry: sector must be in (0, 180) degrees");
    }
}

arma::cx_vec steering_vector(double theta_rad, arma::uword M, double delta) {
    arma::cx_vec a(M);
    const double s = std::sin(theta_rad);
    for (arma::uword m = 0; m < M; ++m) {
        a(m) = std::polar(1.0, -2.0 * kPi * static_cast<double>(m) * delta * s);
    }
    return a;
}

arma::vec aoa_grid(double sector_deg, arma::uword L) {
    const double half = 0.5 * sector_deg * kPi / 180.0;
    arma::vec grid(L);
    if (L == 1) {
        grid(0) = 0.0;
        return grid;
    }
    for (arma::uword l = 0; l < L; ++l) {
        grid(l) = -half + 2.0 * half * static_cast<double>(l) / static_cast<double>(L - 1);
    }
    return grid;
}

arma::cx_mat covariance_factor(const arma::cx_mat &T, const arma::vec &theta_rad,
                               double delta) {
    const arma::uword M = T.n_rows;
    const arma::uword L = theta_rad.n_elem;
    arma::cx_mat a(M, L);
    for (arma::uword l = 0; l < L; ++l) {
        a.col(l) = steering_vector(theta_rad(l), M, delta);
    }
    return (T * a) / std::sqrt(static_cast<double>(L));
}

ChannelStatistics make_channel_statistics(const arma::cx_mat &T,
                                          const ScenarioGeometry &geom) {
    geom.validate();
    ChannelStatistics stats;
    stats.F = covariance_factor(T, aoa_grid(geom.sector_deg, geom.L), geom.delta);
    stats.C_G = stats.F * stats.F.t();
    stats.C_G = 0.5 * (stats.C_G + stats.C_G.t());
    stats.tr_C_G = arma::trace(stats.C_G).real();
    return stats;
}

arma::cx_vec draw_channel(const arma::cx_mat &F, Rng &rng) {
    return F * rng.cgauss_vec(F.n_cols);
}

arma::cx_mat dft_pilots(arma::uword N, arma::uword K) {
    if (K > N) {
        throw std::invalid_argument("dft_pilots: need K <= N");
    }
    arma::cx_mat phi(K, N);
    for (arma::uword k = 0; k < K; ++k) {
        for (arma::uword n = 0; n < N; ++n) {
            phi(k, n) = std::polar(1.0, -2.0 * kPi * static_cast<double>(k * n) /
                                            static_cast<double>(N));
        }
    }
    return phi;
}

arma::cx_mat received_pilot_block(const arma::cx_mat &G, const arma::cx_mat &phi_t,
                                  double rho, const arma::cx_mat &noise_chol,
                                  Rng &rng) {
    const arma::uword M = G.n_rows;
    const arma::uword N = phi_t.n_cols;
    arma::cx_mat x = std::sqrt(rho) * G * phi_t;
    x += noise_chol * rng.cgauss_mat(M, N);
    return x;
}

double snr_to_rho(double snr_linear, double tr_c_g_total, double tr_c_n,
                  arma::uword K) {
    if (!(tr_c_g_total > 0.0) || !(tr_c_n > 0.0)) {
        throw std::invalid_argument("snr_to_rho: traces must be > 0");
    }
    return snr_linear * static_cast<double>(K) * tr_c_n / tr_c_g_total;
}

arma::cx_mat cov_x_block(double rho, arma::uword K, const arma::cx_mat &C_G,
                         const arma::cx_mat &C_N) {
    return rho * static_cast<double>(K) * C_G + C_N;
}

arma::cx_mat cov_x_dense(const arma::cx_mat &phi_t, double rho,
                         const std::vector<arma::cx_mat> &c_gk,
                         const arma::cx_mat &C_N) {
    const arma::uword K = phi_t.n_rows;
    const arma::uword N = phi_t.n_cols;
    const arma::uword M = C_N.n_rows;
    if (c_gk.size() != K) {
        throw std::invalid_argument("cov_x_dense: need one covariance per user");
    }
    arma::cx_mat c(M * N, M * N, arma::fill::zeros);
    for (arma::uword i = 0; i < N; ++i) {
        for (arma::uword j = 0; j < N; ++j) {
            arma::cx_mat block(M, M, arma::fill::zeros);
            for (arma::uword k = 0; k < K; ++k) {
                block += rho * phi_t(k, i) * std::conj(phi_t(k, j)) * c_gk[k];
            }
            if (i == j) {
                block += C_N;
            }
            c.submat(i * M, j * M, (i + 1) * M - 1, (j + 1) * M - 1) = block;
        }
    }
    return c;
}

} // namespace sdmimo
