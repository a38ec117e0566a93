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

#ifndef SDMIMO_CHANNEL_HPP
#define SDMIMO_CHANNEL_HPP

#include <armadillo>
#include <vector>

#include "sdmimo/rng.hpp"

namespace sdmimo {

// Array and user-population geometry.
//   M      antennas, uniform linear array
//   K      single-antenna users
//   N      pilot length (N >= K)
//   delta  inter-element spacing in wavelengths
//   sector_deg  width of the user AoA sector, centered on broadside
//   psi    feedback steering phase [rad]
//   L      signal arrivals per user
struct ScenarioGeometry {
    arma::uword M = 128;
    arma::uword K = 10;
    arma::uword N = 10;
    double delta = 1.0 / 6.0;
    double sector_deg = 60.0;
    double psi = 0.0;
    arma::uword L = 50;

    void validate() const;
};

// Steering vector a(m) = exp(-j 2 pi (m-1) delta sin(theta)).
arma::cx_vec steering_vector(double theta_rad, arma::uword M, double delta);

// L uniformly spaced arrival angles over [-sector/2, sector/2] [rad].
arma::vec aoa_grid(double sector_deg, arma::uword L);

// Covariance factor F = (1/sqrt L) T A, where column l of A is the steering
// vector at angle theta_l. C_g = F F^H.
arma::cx_mat covariance_factor(const arma::cx_mat &T, const arma::vec &theta_rad,
                               double delta);

// Second-order channel statistics shared by every user.
struct ChannelStatistics {
    arma::cx_mat F;   // M x L covariance factor
    arma::cx_mat C_G; // F F^H
    double tr_C_G = 0.0;
};

ChannelStatistics make_channel_statistics(const arma::cx_mat &T,
                                          const ScenarioGeometry &geom);

// One channel realization g = F h with h ~ CN(0, I_L).
arma::cx_vec draw_channel(const arma::cx_mat &F, Rng &rng);

// First K rows of the N x N DFT matrix; rows are orthogonal with
// Phi_t Phi_t^H = N I_K and unit-modulus entries.
arma::cx_mat dft_pilots(arma::uword N, arma::uword K);

// Received pilot block X = sqrt(rho) G Phi_t + N, noise columns iid
// CN(0, C_N) drawn through the lower Cholesky factor of C_N.
arma::cx_mat received_pilot_block(const arma::cx_mat &G, const arma::cx_mat &phi_t,
                                  double rho, const arma::cx_mat &noise_chol,
                                  Rng &rng);

// rho from the average per-user per-antenna SNR definition:
// SNR = (rho / K) Tr(C_g) / Tr(C_N) with Tr(C_g) summed over users.
double snr_to_rho(double snr_linear, double tr_c_g_total, double tr_c_n,
                  arma::uword K);

// Per-pilot-sample block of C_x for orthogonal pilots with N = K and equal
// user covariances: every diagonal M x M block equals rho K C_G + C_N and
// the off-diagonal blocks vanish.
arma::cx_mat cov_x_block(double rho, arma::uword K, const arma::cx_mat &C_G,
                         const arma::cx_mat &C_N);

// Dense MN x MN C_x for arbitrary pilots / per-user covariances, assembled
// blockwise: block (i,j) = rho sum_k Phi_t(k,i) conj(Phi_t(k,j)) C_gk
// + delta_ij C_N. Intended for validation at small sizes.
arma::cx_mat cov_x_dense(const arma::cx_mat &phi_t, double rho,
                         const std::vector<arma::cx_mat> &c_gk,
                         const arma::cx_mat &C_N);

} // namespace sdmimo

#endif // SDMIMO_CHANNEL_HPP
