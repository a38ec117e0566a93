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
//
// Uplink achievable-rate lower bounds with imperfect CSI. The detected
// symbol splits into desired signal, receiver uncertainty, multi-user
// interference, additive noise and quantization noise; treating the last
// four as effective Gaussian noise gives
//
//   R_k = log2( 1 + rho_d |E[w_k^H g_k]|^2 /
//         ( rho_d var(w_k^H g_k) + rho_d sum_{i != k} E|w_k^H g_i|^2
//           + E|w_k^H n_d|^2 + E|w_k^H U_d^{-1} q_d|^2 ) ).
//
// MRC has a closed form, ZF a semi-analytic form with one empirical
// expectation over channel-estimate draws, and the LMMSE receiver is
// evaluated by Monte Carlo on the full pipeline.

#ifndef SDMIMO_RATE_HPP
#define SDMIMO_RATE_HPP

#include "sdmimo/estimator.hpp"

namespace sdmimo {

enum class Receiver { Mrc, Zf, Mmse };

const char *receiver_tag(Receiver r);

// Data-phase front-end model. The recursion seed is C_xd ~ K rho_d C_G + C_N
// (channel hardening approximation for G G^H); the feedback runs over a
// single M-sample block, so the recursion resets only at the first antenna.
struct DataPhaseModel {
    AdcMode mode = AdcMode::Unquantized;
    double rho_d = 0.0;
    arma::uword M = 0, K = 0;
    double psi = 0.0;
    QuantizerModel qm;
    QuantizerState state;  // length M
    arma::cx_mat C_xd;     // K rho_d C_G + C_N
    arma::cx_mat A_q;      // U_d^{-1} C_qd U_d^{-H}; zero when unquantized
    arma::cx_mat C_ntilde; // C_N + A_q, composite noise covariance
    arma::cx_mat C_ntilde_chol;
};

DataPhaseModel build_data_phase(const Scenario &sc, AdcMode mode, double rho_d,
                                const EstimatorOptions &opts = {});

// Closed-form MRC (W = G_hat) rate for equal per-user statistics:
//   SINR = rho_d Tr(C_cross)^2 / ( rho_d K Tr(C_hat C_G)
//          + Tr(C_hat C_N) + Tr(C_hat A_q) ),
// exact for jointly Gaussian (g_hat, g): the receiver-uncertainty and
// per-interferer powers both equal Tr(C_hat C_G) regardless of the
// cross-covariance, and E[g_hat^H g] = Tr(C_cross).
double mrc_rate(const arma::cx_mat &C_cross_block, const arma::cx_mat &C_hat_block,
                const arma::cx_mat &C_G, const arma::cx_mat &C_N,
                const arma::cx_mat &A_q, double rho_d, arma::uword K);

// Semi-analytic ZF rate. W = C_nt^{-1} G_hat (G_hat^H C_nt^{-1} G_hat)^{-1}
// satisfies W^H G_hat = I, so the desired power is exactly rho_d and
//   SINR_k = rho_d / ( rho_d K E[w_k^H C_eps w_k] + E[(X^{-1})_kk] ),
// X = G_hat^H C_nt^{-1} G_hat, with both expectations taken empirically over
// n_draws Gaussian channel-estimate draws.
arma::vec zf_rate(const EstimatorModel &em, const DataPhaseModel &dp, int n_draws,
                  Rng &rng);

// W = (rho_d G_hat G_hat^H + rho_d C_eps + C_nt)^{-1} G_hat.
arma::cx_mat mmse_receiver(const arma::cx_mat &G_hat, const arma::cx_mat &C_eps_block,
                           const arma::cx_mat &C_ntilde, double rho_d);

// Monte Carlo evaluation of the five-term decomposition over joint draws of
// (g, g_hat, n_d, q_d); the quantization noise is realized by running the
// data-phase front-end on the actual transmitted symbols, and
// U_d^{-1} q_d = y_d - x_d by the loop identity. With perfect_csi the
// receiver uses W built from G instead of G_hat.
struct RateTerms {
    arma::mat terms;        // K x 5: desired, uncertainty, MUI, noise, quantization
    arma::vec sinr;         // per user
    arma::vec rates;        // log2(1 + sinr)
    arma::vec output_power; // mean |s_hat_k|^2
    arma::vec term_sum;     // sum of the five terms (law-of-total-variance check)
};

RateTerms empirical_rate_terms(Receiver receiver, const Scenario &sc,
                               const EstimatorModel &em, const DataPhaseModel &dp,
                               int n_draws, Rng &rng, bool perfect_csi = false);

// Sum spectral efficiency with pilot overhead: SE = (T - N)/T sum_k R_k.
double sum_se(const arma::vec &rates, arma::uword T, arma::uword N);

} // namespace sdmimo

#endif // SDMIMO_RATE_HPP
