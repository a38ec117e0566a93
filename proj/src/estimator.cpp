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

#include "sdmimo/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace sdmimo {

namespace {

QuantizerState replicate_state(const QuantizerState &col, arma::uword N) {
    const arma::uword M = col.alpha.n_elem;
    QuantizerState full;
    full.alpha.set_size(M * N);
    full.sigma_r2.set_size(M * N);
    full.sigma_y2.set_size(M * N);
    full.sigma_q2.set_size(M * N);
    for (arma::uword c = 0; c < N; ++c) {
        full.alpha.subvec(c * M, (c + 1) * M - 1) = col.alpha;
        full.sigma_r2.subvec(c * M, (c + 1) * M - 1) = col.sigma_r2;
        full.sigma_y2.subvec(c * M, (c + 1) * M - 1) = col.sigma_y2;
        full.sigma_q2.subvec(c * M, (c + 1) * M - 1) = col.sigma_q2;
    }
    return full;
}

arma::cx_mat herm_solve(const arma::cx_mat &chol_lower, const arma::cx_mat &B) {
    arma::cx_mat z = arma::solve(arma::trimatl(chol_lower), B);
    return arma::solve(arma::trimatu(chol_lower.t()), z);
}

} // namespace

EstimatorModel build_estimator(const Scenario &sc, AdcMode mode,
                               const EstimatorOptions &opts) {
    EstimatorModel em;
    em.mode = mode;
    em.opts = opts;
    em.M = sc.geom.M;
    em.K = sc.geom.K;
    em.N = sc.geom.N;
    em.psi = sc.geom.psi;
    em.rho = sc.rho;
    em.phi_t = sc.phi_t;
    em.C_G = sc.C_G();
    em.qm = make_quantizer_model(mode, opts.beta);

    if (em.N != em.K) {
        throw std::invalid_argument("build_estimator: fast path requires N == K "
                                    "(use lmmse_estimate_dense otherwise)");
    }

    const arma::cx_mat B_x = cov_x_block(sc.rho, em.K, em.C_G, sc.C_N());
    const arma::vec sigma_x2 = arma::real(B_x.diag());
    em.matched = true;

    if (!is_quantized(mode)) {
        em.state = replicate_state(power_recursion(sigma_x2, em.M, em.qm), em.N);
        em.B_y = B_x;
        em.B_y_true = em.B_y;
    } else if (!has_feedback(mode)) {
        // Memoryless quantizer on a Gaussian input: closed-form gains and
        // exact output covariance. The 1-bit weights use the exact (arcsine)
        // covariance -- the classical Bussgang LMMSE -- while the 2-bit
        // baseline conventionally keeps the diagonal quantization-noise
        // model in its weights and is analyzed as a mismatched estimator.
        const QuantizerState col = power_recursion(sigma_x2, em.M, em.qm);
        em.B_y_true = cov_y_conv_exact(B_x, col, em.qm);
        if (adc_bits(mode) == 2) {
            em.B_y = cov_y_block(B_x, col.sigma_q2, em.psi, mode);
            em.matched = false;
        } else {
            em.B_y = em.B_y_true;
        }
        em.state = replicate_state(col, em.N);
    } else if (opts.calibration == FrontEndCalibration::Recursion) {
        const QuantizerState col = power_recursion(sigma_x2, em.M, em.qm);
        em.B_y = cov_y_block(B_x, col.sigma_q2, em.psi, mode);
        em.B_y_true = em.B_y;
        em.state = replicate_state(col, em.N);
    } else {
        const CalibratedFrontEnd cal =
            calibrate_front_end(B_x, em.psi, em.qm, opts.cal_rounds, opts.cal_trials,
                                opts.cov_trials, opts.cal_seed);
        const FeedbackStructure fb = build_feedback(em.M, 1, em.psi);
        const arma::cx_mat u_inv = fb.U_d_inv();
        em.B_y = B_x + u_inv * cal.C_q * u_inv.t();
        em.B_y = 0.5 * (em.B_y + em.B_y.t());
        em.B_y_true = em.B_y;
        em.state = replicate_state(cal.state, em.N);
    }

    if (!arma::chol(em.B_y_chol, em.B_y, "lower")) {
        throw std::runtime_error("build_estimator: C_y block is not positive definite");
    }

    // Joint second-order statistics of (g_hat, g) per user, valid for the
    // possibly mismatched weights:
    //   C_cross = rho N C_G B_y^{-1} C_G
    //   C_hat   = rho N C_G B_y^{-1} B_true B_y^{-1} C_G = W W^H,
    //             W = sqrt(rho N) C_G B_y^{-1} L_true
    //   C_eps   = C_G - 2 C_cross + C_hat.
    const arma::cx_mat byi_cg = herm_solve(em.B_y_chol, em.C_G); // B_y^{-1} C_G
    em.C_cross_block = em.rho * static_cast<double>(em.N) * em.C_G * byi_cg;
    em.C_cross_block = 0.5 * (em.C_cross_block + em.C_cross_block.t());

    arma::cx_mat l_true;
    if (!arma::chol(l_true, em.B_y_true, "lower")) {
        throw std::runtime_error("build_estimator: true C_y block is not positive definite");
    }
    em.C_hat_factor = std::sqrt(em.rho * static_cast<double>(em.N)) *
                      arma::cx_mat(byi_cg.t() * l_true);
    em.C_hat_block = em.C_hat_factor * em.C_hat_factor.t();
    em.C_hat_block = 0.5 * (em.C_hat_block + em.C_hat_block.t());
    em.C_eps_block = em.C_G - 2.0 * em.C_cross_block + em.C_hat_block;
    em.C_eps_block = 0.5 * (em.C_eps_block + em.C_eps_block.t());
    if (em.matched) {
        em.g_regression = arma::cx_mat(em.M, em.M, arma::fill::eye);
    } else {
        em.g_regression = em.C_cross_block * arma::pinv(em.C_hat_block);
    }
    em.ne_theory = theoretical_ne(em.C_G, em.C_hat_block, em.C_cross_block);
    return em;
}

arma::cx_mat lmmse_estimate(const EstimatorModel &em, const arma::cx_mat &X) {
    if (X.n_rows != em.M || X.n_cols != em.N) {
        throw std::invalid_argument("lmmse_estimate: block size mismatch");
    }
    const arma::cx_vec y = sd_forward(arma::vectorise(X), em.M, em.psi, em.qm, em.state);
    const arma::cx_mat Y = arma::reshape(y, em.M, em.N);
    // u_k = sqrt(rho) sum_n conj(phi_t(k,n)) B_y^{-1} y_n;  g_hat_k = C_G u_k
    const arma::cx_mat W = herm_solve(em.B_y_chol, Y);
    const arma::cx_mat U = std::sqrt(em.rho) * W * em.phi_t.t();
    return em.C_G * U;
}

double theoretical_ne(const arma::cx_mat &C_G, const arma::cx_mat &C_hat_block,
                      const arma::cx_mat &C_cross_block) {
    const double tr_g = arma::trace(C_G).real();
    const double tr_h = arma::trace(C_hat_block).real();
    const double tr_c = arma::trace(C_cross_block).real();
    if (tr_h <= 0.0 || tr_g <= 0.0) {
        return 1.0;
    }
    return 1.0 - tr_c * tr_c / (tr_h * tr_g);
}

void NeAccumulator::add(const arma::cx_mat &G, const arma::cx_mat &G_hat) {
    inner_ += arma::cdot(arma::vectorise(G_hat), arma::vectorise(G));
    norm_g_ += std::pow(arma::norm(arma::vectorise(G)), 2);
    norm_gh_ += std::pow(arma::norm(arma::vectorise(G_hat)), 2);
    ++n_;
}

double NeAccumulator::value() const {
    if (n_ == 0 || norm_g_ == 0.0 || norm_gh_ == 0.0) {
        return 1.0;
    }
    const double n = static_cast<double>(n_);
    const double ratio = std::norm(inner_ / n) / ((norm_gh_ / n) * (norm_g_ / n));
    return 1.0 - ratio;
}

TrialResult run_estimation_trial(const Scenario &sc, const EstimatorModel &em, Rng &rng) {
    TrialResult tr;
    tr.G = draw_channel_matrix(sc, rng);
    const arma::cx_mat X = received_pilot_block(tr.G, sc.phi_t, sc.rho, sc.noise_chol, rng);
    tr.G_hat = lmmse_estimate(em, X);
    return tr;
}

arma::cx_vec lmmse_estimate_dense(const arma::cx_vec &y,
                                  const std::vector<arma::cx_mat> &c_gk,
                                  const arma::cx_mat &phi_t, double rho,
                                  const arma::cx_mat &C_y, bool allow_jitter) {
    const arma::uword K = phi_t.n_rows;
    const arma::uword N = phi_t.n_cols;
    const arma::uword M = C_y.n_rows / N;
    if (c_gk.size() != K || C_y.n_rows != M * N || y.n_elem != M * N) {
        throw std::invalid_argument("lmmse_estimate_dense: size mismatch");
    }
    arma::cx_mat c_y = C_y;
    arma::cx_mat chol;
    if (!arma::chol(chol, c_y, "lower")) {
        if (!allow_jitter) {
            throw std::runtime_error("lmmse_estimate_dense: C_y not positive definite "
                                     "(jitter available on explicit opt-in)");
        }
        const double jitter = 1e-10 * arma::trace(c_y).real() / static_cast<double>(M * N);
        c_y += jitter * arma::cx_mat(M * N, M * N, arma::fill::eye);
        if (!arma::chol(chol, c_y, "lower")) {
            throw std::runtime_error("lmmse_estimate_dense: C_y not positive definite");
        }
    }
    arma::cx_vec w = arma::solve(arma::trimatl(chol), y);
    w = arma::solve(arma::trimatu(chol.t()), w);
    // g_hat_k = sqrt(rho) C_gk sum_n conj(phi_t(k,n)) w_n
    arma::cx_vec g_hat(M * K);
    const arma::cx_mat W = arma::reshape(w, M, N);
    for (arma::uword k = 0; k < K; ++k) {
        arma::cx_vec u(M, arma::fill::zeros);
        for (arma::uword n = 0; n < N; ++n) {
            u += std::conj(phi_t(k, n)) * W.col(n);
        }
        g_hat.subvec(k * M, (k + 1) * M - 1) = std::sqrt(rho) * c_gk[k] * u;
    }
    return g_hat;
}

} // namespace sdmimo
