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

#include "sdmimo/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace sdmimo {

const char *receiver_tag(Receiver r) {
    switch (r) {
    case Receiver::Mrc: return "mrc";
    case Receiver::Zf: return "zf";
    case Receiver::Mmse: return "mmse";
    }
    return "?";
}

DataPhaseModel build_data_phase(const Scenario &sc, AdcMode mode, double rho_d,
                                const EstimatorOptions &opts) {
    DataPhaseModel dp;
    dp.mode = mode;
    dp.rho_d = rho_d;
    dp.M = sc.geom.M;
    dp.K = sc.geom.K;
    dp.psi = sc.geom.psi;
    dp.qm = make_quantizer_model(mode, opts.beta);
    dp.C_xd = static_cast<double>(dp.K) * rho_d * sc.C_G() + sc.C_N();
    const arma::vec sigma_x2 = arma::real(dp.C_xd.diag());

    if (!is_quantized(mode)) {
        dp.state = power_recursion(sigma_x2, dp.M, dp.qm);
        dp.A_q = arma::cx_mat(dp.M, dp.M, arma::fill::zeros);
    } else if (!has_feedback(mode)) {
        dp.state = power_recursion(sigma_x2, dp.M, dp.qm);
        dp.A_q = cov_y_conv_exact(dp.C_xd, dp.state, dp.qm) - dp.C_xd;
    } else if (opts.calibration == FrontEndCalibration::Recursion) {
        dp.state = power_recursion(sigma_x2, dp.M, dp.qm);
        dp.A_q = cov_y_block(dp.C_xd, dp.state.sigma_q2, dp.psi, mode) - dp.C_xd;
    } else {
        const CalibratedFrontEnd cal =
            calibrate_front_end(dp.C_xd, dp.psi, dp.qm, opts.cal_rounds, opts.cal_trials,
                                opts.cov_trials, opts.cal_seed ^ 0xDA7AULL);
        dp.state = cal.state;
        const arma::cx_mat u_inv = build_feedback(dp.M, 1, dp.psi).U_d_inv();
        dp.A_q = u_inv * cal.C_q * u_inv.t();
    }
    dp.A_q = 0.5 * (dp.A_q + dp.A_q.t());
    dp.C_ntilde = sc.C_N() + dp.A_q;
    dp.C_ntilde = 0.5 * (dp.C_ntilde + dp.C_ntilde.t());
    if (!arma::chol(dp.C_ntilde_chol, dp.C_ntilde, "lower")) {
        throw std::runtime_error("build_data_phase: composite noise covariance not PD");
    }
    return dp;
}

double mrc_rate(const arma::cx_mat &C_cross_block, const arma::cx_mat &C_hat_block,
                const arma::cx_mat &C_G, const arma::cx_mat &C_N,
                const arma::cx_mat &A_q, double rho_d, arma::uword K) {
    const double t_cross = arma::trace(C_cross_block).real();
    if (arma::trace(C_hat_block).real() <= 0.0 || t_cross == 0.0) {
        return 0.0;
    }
    const double signal = rho_d * t_cross * t_cross;
    const double interference =
        rho_d * static_cast<double>(K) * arma::trace(C_hat_block * C_G).real();
    const double noise = arma::trace(C_hat_block * C_N).real();
    const double quant = arma::trace(C_hat_block * A_q).real();
    return std::log2(1.0 + signal / (interference + noise + quant));
}

namespace {

arma::cx_mat herm_solve(const arma::cx_mat &chol_lower, const arma::cx_mat &B) {
    arma::cx_mat z = arma::solve(arma::trimatl(chol_lower), B);
    return arma::solve(arma::trimatu(chol_lower.t()), z);
}

arma::cx_mat zf_receiver(const arma::cx_mat &G_hat, const arma::cx_mat &c_nt_chol) {
    const arma::cx_mat wn = herm_solve(c_nt_chol, G_hat); // C_nt^{-1} G_hat
    const arma::cx_mat x = G_hat.t() * wn;                // G^H C_nt^{-1} G
    return arma::solve(x.t(), wn.t()).t();                // wn x^{-1}
}

} // namespace

arma::vec zf_rate(const EstimatorModel &em, const DataPhaseModel &dp, int n_draws,
                  Rng &rng) {
    const arma::uword K = em.K;
    arma::cx_vec mean_a(K, arma::fill::zeros); // w_k^H E[g_k | G_hat]
    arma::vec abs2_a(K, arma::fill::zeros);
    arma::vec mui(K, arma::fill::zeros);
    arma::vec inv_kk(K, arma::fill::zeros);
    arma::vec w_ce_w(K, arma::fill::zeros);
    for (int d = 0; d < n_draws; ++d) {
        const arma::cx_mat G_hat = em.C_hat_factor * rng.cgauss_mat(em.M, K);
        const arma::cx_mat wn = herm_solve(dp.C_ntilde_chol, G_hat);
        const arma::cx_mat x = G_hat.t() * wn;
        arma::cx_mat xi;
        if (!arma::inv(xi, x)) {
            // Ill-conditioned draw: effectively zero rate contribution.
            inv_kk += arma::vec(K, arma::fill::value(1e30));
            mean_a += arma::cx_vec(K, arma::fill::ones);
            abs2_a += arma::vec(K, arma::fill::ones);
            continue;
        }
        const arma::cx_mat w = wn * xi; // ZF receiver
        // Conditional-mean channel given the estimate; identity when the
        // estimator weights are matched, in which case w^H G_tilde = I.
        const arma::cx_mat g_tilde = em.matched ? G_hat : arma::cx_mat(em.g_regression * G_hat);
        const arma::cx_mat wg = w.t() * g_tilde;
        for (arma::uword k = 0; k < K; ++k) {
            mean_a(k) += wg(k, k);
            abs2_a(k) += std::norm(wg(k, k));
            for (arma::uword i = 0; i < K; ++i) {
                if (i != k) {
                    mui(k) += std::norm(wg(k, i));
                }
            }
            inv_kk(k) += xi(k, k).real();
            w_ce_w(k) += arma::cdot(w.col(k), em.C_eps_block * w.col(k)).real();
        }
    }
    mean_a /= static_cast<double>(n_draws);
    abs2_a /= n_draws;
    mui /= n_draws;
    inv_kk /= n_draws;
    w_ce_w /= n_draws;

    arma::vec rates(K);
    for (arma::uword k = 0; k < K; ++k) {
        const double signal = dp.rho_d * std::norm(mean_a(k));
        const double uncertainty = dp.rho_d * (abs2_a(k) - std::norm(mean_a(k)) + w_ce_w(k));
        const double inter =
            dp.rho_d * (mui(k) + static_cast<double>(K - 1) * w_ce_w(k));
        const double denom = uncertainty + inter + inv_kk(k);
        rates(k) = std::log2(1.0 + signal / denom);
    }
    return rates;
}

arma::cx_mat mmse_receiver(const arma::cx_mat &G_hat, const arma::cx_mat &C_eps_block,
                           const arma::cx_mat &C_ntilde, double rho_d) {
    const arma::cx_mat a =
        rho_d * G_hat * G_hat.t() + rho_d * C_eps_block + C_ntilde;
    return arma::solve(a, G_hat);
}

RateTerms empirical_rate_terms(Receiver receiver, const Scenario &sc,
                               const EstimatorModel &em, const DataPhaseModel &dp,
                               int n_draws, Rng &rng, bool perfect_csi) {
    const arma::uword K = sc.geom.K;
    const double rho_d = dp.rho_d;

    arma::cx_vec mean_a(K, arma::fill::zeros); // w_k^H g_k
    arma::vec abs2_a(K, arma::fill::zeros);
    arma::vec mui(K, arma::fill::zeros);
    arma::vec noise(K, arma::fill::zeros);
    arma::vec quant(K, arma::fill::zeros);
    arma::vec out_pow(K, arma::fill::zeros);

    for (int d = 0; d < n_draws; ++d) {
        const arma::cx_mat G = draw_channel_matrix(sc, rng);
        arma::cx_mat G_hat;
        if (perfect_csi) {
            G_hat = G;
        } else {
            const arma::cx_mat X =
                received_pilot_block(G, sc.phi_t, sc.rho, sc.noise_chol, rng);
            G_hat = lmmse_estimate(em, X);
        }

        const arma::cx_vec s = rng.cgauss_vec(K);
        const arma::cx_vec n_d = sc.noise_chol * rng.cgauss_vec(sc.geom.M);
        const arma::cx_vec x_d = std::sqrt(rho_d) * G * s + n_d;
        const arma::cx_vec y_d = sd_forward(x_d, dp.M, dp.psi, dp.qm, dp.state);
        const arma::cx_vec u = y_d - x_d; // U_d^{-1} q_d

        arma::cx_mat w;
        switch (receiver) {
        case Receiver::Mrc: w = G_hat; break;
        case Receiver::Zf: w = zf_receiver(G_hat, dp.C_ntilde_chol); break;
        case Receiver::Mmse:
            w = mmse_receiver(G_hat, em.C_eps_block, dp.C_ntilde, rho_d);
            break;
        }

        const arma::cx_mat wg = w.t() * G;     // K x K
        const arma::cx_vec wn = w.t() * n_d;   // K
        const arma::cx_vec wu = w.t() * u;     // K
        const arma::cx_vec s_hat = w.t() * y_d;
        for (arma::uword k = 0; k < K; ++k) {
            mean_a(k) += wg(k, k);
            abs2_a(k) += std::norm(wg(k, k));
            for (arma::uword i = 0; i < K; ++i) {
                if (i != k) {
                    mui(k) += std::norm(wg(k, i));
                }
            }
            noise(k) += std::norm(wn(k));
            quant(k) += std::norm(wu(k));
            out_pow(k) += std::norm(s_hat(k));
        }
    }

    RateTerms rt;
    rt.terms.set_size(K, 5);
    rt.sinr.set_size(K);
    rt.rates.set_size(K);
    rt.output_power.set_size(K);
    rt.term_sum.set_size(K);
    for (arma::uword k = 0; k < K; ++k) {
        const std::complex<double> ma = mean_a(k) / static_cast<double>(n_draws);
        const double desired = rho_d * std::norm(ma);
        const double uncertainty = rho_d * (abs2_a(k) / n_draws - std::norm(ma));
        const double inter = rho_d * mui(k) / n_draws;
        const double add_noise = noise(k) / n_draws;
        const double q_noise = quant(k) / n_draws;
        rt.terms(k, 0) = desired;
        rt.terms(k, 1) = uncertainty;
        rt.terms(k, 2) = inter;
        rt.terms(k, 3) = add_noise;
        rt.terms(k, 4) = q_noise;
        rt.sinr(k) = desired / (uncertainty + inter + add_noise + q_noise);
        rt.rates(k) = std::log2(1.0 + rt.sinr(k));
        rt.output_power(k) = out_pow(k) / n_draws;
        rt.term_sum(k) = desired + uncertainty + inter + add_noise + q_noise;
    }
    return rt;
}

double sum_se(const arma::vec &rates, arma::uword T, arma::uword N) {
    if (T < N) {
        throw std::invalid_argument("sum_se: coherence interval shorter than pilots");
    }
    const double factor =
        static_cast<double>(T - N) / static_cast<double>(T);
    return factor * arma::sum(rates);
}

} // namespace sdmimo
