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

#include "sdmimo/sigma_delta.hpp"
#include "sdmimo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdmimo {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
} // namespace

const char *adc_tag(AdcMode m) {
    switch (m) {
    case AdcMode::SigmaDelta1Bit: return "sd-1bit";
    case AdcMode::SigmaDelta2Bit: return "sd-2bit";
    case AdcMode::Conv1Bit: return "conv-1bit";
    case AdcMode::Conv2Bit: return "conv-2bit";
    case AdcMode::Unquantized: return "unquantized";
    }
    return "?";
}

double one_bit_beta_limit() { return 2.0 / kSqrtPi; }

arma::cx_mat FeedbackStructure::shift() const {
    arma::cx_mat s(M, M, arma::fill::zeros);
    const std::complex<double> w = std::polar(1.0, -psi);
    for (arma::uword p = 1; p < M; ++p) {
        s(p, p - 1) = w;
    }
    return s;
}

arma::cx_mat FeedbackStructure::V_d() const {
    arma::cx_mat v(M, M, arma::fill::zeros);
    for (arma::uword p = 0; p < M; ++p) {
        for (arma::uword q = 0; q < p; ++q) {
            v(p, q) = std::polar(1.0, -psi * static_cast<double>(p - q));
        }
    }
    return v;
}

arma::cx_mat FeedbackStructure::U_d() const {
    return arma::cx_mat(M, M, arma::fill::eye) + V_d();
}

arma::cx_mat FeedbackStructure::U_d_inv() const {
    return arma::cx_mat(M, M, arma::fill::eye) - shift();
}

FeedbackStructure build_feedback(arma::uword M, arma::uword N, double psi) {
    if (M < 1 || N < 1) {
        throw std::invalid_argument("build_feedback: M and N must be >= 1");
    }
    return FeedbackStructure{M, N, psi};
}

QuantizerModel make_quantizer_model(AdcMode mode, double beta) {
    QuantizerModel qm;
    qm.mode = mode;
    qm.beta = beta;
    if (adc_bits(mode) == 1) {
        if (!(beta >= 1.0 && beta < one_bit_beta_limit())) {
            throw std::invalid_argument("quantizer: need 1 <= beta < 2/sqrt(pi)");
        }
        // sign quantizer == two-level quantizer with levels +-1
        qm.levels.bits = 1;
        qm.levels.levels = {-1.0, 1.0};
        qm.levels.lo = {-std::numeric_limits<double>::infinity(), 0.0};
        qm.levels.hi = {0.0, std::numeric_limits<double>::infinity()};
    } else if (adc_bits(mode) == 2) {
        qm.levels = lloyd_max(2);
    } else {
        qm.slope_sum = 0.0;
        qm.level_power = 0.0;
        return qm;
    }
    qm.slope_sum = 0.0;
    for (std::size_t i = 1; i < qm.levels.bins(); ++i) {
        qm.slope_sum += (qm.levels.levels[i] - qm.levels.levels[i - 1]) *
                        std::exp(-0.5 * qm.levels.lo[i] * qm.levels.lo[i]);
    }
    qm.level_power = 0.0;
    for (std::size_t i = 0; i < qm.levels.bins(); ++i) {
        const double mass = std_normal_cdf(qm.levels.hi[i]) - std_normal_cdf(qm.levels.lo[i]);
        qm.level_power += qm.levels.levels[i] * qm.levels.levels[i] * mass;
    }
    return qm;
}

double alpha_one_bit(double sigma_r2, double beta) {
    return beta * std::sqrt(kPi * sigma_r2) / 2.0;
}

double alpha_two_bit(double sigma_r, const QuantizerLevels &levels) {
    double slope = 0.0;
    for (std::size_t i = 1; i < levels.bins(); ++i) {
        slope += (levels.levels[i] - levels.levels[i - 1]) *
                 std::exp(-0.5 * levels.lo[i] * levels.lo[i]);
    }
    return kSqrtPi * sigma_r / slope;
}

std::complex<double> quantize_one_bit(std::complex<double> r, double alpha) {
    const double re = r.real() >= 0.0 ? alpha : -alpha;
    const double im = r.imag() >= 0.0 ? alpha : -alpha;
    return {re, im};
}

namespace {

inline double quantize_component(double u, double alpha, double scale,
                                 const QuantizerLevels &levels) {
    std::size_t bin = 0;
    while (bin + 1 < levels.bins() && u > scale * levels.hi[bin]) {
        ++bin;
    }
    return alpha * levels.levels[bin];
}

} // namespace

std::complex<double> quantize_two_bit(std::complex<double> r, double alpha,
                                      double sigma_r, const QuantizerLevels &levels) {
    const double scale = sigma_r / std::sqrt(2.0);
    return {quantize_component(r.real(), alpha, scale, levels),
            quantize_component(r.imag(), alpha, scale, levels)};
}

QuantizerState power_recursion(const arma::vec &sigma_x2, arma::uword M,
                               const QuantizerModel &qm) {
    const arma::uword n = sigma_x2.n_elem;
    if (M < 1 || n % M != 0) {
        throw std::invalid_argument("power_recursion: input length must be a multiple of M");
    }
    QuantizerState st;
    st.sigma_r2.set_size(n);
    st.sigma_y2.set_size(n);
    st.sigma_q2.set_size(n);
    st.alpha.set_size(n);

    if (!is_quantized(qm.mode)) {
        st.sigma_r2 = sigma_x2;
        st.sigma_y2 = sigma_x2;
        st.sigma_q2.zeros();
        st.alpha.ones();
        return st;
    }

    const bool feedback = has_feedback(qm.mode);
    for (arma::uword m = 0; m < n; ++m) {
        const bool fed = feedback && (m % M != 0);
        st.sigma_r2(m) = sigma_x2(m) + (fed ? st.sigma_q2(m - 1) : 0.0);
        // The tail-compensation factor applies only where feedback noise
        // enters; a Gaussian input antenna takes beta = 1.
        const double beta_eff = (adc_bits(qm.mode) == 1 && fed) ? qm.beta : 1.0;
        st.alpha(m) = beta_eff * kSqrtPi * std::sqrt(st.sigma_r2(m)) / qm.slope_sum;
        st.sigma_y2(m) = 2.0 * st.alpha(m) * st.alpha(m) * qm.level_power;
        st.sigma_q2(m) = st.sigma_y2(m) - st.sigma_r2(m);
        if (st.sigma_q2(m) < 0.0) {
            throw std::runtime_error("power_recursion: negative quantization noise power "
                                     "(miscalibrated quantizer model)");
        }
    }
    return st;
}

arma::cx_vec sd_forward(const arma::cx_vec &x, arma::uword M, double psi,
                        const QuantizerModel &qm, const QuantizerState &state) {
    if (!is_quantized(qm.mode)) {
        return x;
    }
    const arma::uword n = x.n_elem;
    if (state.alpha.n_elem != n || M < 1 || n % M != 0) {
        throw std::invalid_argument("sd_forward: state/input size mismatch");
    }
    const bool feedback = has_feedback(qm.mode);
    const bool one_bit = adc_bits(qm.mode) == 1;
    const std::complex<double> w = std::polar(1.0, -psi);

    arma::cx_vec y(n);
    std::complex<double> carry = 0.0; // r_{m-1} - y_{m-1}
    for (arma::uword m = 0; m < n; ++m) {
        std::complex<double> r = x(m);
        if (feedback && (m % M != 0)) {
            r += w * carry;
        }
        y(m) = one_bit ? quantize_one_bit(r, state.alpha(m))
                       : quantize_two_bit(r, state.alpha(m),
                                          std::sqrt(state.sigma_r2(m)), qm.levels);
        carry = r - y(m);
    }
    return y;
}

arma::cx_mat cov_y_block(const arma::cx_mat &B_x, const arma::vec &sigma_q2_block,
                         double psi, AdcMode mode) {
    arma::cx_mat b_y = B_x;
    if (!is_quantized(mode)) {
        return b_y;
    }
    const arma::uword M = B_x.n_rows;
    if (sigma_q2_block.n_elem != M) {
        throw std::invalid_argument("cov_y_block: sigma_q2 length mismatch");
    }
    if (!has_feedback(mode)) {
        for (arma::uword m = 0; m < M; ++m) {
            b_y(m, m) += sigma_q2_block(m);
        }
        return b_y;
    }
    // (I - S) diag(d) (I - S)^H is Hermitian tridiagonal:
    //   main diagonal  d_m + d_{m-1}
    //   subdiagonal   -e^{-j psi} d_{m-1}
    const std::complex<double> w = std::polar(1.0, -psi);
    for (arma::uword m = 0; m < M; ++m) {
        b_y(m, m) += sigma_q2_block(m) + (m > 0 ? sigma_q2_block(m - 1) : 0.0);
        if (m > 0) {
            b_y(m, m - 1) += -w * sigma_q2_block(m - 1);
            b_y(m - 1, m) += -std::conj(w) * sigma_q2_block(m - 1);
        }
    }
    return b_y;
}

double quantizer_cross_moment(double rho, const QuantizerLevels &levels) {
    if (levels.bits == 1) {
        return 2.0 / kPi * std::asin(std::clamp(rho, -1.0, 1.0));
    }
    // L(a,b) = P(U > a, V > b) on the distinct bin edges, then
    // E[Q(u)Q(v)] = sum_ij nu_i nu_j P(u in bin_i, v in bin_j).
    const std::size_t nb = levels.bins();
    arma::mat upper(nb + 1, nb + 1);
    auto edge = [&](std::size_t i) {
        return i == 0 ? -std::numeric_limits<double>::infinity() : levels.lo[i];
    };
    for (std::size_t a = 0; a <= nb; ++a) {
        for (std::size_t b = 0; b <= nb; ++b) {
            const double ea = a == nb ? std::numeric_limits<double>::infinity() : edge(a);
            const double eb = b == nb ? std::numeric_limits<double>::infinity() : edge(b);
            upper(a, b) = bvn_upper(ea, eb, rho);
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double p = upper(i, j) - upper(i, j + 1) - upper(i + 1, j) + upper(i + 1, j + 1);
            acc += levels.levels[i] * levels.levels[j] * p;
        }
    }
    return acc;
}

arma::cx_mat cov_y_conv_exact(const arma::cx_mat &C_x, const QuantizerState &state,
                              const QuantizerModel &qm) {
    const arma::uword n = C_x.n_rows;
    if (state.alpha.n_elem != n) {
        throw std::invalid_argument("cov_y_conv_exact: state size mismatch");
    }
    arma::cx_mat c_y(n, n);
    for (arma::uword m = 0; m < n; ++m) {
        c_y(m, m) = 2.0 * state.alpha(m) * state.alpha(m) * qm.level_power;
        for (arma::uword k = m + 1; k < n; ++k) {
            const double den = std::sqrt(state.sigma_r2(m) * state.sigma_r2(k));
            const double re = std::clamp(C_x(m, k).real() / den, -1.0, 1.0);
            const double im = std::clamp(C_x(m, k).imag() / den, -1.0, 1.0);
            const std::complex<double> g(quantizer_cross_moment(re, qm.levels),
                                         quantizer_cross_moment(im, qm.levels));
            c_y(m, k) = 2.0 * state.alpha(m) * state.alpha(k) * g;
            c_y(k, m) = std::conj(c_y(m, k));
        }
    }
    return c_y;
}

arma::cx_mat cov_y_dense(const arma::cx_mat &C_x, const arma::vec &sigma_q2,
                         arma::uword M, double psi, AdcMode mode) {
    const arma::uword n = C_x.n_rows;
    if (sigma_q2.n_elem != n || n % M != 0) {
        throw std::invalid_argument("cov_y_dense: size mismatch");
    }
    arma::cx_mat c_y = C_x;
    if (!is_quantized(mode)) {
        return c_y;
    }
    for (arma::uword b = 0; b < n / M; ++b) {
        const arma::span sp(b * M, (b + 1) * M - 1);
        c_y(sp, sp) = cov_y_block(c_y(sp, sp), sigma_q2.subvec(b * M, (b + 1) * M - 1),
                                  psi, mode);
    }
    return c_y;
}

namespace {

struct LoopMoments {
    arma::vec rr;    // sum |r_m|^2
    arma::vec abs_r; // sum |Re r_m| + |Im r_m|
    arma::vec r_qu;  // sum Re( r_m conj(Q_unit(r_m)) )
    arma::vec qu2;   // sum |Q_unit(r_m)|^2
    arma::cx_mat qq; // sum q q^H
    explicit LoopMoments(arma::uword M)
        : rr(M, arma::fill::zeros), abs_r(M, arma::fill::zeros),
          r_qu(M, arma::fill::zeros), qu2(M, arma::fill::zeros),
          qq(M, M, arma::fill::zeros) {}
};

void run_loop_column(const arma::cx_vec &x, double psi, const QuantizerModel &qm,
                     const QuantizerState &st, LoopMoments &mom,
                     arma::subview_col<std::complex<double>> *q_out) {
    const arma::uword M = x.n_elem;
    const bool one_bit = adc_bits(qm.mode) == 1;
    const std::complex<double> w = std::polar(1.0, -psi);
    std::complex<double> carry = 0.0;
    for (arma::uword m = 0; m < M; ++m) {
        std::complex<double> r = x(m);
        if (m > 0) {
            r += w * carry;
        }
        const std::complex<double> y =
            one_bit ? quantize_one_bit(r, st.alpha(m))
                    : quantize_two_bit(r, st.alpha(m), std::sqrt(st.sigma_r2(m)), qm.levels);
        carry = r - y;
        mom.rr(m) += std::norm(r);
        mom.abs_r(m) += std::abs(r.real()) + std::abs(r.imag());
        const std::complex<double> qu = y / st.alpha(m);
        mom.r_qu(m) += (r * std::conj(qu)).real();
        mom.qu2(m) += std::norm(qu);
        if (q_out != nullptr) {
            (*q_out)(m) = y - r;
        }
    }
}

} // namespace

CalibratedFrontEnd calibrate_front_end(const arma::cx_mat &B_x, double psi,
                                       const QuantizerModel &qm, int rounds,
                                       int cal_trials, int cov_trials,
                                       std::uint64_t seed) {
    if (!has_feedback(qm.mode)) {
        throw std::invalid_argument("calibrate_front_end: feedback modes only");
    }
    const arma::uword M = B_x.n_rows;
    const arma::cx_mat chol = arma::chol(B_x, "lower");

    // Inputs are drawn in batches so the correlating matrix product runs as
    // a single gemm per chunk.
    constexpr int kBatch = 256;
    const auto draw_batch = [&](std::uint64_t stream, int chunk, int cols) {
        Rng rng = Rng::substream(stream, static_cast<std::uint64_t>(chunk));
        return arma::cx_mat(chol * rng.cgauss_mat(M, cols));
    };

    QuantizerState st = power_recursion(arma::real(B_x.diag()), M, qm);
    for (int round = 0; round < rounds; ++round) {
        // The final round pins the gains, so it gets a larger sample to keep
        // the residual fixed-point noise below the per-antenna gain target.
        const int trials = (round + 1 == rounds) ? 4 * cal_trials : cal_trials;
        LoopMoments mom(M);
        const std::uint64_t stream = seed + 131 * static_cast<std::uint64_t>(round);
        for (int done = 0; done < trials;) {
            const int cols = std::min(kBatch, trials - done);
            const arma::cx_mat x = draw_batch(stream, done / kBatch, cols);
            for (int c = 0; c < cols; ++c) {
                run_loop_column(x.col(c), psi, qm, st, mom, nullptr);
            }
            done += cols;
        }
        // Damped updates: the two-bit loop couples the gains to the bin
        // scaling through sigma_r, and the undamped map oscillates.
        const double relax = 0.6;
        for (arma::uword m = 0; m < M; ++m) {
            const double sr2 = mom.rr(m) / trials;
            // Unit Bussgang gain: alpha = E|r|^2 / (E|Re r| + E|Im r|) for
            // the sign quantizer, alpha = E|r|^2 / E[Re(r Q_unit(r)^*)] in
            // general.
            const double alpha_target = adc_bits(qm.mode) == 1
                                            ? sr2 / (mom.abs_r(m) / trials)
                                            : sr2 / (mom.r_qu(m) / trials);
            st.sigma_r2(m) += relax * (sr2 - st.sigma_r2(m));
            st.alpha(m) += relax * (alpha_target - st.alpha(m));
            st.sigma_y2(m) = st.alpha(m) * st.alpha(m) * (mom.qu2(m) / trials);
            st.sigma_q2(m) = st.sigma_y2(m) - st.sigma_r2(m);
        }
    }

    LoopMoments mom(M);
    for (int done = 0; done < cov_trials;) {
        const int cols = std::min(kBatch, cov_trials - done);
        const arma::cx_mat x = draw_batch(seed ^ 0xC0FFEEULL, done / kBatch, cols);
        arma::cx_mat qbuf(M, cols);
        for (int c = 0; c < cols; ++c) {
            auto qc = qbuf.col(c);
            run_loop_column(x.col(c), psi, qm, st, mom, &qc);
        }
        mom.qq += qbuf * qbuf.t();
        done += cols;
    }
    CalibratedFrontEnd cal;
    cal.C_q = mom.qq / cov_trials;
    cal.C_q = 0.5 * (cal.C_q + cal.C_q.t());
    for (arma::uword m = 0; m < M; ++m) {
        st.sigma_q2(m) = cal.C_q(m, m).real();
        st.sigma_y2(m) = st.sigma_r2(m) + st.sigma_q2(m);
    }
    cal.state = st;
    return cal;
}

} // namespace sdmimo
