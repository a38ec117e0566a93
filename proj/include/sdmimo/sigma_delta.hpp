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
// First-order spatial Sigma-Delta ADC front-end. Antennas are quantized in
// sequence; the quantization error of antenna m-1, phase shifted by -psi, is
// added to the input of antenna m:
//
//   r_m = x_m + e^{-j psi} (r_{m-1} - y_{m-1}),   y_m = Q(r_m),
//
// restarting at the first antenna of every pilot sample. In matrix form
// r = U x - V y with U = I_N (x) (I_M + V_d); the output admits the
// equivalent linear model y = x + U^{-1} q once each quantizer's output
// scale alpha is chosen so that the element-wise Bussgang gain
// E[r_m y_m^*] / E|r_m|^2 equals one.

#ifndef SDMIMO_SIGMA_DELTA_HPP
#define SDMIMO_SIGMA_DELTA_HPP

#include <armadillo>
#include <complex>

#include "sdmimo/numerics.hpp"

namespace sdmimo {

// Front-end variants compared throughout: sigma-delta vs. memoryless
// ("conventional") quantization at 1 or 2 bits, plus the unquantized
// reference.
enum class AdcMode {
    SigmaDelta1Bit,
    SigmaDelta2Bit,
    Conv1Bit,
    Conv2Bit,
    Unquantized,
};

constexpr bool has_feedback(AdcMode m) {
    return m == AdcMode::SigmaDelta1Bit || m == AdcMode::SigmaDelta2Bit;
}
constexpr bool is_quantized(AdcMode m) { return m != AdcMode::Unquantized; }
constexpr int adc_bits(AdcMode m) {
    return (m == AdcMode::SigmaDelta1Bit || m == AdcMode::Conv1Bit) ? 1
           : (m == AdcMode::SigmaDelta2Bit || m == AdcMode::Conv2Bit) ? 2
                                                                      : 0;
}
const char *adc_tag(AdcMode m);

// Upper end of the stable one-bit overload range: beta < 2/sqrt(pi) keeps
// the quantization noise power below the quantizer input power.
double one_bit_beta_limit();

// Feedback matrices for an M-antenna array and N pilot samples. Stored
// implicitly; the dense accessors exist for tests and small problems.
// Identities: U_d = (I - S)^{-1}, U_d^{-1} = I - S, V_d U_d^{-1} = S with
// S the unit subdiagonal shift scaled by e^{-j psi}.
struct FeedbackStructure {
    arma::uword M = 0;
    arma::uword N = 1;
    double psi = 0.0;

    arma::cx_mat shift() const;   // S
    arma::cx_mat V_d() const;     // per-block feedback weights
    arma::cx_mat U_d() const;     // I + V_d
    arma::cx_mat U_d_inv() const; // I - S
};

FeedbackStructure build_feedback(arma::uword M, arma::uword N, double psi);

// Static quantizer description: bit width, one-bit overload factor and the
// Lloyd-Max levels (2-bit). beta compensates the heavier-than-Gaussian tails
// that the error feedback induces, so it applies only at indices that
// receive feedback; the first antenna of each pilot sample sees a Gaussian
// input and uses beta = 1.
struct QuantizerModel {
    AdcMode mode = AdcMode::SigmaDelta1Bit;
    double beta = 1.05;
    QuantizerLevels levels; // 2-bit modes
    double slope_sum = 2.0; // sum_i (nu_i - nu_{i-1}) exp(-(nu_i^lo)^2 / 2)
    double level_power = 1.0; // E[Q(X)^2], X ~ N(0,1)
};

QuantizerModel make_quantizer_model(AdcMode mode, double beta);

// Output scale giving a unit element-wise Bussgang gain for a circularly
// symmetric Gaussian input of power sigma_r^2 ( alpha = beta sqrt(pi
// sigma_r^2)/2 for one bit ).
double alpha_one_bit(double sigma_r2, double beta);
double alpha_two_bit(double sigma_r, const QuantizerLevels &levels);

// Scalar quantizers, applied separately to real and imaginary parts.
// sign(0) = +1 for the one-bit case; the two-bit bins are half-open,
// ( sigma_r/sqrt(2) * lo_i, sigma_r/sqrt(2) * hi_i ].
std::complex<double> quantize_one_bit(std::complex<double> r, double alpha);
std::complex<double> quantize_two_bit(std::complex<double> r, double alpha,
                                      double sigma_r, const QuantizerLevels &levels);

// Per-index second-order state of the front-end, from the power recursion
//   sigma_r^2[m] = sigma_x^2[m] + sigma_q^2[m-1]   (reset at m = kM)
//   sigma_y^2[m] = 2 alpha^2[m] E[Q^2]
//   sigma_q^2[m] = sigma_y^2[m] - sigma_r^2[m]  >= 0.
struct QuantizerState {
    arma::vec sigma_r2;
    arma::vec sigma_y2;
    arma::vec sigma_q2;
    arma::vec alpha;
};

// sigma_x2 holds the diagonal of C_x, stacked column by column (length MN).
QuantizerState power_recursion(const arma::vec &sigma_x2, arma::uword M,
                               const QuantizerModel &qm);

// Run the front-end on a stacked input (length M*N), resetting the loop at
// the first antenna of each pilot sample. Unquantized mode returns x.
arma::cx_vec sd_forward(const arma::cx_vec &x, arma::uword M, double psi,
                        const QuantizerModel &qm, const QuantizerState &state);

// Per-sample-block covariance of y: C_y = C_x + U_d^{-1} C_q U_d^{-H}. The
// correction is tridiagonal for the sigma-delta modes (U_d^{-1} = I - S),
// diagonal for conventional quantization, zero when unquantized.
arma::cx_mat cov_y_block(const arma::cx_mat &B_x, const arma::vec &sigma_q2_block,
                         double psi, AdcMode mode);

// Dense MN x MN variant for the validation path.
arma::cx_mat cov_y_dense(const arma::cx_mat &C_x, const arma::vec &sigma_q2,
                         arma::uword M, double psi, AdcMode mode);

// Exact output covariance of a memoryless (no-feedback) quantizer driven by
// jointly Gaussian input with covariance C_x: entry (m,n) is
// 2 alpha_m alpha_n (g(Re rho_mn) + j g(Im rho_mn)) where g is the
// quantizer cross-moment of a standardized bivariate normal pair, evaluated
// through bivariate-normal rectangle probabilities (arcsine law for one
// bit). This is the covariance the conventional Bussgang LMMSE baselines
// use. Requires the state's alpha / sigma_r2 to match diag(C_x).
arma::cx_mat cov_y_conv_exact(const arma::cx_mat &C_x, const QuantizerState &state,
                              const QuantizerModel &qm);

// Quantizer cross-moment E[Q(u) Q(v)] for standardized bivariate normal
// (u, v) with correlation rho and the unit-variance-matched bins of `levels`
// (unit output levels). Exposed for tests.
double quantizer_cross_moment(double rho, const QuantizerLevels &levels);

// Fixed-point AGC calibration of a feedback front-end against a Gaussian
// input x ~ CN(0, B_x), one pilot sample at a time. Each round runs the
// actual loop and resets every output scale to the measured-moment value
// that makes the element-wise Bussgang gain one; a final pass measures the
// quantization noise covariance C_q = E[q q^H] with the frozen gains, using
// the exact loop identity q = U (y - x). Deterministic for a fixed seed.
struct CalibratedFrontEnd {
    QuantizerState state; // per antenna (length M)
    arma::cx_mat C_q;     // M x M, Hermitian
};

CalibratedFrontEnd calibrate_front_end(const arma::cx_mat &B_x, double psi,
                                       const QuantizerModel &qm, int rounds,
                                       int cal_trials, int cov_trials,
                                       std::uint64_t seed);

} // namespace sdmimo

#endif // SDMIMO_SIGMA_DELTA_HPP
