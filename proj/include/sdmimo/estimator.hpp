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
// LMMSE channel estimation from the quantized array output:
//
//   g_hat = C_g Phi^H C_y^{-1} y,    C_y = C_x + U^{-1} C_q U^{-H}.
//
// The pilot phase with orthogonal pilots, N = K and equal user covariances
// makes every matrix block-diagonal with identical M x M blocks; all solves
// here run on a single block. A dense fallback for general pilots lives in
// lmmse_estimate_dense.

#ifndef SDMIMO_ESTIMATOR_HPP
#define SDMIMO_ESTIMATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sdmimo/scenario.hpp"
#include "sdmimo/sigma_delta.hpp"

namespace sdmimo {

// How the sigma-delta front-end model (per-antenna gains and quantization
// noise covariance) is obtained.
//  Recursion -- the closed-form Gaussian power recursion. Cheap, but the
//      error feedback makes the quantizer inputs non-Gaussian, and with
//      strongly correlated inputs the recursion drifts from the loop it
//      models by several percent per antenna.
//  Moment -- fixed-point AGC calibration: iterate short Monte Carlo runs of
//      the actual loop, setting each output scale to the measured-moment
//      value that makes the element-wise Bussgang gain exactly one, then
//      measure the per-block quantization noise covariance with the frozen
//      gains. Deterministic (fixed internal substreams), independent of the
//      experiment seed.
// Conventional modes need no calibration: their quantizer input is exactly
// Gaussian, so the gains and the full output covariance have closed forms.
enum class FrontEndCalibration { Recursion, Moment };

struct EstimatorOptions {
    double beta = 1.05;
    FrontEndCalibration calibration = FrontEndCalibration::Moment;
    int cal_rounds = 10;
    int cal_trials = 40000;  // per calibration round
    int cov_trials = 60000;  // for the measured C_q
    std::uint64_t cal_seed = 0x5dca11bULL;
};

// Precomputed estimation pipeline for one (scenario, ADC mode) pair.
//
// The estimator inverts its model covariance B_y; B_y_true is the actual
// second-order statistic of the front-end output. They coincide for every
// mode except the conventional 2-bit baseline, which by convention keeps the
// diagonal quantization-noise model in its weights; the joint statistics
// (C_hat, C_cross, C_eps) always describe the estimator that actually runs,
// so the theory traces remain exact either way.
struct EstimatorModel {
    AdcMode mode = AdcMode::Unquantized;
    EstimatorOptions opts;
    arma::uword M = 0, K = 0, N = 0;
    double psi = 0.0;
    double rho = 0.0;
    arma::cx_mat phi_t;
    arma::cx_mat C_G;
    QuantizerModel qm;
    QuantizerState state;       // per stacked index, length M*N
    arma::cx_mat B_y;           // model covariance in the estimator weights
    arma::cx_mat B_y_true;      // true per-sample covariance of y
    arma::cx_mat B_y_chol;      // lower Cholesky factor of B_y
    arma::cx_mat C_hat_block;   // E[ghat ghat^H] per user (Hermitian PSD)
    arma::cx_mat C_cross_block; // E[ghat g^H] per user; = C_hat when matched
    arma::cx_mat C_eps_block;   // E[(g-ghat)(g-ghat)^H] per user
    arma::cx_mat C_hat_factor;  // W with C_hat_block = W W^H, for Gaussian draws
    arma::cx_mat g_regression;  // E[g | ghat] operator; identity when matched
    bool matched = true;
    double ne_theory = 1.0;
};

EstimatorModel build_estimator(const Scenario &sc, AdcMode mode,
                               const EstimatorOptions &opts = {});

// Front-end pass + LMMSE estimate for one received pilot block X (M x N).
// Returns the estimated channel matrix (M x K).
arma::cx_mat lmmse_estimate(const EstimatorModel &em, const arma::cx_mat &X);

// Theoretical normalized error from the covariance traces:
// NE = 1 - Tr(C_cross)^2 / (Tr(C_hat) Tr(C_G)), which reduces to
// Tr(C_g - C_ghat)/Tr(C_g) for a matched LMMSE estimator.
double theoretical_ne(const arma::cx_mat &C_G, const arma::cx_mat &C_hat_block,
                      const arma::cx_mat &C_cross_block);

// Scale-invariant empirical normalized error accumulated over trials:
// NE = 1 - |E[g_hat^H g]|^2 / (E[||g_hat||^2] E[||g||^2]).
class NeAccumulator {
  public:
    void add(const arma::cx_mat &G, const arma::cx_mat &G_hat);
    double value() const;
    std::size_t count() const { return n_; }

  private:
    std::complex<double> inner_{0.0, 0.0};
    double norm_g_ = 0.0;
    double norm_gh_ = 0.0;
    std::size_t n_ = 0;
};

// One full channel-estimation trial: draw channel and noise, run the
// front-end, estimate. Returns (G, G_hat).
struct TrialResult {
    arma::cx_mat G;
    arma::cx_mat G_hat;
};
TrialResult run_estimation_trial(const Scenario &sc, const EstimatorModel &em, Rng &rng);

// Dense general-pilot LMMSE for validation: g_hat = C_g Phi^H C_y^{-1} y
// with explicit (MN x MN) C_y, solved through a Hermitian factorization.
// Throws std::runtime_error when C_y is not positive definite; jitter of
// 1e-10 Tr(C_y)/MN is added only when allow_jitter is set.
arma::cx_vec lmmse_estimate_dense(const arma::cx_vec &y,
                                  const std::vector<arma::cx_mat> &c_gk,
                                  const arma::cx_mat &phi_t, double rho,
                                  const arma::cx_mat &C_y, bool allow_jitter = false);

} // namespace sdmimo

#endif // SDMIMO_ESTIMATOR_HPP
