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

#include "sdmimo/coupling.hpp"
#include "sdmimo/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace sdmimo {

CouplingParams CouplingParams::reference() {
    CouplingParams p;
    p.R = 50.0;
    p.R_N = p.R;
    p.T_A = 290.0;
    p.B = 20e6;
    p.rho_n = {0.0, 0.0};
    p.sigma_i2 = 2.0 * p.k_B * p.T_A * p.B / p.R;
    p.sigma_v2 = 2.0 * p.k_B * p.T_A * p.B * p.R;
    return p;
}

void CouplingParams::validate() const {
    if (R <= 0.0 || R_N <= 0.0 || sigma_i2 <= 0.0 || sigma_v2 <= 0.0 ||
        T_A <= 0.0 || B <= 0.0) {
        throw std::invalid_argument("CouplingParams: powers and resistances must be > 0");
    }
    if (std::abs(rho_n) > 1.0 + 1e-12) {
        throw std::invalid_argument("CouplingParams: |rho_n| must be <= 1");
    }
}

arma::cx_mat impedance_matrix(arma::uword M, double delta) {
    if (M < 1) {
        throw std::invalid_argument("impedance_matrix: M must be >= 1");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("impedance_matrix: delta must be > 0");
    }
    const double pi = 3.141592653589793238462643383279502884;
    const std::complex<double> z_self =
        30.0 * std::complex<double>(euler_gamma + std::log(2.0 * pi) - cos_integral(2.0 * pi),
                                    sin_integral(2.0 * pi));

    arma::cx_mat z(M, M);
    // Mutual impedance depends on |i-j| only; compute one value per lag.
    std::vector<std::complex<double>> lag(M);
    lag[0] = z_self;
    for (arma::uword l = 1; l < M; ++l) {
        const double d = static_cast<double>(l) * delta;
        const double xi = pi * std::sqrt(1.0 + 4.0 * d * d);
        const double re = 2.0 * cos_integral(2.0 * pi * d) - cos_integral(xi + pi) -
                          cos_integral(xi - pi);
        const double im = 2.0 * sin_integral(2.0 * pi * d) - sin_integral(xi + pi) -
                          sin_integral(xi - pi);
        lag[l] = 30.0 * std::complex<double>(re, -im);
    }
    for (arma::uword i = 0; i < M; ++i) {
        for (arma::uword j = 0; j < M; ++j) {
            z(i, j) = lag[i > j ? i - j : j - i];
        }
    }
    return z;
}

arma::cx_mat coupling_matrix(const arma::cx_mat &Z, double R) {
    if (!(R > 0.0)) {
        throw std::invalid_argument("coupling_matrix: R must be > 0");
    }
    const arma::uword M = Z.n_rows;
    arma::cx_mat lhs = arma::cx_mat(M, M, arma::fill::eye) + Z / R;
    arma::cx_mat T;
    if (!arma::inv(T, lhs)) {
        throw std::runtime_error("coupling_matrix: I + Z/R is singular");
    }
    return T;
}

arma::cx_mat noise_covariance(const arma::cx_mat &Z, const arma::cx_mat &T,
                              const CouplingParams &params) {
    params.validate();
    const arma::uword M = Z.n_rows;
    const arma::cx_mat eye(M, M, arma::fill::eye);

    arma::cx_mat upsilon =
        params.sigma_i2 *
        (Z * Z.t() -
         2.0 * params.R_N *
             arma::conv_to<arma::cx_mat>::from(arma::real(std::conj(params.rho_n) * Z)) +
         params.R_N * params.R_N * eye);
    upsilon += 4.0 * params.k_B * params.T_A * params.B *
               arma::conv_to<arma::cx_mat>::from(arma::real(Z));

    arma::cx_mat c_n = T * upsilon * T.t();
    c_n = 0.5 * (c_n + c_n.t()); // strip numerical asymmetry

    arma::vec eig = arma::eig_sym(c_n);
    const double tr = arma::sum(eig);
    if (eig.min() < -1e-12 * tr) {
        throw std::runtime_error("noise_covariance: result not PSD (model inconsistency)");
    }
    return c_n;
}

CouplingModel make_coupling_model(arma::uword M, double delta,
                                  const CouplingParams &params,
                                  bool mutual_coupling) {
    CouplingModel model;
    model.mutual_coupling = mutual_coupling;
    if (mutual_coupling) {
        model.Z = impedance_matrix(M, delta);
        model.T = coupling_matrix(model.Z, params.R);
        model.C_N = noise_covariance(model.Z, model.T, params);
    } else {
        // Decoupled baseline: Z = R I and T = I/2.
        model.Z = params.R * arma::cx_mat(M, M, arma::fill::eye);
        model.T = 0.5 * arma::cx_mat(M, M, arma::fill::eye);
        model.C_N = noise_covariance(model.Z, model.T, params);
    }
    return model;
}

} // namespace sdmimo
