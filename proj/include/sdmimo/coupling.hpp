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

#ifndef SDMIMO_COUPLING_HPP
#define SDMIMO_COUPLING_HPP

#include <armadillo>
#include <complex>

namespace sdmimo {

// Receiver-chain noise parameters. Current/voltage noise powers are treated
// as per-element scalars.
struct CouplingParams {
    double R = 50.0;              // LNA input impedance [ohm]
    double R_N = 50.0;            // noise resistance [ohm]
    double sigma_i2 = 0.0;        // current-noise power [A^2]
    double sigma_v2 = 0.0;        // voltage-noise power [V^2]
    std::complex<double> rho_n{0.0, 0.0}; // noise correlation coefficient
    double k_B = 1.380649e-23;    // Boltzmann constant [J/K]
    double T_A = 290.0;           // ambient temperature [K]
    double B = 20e6;              // bandwidth [Hz]

    // Reference receiver: R = 50 ohm, T_A = 290 K, rho_n = 0, B = 20 MHz,
    // R_N = R, sigma_i^2 = 2 k_B T_A B / R, sigma_v^2 = 2 k_B T_A B R.
    static CouplingParams reference();

    void validate() const;
};

// Mutual-coupling model of a uniform linear array: antenna impedance matrix
// Z, coupling matrix T = (I + Z/R)^-1 and receiver-noise covariance
// C_N = T Upsilon T^H.
struct CouplingModel {
    arma::cx_mat Z;
    arma::cx_mat T;
    arma::cx_mat C_N;
    bool mutual_coupling = true;
};

// Impedance matrix of an M-element ULA with spacing delta (in wavelengths),
// half-wavelength dipole model. d_ij = |i-j| * delta.
arma::cx_mat impedance_matrix(arma::uword M, double delta);

// T = (I + Z/R)^-1.
arma::cx_mat coupling_matrix(const arma::cx_mat &Z, double R);

// C_N = T Upsilon T^H with
// Upsilon = sigma_i^2 (Z Z^H - 2 R_N Re(rho_n^* Z) + R_N^2 I) + 4 k_B T_A B Re(Z).
// Throws std::runtime_error if the result is not PSD (model inconsistency).
arma::cx_mat noise_covariance(const arma::cx_mat &Z, const arma::cx_mat &T,
                              const CouplingParams &params);

// Full model. With mutual_coupling = false the decoupled baseline Z = R I,
// T = 0.5 I is used, which gives C_N = 2 k_B T_A B R I.
CouplingModel make_coupling_model(arma::uword M, double delta,
                                  const CouplingParams &params,
                                  bool mutual_coupling);

} // namespace sdmimo

#endif // SDMIMO_COUPLING_HPP
