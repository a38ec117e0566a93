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

#ifndef SDMIMO_SCENARIO_HPP
#define SDMIMO_SCENARIO_HPP

#include "sdmimo/channel.hpp"
#include "sdmimo/coupling.hpp"

namespace sdmimo {

// Everything that is fixed across Monte Carlo trials of one operating point:
// geometry, coupling, shared channel statistics, pilots, and the pilot power
// implied by the requested SNR.
struct Scenario {
    ScenarioGeometry geom;
    CouplingModel coupling;
    ChannelStatistics stats;
    arma::cx_mat phi_t;      // K x N DFT pilots
    arma::cx_mat noise_chol; // lower Cholesky factor of C_N
    double snr_linear = 1.0;
    double rho = 0.0;

    const arma::cx_mat &C_N() const { return coupling.C_N; }
    const arma::cx_mat &C_G() const { return stats.C_G; }
};

Scenario make_scenario(const ScenarioGeometry &geom, const CouplingParams &params,
                       bool mutual_coupling, double snr_db);

// Channel matrix draw: column k is F h_k.
arma::cx_mat draw_channel_matrix(const Scenario &sc, Rng &rng);

} // namespace sdmimo

#endif // SDMIMO_SCENARIO_HPP
