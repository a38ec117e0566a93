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

#include "sdmimo/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace sdmimo {

Scenario make_scenario(const ScenarioGeometry &geom, const CouplingParams &params,
                       bool mutual_coupling, double snr_db) {
    geom.validate();
    Scenario sc;
    sc.geom = geom;
    sc.coupling = make_coupling_model(geom.M, geom.delta, params, mutual_coupling);
    sc.stats = make_channel_statistics(sc.coupling.T, geom);
    sc.phi_t = dft_pilots(geom.N, geom.K);
    sc.snr_linear = std::pow(10.0, snr_db / 10.0);
    const double tr_c_n = arma::trace(sc.coupling.C_N).real();
    sc.rho = snr_to_rho(sc.snr_linear, static_cast<double>(geom.K) * sc.stats.tr_C_G,
                        tr_c_n, geom.K);
    arma::cx_mat chol;
    if (!arma::chol(chol, sc.coupling.C_N, "lower")) {
        throw std::runtime_error("make_scenario: C_N is not positive definite");
    }
    sc.noise_chol = chol;
    return sc;
}

arma::cx_mat draw_channel_matrix(const Scenario &sc, Rng &rng) {
    arma::cx_mat g(sc.geom.M, sc.geom.K);
    for (arma::uword k = 0; k < sc.geom.K; ++k) {
        g.col(k) = draw_channel(sc.stats.F, rng);
    }
    return g;
}

} // namespace sdmimo
