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

#include <doctest.h>

#include "oracles.hpp"
#include "sdmimo/channel.hpp"
#include "sdmimo/scenario.hpp"

#include <cmath>

using namespace sdmimo;

TEST_SUITE_BEGIN("channel");

TEST_CASE("steering vector") {
    const arma::cx_vec broadside = steering_vector(0.0, 5, 0.5);
    for (auto v : broadside) {
        CHECK(std::abs(v - std::complex<double>(1.0, 0.0)) < 1e-15);
    }

    const arma::cx_vec a = steering_vector(30.0 * M_PI / 180.0, 4, 0.5);
    for (auto v : a) {
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
    }
    // Element 2: exp(-j 2 pi 0.5 sin 30 deg) = exp(-j pi/2) = -j.
    CHECK(std::abs(a(1) - std::complex<double>(0.0, -1.0)) < 1e-14);
}

TEST_CASE("covariance factor") {
    SUBCASE("rank-one broadside") {
        const arma::cx_mat t(3, 3, arma::fill::eye);
        const arma::vec grid = aoa_grid(60.0, 1); // single center arrival
        CHECK(grid(0) == 0.0);
        const arma::cx_mat f = covariance_factor(t, grid, 0.5);
        const arma::cx_mat c = f * f.t();
        for (arma::uword i = 0; i < 3; ++i) {
            for (arma::uword j = 0; j < 3; ++j) {
                CHECK(std::abs(c(i, j) - 1.0) < 1e-14);
            }
        }
    }

    SUBCASE("trace with T = I/2 is M/4 for any L") {
        const arma::cx_mat t = 0.5 * arma::cx_mat(6, 6, arma::fill::eye);
        for (arma::uword L : {1u, 7u, 50u}) {
            const arma::cx_mat f = covariance_factor(t, aoa_grid(60.0, L), 1.0 / 6.0);
            const arma::cx_mat c = f * f.t();
            CHECK(std::abs(arma::trace(c).real() - 0.25 * 6.0) < 1e-12);
        }
    }

    SUBCASE("gram form is PSD") {
        const arma::cx_mat z = impedance_matrix(8, 1.0 / 6.0);
        const arma::cx_mat t = coupling_matrix(z, 50.0);
        const arma::cx_mat f = covariance_factor(t, aoa_grid(60.0, 50), 1.0 / 6.0);
        arma::cx_mat c = f * f.t();
        c = 0.5 * (c + c.t());
        const arma::vec eig = arma::eig_sym(c);
        CHECK(eig.min() > -1e-12 * arma::sum(eig));
    }
}

TEST_CASE("channel draws") {
    const arma::cx_mat t(4, 4, arma::fill::eye);
    const arma::cx_mat f = covariance_factor(t, aoa_grid(90.0, 3), 0.25);

    SUBCASE("zero factor gives zero draw") {
        Rng rng(7);
        const arma::cx_vec g = draw_channel(arma::cx_mat(4, 3, arma::fill::zeros), rng);
        CHECK(arma::norm(g) == 0.0);
    }

    SUBCASE("fixed seed reproduces the draw") {
        Rng r1(42), r2(42);
        const arma::cx_vec g1 = draw_channel(f, r1);
        const arma::cx_vec g2 = draw_channel(f, r2);
        CHECK(arma::norm(g1 - g2) == 0.0);
    }

    SUBCASE("sample covariance matches C_g within 2 percent") {
        Rng rng(3);
        const arma::cx_mat c = f * f.t();
        arma::cx_mat acc(4, 4, arma::fill::zeros);
        const int trials = 100000;
        for (int i = 0; i < trials; ++i) {
            const arma::cx_vec g = draw_channel(f, rng);
            acc += g * g.t();
        }
        acc /= trials;
        CHECK(arma::norm(acc - c, "fro") < 0.02 * arma::norm(c, "fro"));
    }
}

TEST_CASE("dft pilots") {
    const arma::cx_mat p2 = dft_pilots(2, 2);
    CHECK(std::abs(p2(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(p2(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(p2(1, 0) - 1.0) < 1e-15);
    CHECK(std::abs(p2(1, 1) + 1.0) < 1e-15);

    const arma::cx_mat p = dft_pilots(10, 10);
    CHECK(arma::norm(p * p.t() - 10.0 * arma::cx_mat(10, 10, arma::fill::eye), "inf") < 1e-12);
    for (auto v : p) {
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-14);
    }
}

TEST_CASE("received pilot block") {
    Rng rng(11);
    const arma::cx_mat g(3, 2, arma::fill::ones);
    const arma::cx_mat phi_t = dft_pilots(2, 2);

    SUBCASE("noiseless") {
        const arma::cx_mat x =
            received_pilot_block(g, phi_t, 4.0, arma::cx_mat(3, 3, arma::fill::zeros), rng);
        CHECK(arma::norm(x - 2.0 * g * phi_t, "inf") < 1e-14);
    }

    SUBCASE("vectorization stacks columns") {
        const arma::cx_mat x =
            received_pilot_block(g, phi_t, 1.0, arma::cx_mat(3, 3, arma::fill::zeros), rng);
        const arma::cx_vec v = arma::vectorise(x);
        CHECK(v(3) == x(0, 1));
    }

    SUBCASE("rho = 0 leaves noise with covariance C_N") {
        arma::cx_mat c_n(2, 2, arma::fill::zeros);
        c_n(0, 0) = 2.0;
        c_n(1, 1) = 1.0;
        c_n(0, 1) = std::complex<double>(0.5, 0.25);
        c_n(1, 0) = std::conj(c_n(0, 1));
        const arma::cx_mat chol = arma::chol(c_n, "lower");
        arma::cx_mat acc(2, 2, arma::fill::zeros);
        const int trials = 40000;
        const arma::cx_mat g0(2, 2, arma::fill::ones);
        for (int i = 0; i < trials; ++i) {
            const arma::cx_mat x = received_pilot_block(g0, dft_pilots(2, 2), 0.0, chol, rng);
            acc += x.col(0) * x.col(0).t() + x.col(1) * x.col(1).t();
        }
        acc /= 2.0 * trials;
        CHECK(arma::norm(acc - c_n, "fro") < 0.03 * arma::norm(c_n, "fro"));
    }
}

TEST_CASE("snr to rho") {
    CHECK(snr_to_rho(1.0, 4.0 * 2.5, 2.5, 4) == doctest::Approx(1.0));
    CHECK(snr_to_rho(2.0, 10.0, 1.0, 2) > snr_to_rho(1.0, 10.0, 1.0, 2));

    // General-N consistency: with DFT pilot rows of length N the primary SNR
    // definition (rho/(NK)) Tr(E[G Phi_t Phi_t^H G^H]) / Tr(C_N) collapses to
    // the same expression used by snr_to_rho.
    const arma::uword M = 4, K = 2, N = 6;
    const arma::cx_mat t(M, M, arma::fill::eye);
    const arma::cx_mat f = covariance_factor(t, aoa_grid(60.0, 5), 0.25);
    const arma::cx_mat c_g = f * f.t();
    const arma::cx_mat phi_t = dft_pilots(N, K);
    const arma::cx_mat c_n = 0.3 * arma::cx_mat(M, M, arma::fill::eye);
    const double rho = 1.7;
    // E[G Phi Phi^H G^H] = sum_k (Phi Phi^H)_kk C_gk
    arma::cx_mat e(M, M, arma::fill::zeros);
    const arma::cx_mat pp = phi_t * phi_t.t();
    for (arma::uword k = 0; k < K; ++k) {
        e += pp(k, k) * c_g;
    }
    const double snr_direct = rho / static_cast<double>(N * K) * arma::trace(e).real() /
                              arma::trace(c_n).real();
    const double rho_back = snr_to_rho(snr_direct, K * arma::trace(c_g).real(),
                                       arma::trace(c_n).real(), K);
    CHECK(rho_back == doctest::Approx(rho).epsilon(1e-12));
}

TEST_CASE("pilot-phase covariance structure") {
    const arma::uword M = 4, K = 2;
    const arma::cx_mat z = impedance_matrix(M, 0.25);
    const arma::cx_mat t = coupling_matrix(z, 50.0);
    const arma::cx_mat f = covariance_factor(t, aoa_grid(60.0, 4), 0.25);
    arma::cx_mat c_g = f * f.t();
    c_g = 0.5 * (c_g + c_g.t());
    const arma::cx_mat c_n = noise_covariance(z, t, CouplingParams::reference());
    const double rho = 2.3;
    const arma::cx_mat phi_t = dft_pilots(K, K);
    const std::vector<arma::cx_mat> users(K, c_g);

    SUBCASE("blockwise assembly equals brute-force Kronecker construction") {
        const arma::cx_mat dense = cov_x_dense(phi_t, rho, users, c_n);
        const arma::cx_mat oracle = oracles::dense_cov_x(phi_t, rho, users, c_n);
        CHECK(arma::norm(dense - oracle, "inf") < 1e-10 * arma::norm(oracle, "inf"));
    }

    SUBCASE("orthogonal pilots, equal covariances: block diagonal") {
        const arma::cx_mat dense = cov_x_dense(phi_t, rho, users, c_n);
        const arma::cx_mat block = cov_x_block(rho, K, c_g, c_n);
        for (arma::uword i = 0; i < K; ++i) {
            for (arma::uword j = 0; j < K; ++j) {
                const arma::cx_mat sub =
                    dense.submat(i * M, j * M, (i + 1) * M - 1, (j + 1) * M - 1);
                if (i == j) {
                    CHECK(arma::norm(sub - block, "inf") < 1e-12 * arma::norm(block, "inf"));
                } else {
                    CHECK(arma::norm(sub, "inf") < 1e-12 * arma::norm(block, "inf"));
                }
            }
        }
    }

    SUBCASE("rho = 0 reduces to I_N kron C_N") {
        const arma::cx_mat dense = cov_x_dense(phi_t, 0.0, users, c_n);
        CHECK(arma::norm(dense.submat(0, 0, M - 1, M - 1) - c_n, "inf") == 0.0);
        CHECK(arma::norm(dense.submat(0, M, M - 1, 2 * M - 1), "inf") == 0.0);
    }
}

TEST_CASE("geometry validation") {
    ScenarioGeometry geom;
    geom.M = 8;
    geom.K = 4;
    geom.N = 2; // N < K
    CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
    geom.N = 4;
    geom.sector_deg = 200.0;
    CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
    geom.sector_deg = 60.0;
    CHECK_NOTHROW(geom.validate());
}

TEST_SUITE_END();
