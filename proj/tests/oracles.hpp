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
// Test-only reference implementations. Everything here is kept independent
// of the library code paths it is used to check: integrals are evaluated by
// adaptive quadrature, the normal cdf by an erf power series, and the dense
// estimators by explicit Kronecker-product construction.

#ifndef SDMIMO_TESTS_ORACLES_HPP
#define SDMIMO_TESTS_ORACLES_HPP

#include <algorithm>
#include <armadillo>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------- quadrature

// Recursive adaptive Simpson rule.
inline double adaptive_simpson_rec(const std::function<double(double)> &f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)> &f, double a,
                        double b, double tol = 1e-13) {
    if (a == b) {
        return 0.0;
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Si(x) from its defining integral.
inline double si_quadrature(double x) {
    return integrate([](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; },
                     0.0, x);
}

// Ci(x) = eta + log(x) + int_0^x (cos t - 1)/t dt.
inline double ci_quadrature(double x) {
    const double eta = 0.577215664901532860606512090082;
    const double tail = integrate(
        [](double t) { return t == 0.0 ? 0.0 : (std::cos(t) - 1.0) / t; }, 0.0,
        x);
    return eta + std::log(x) + tail;
}

// ----------------------------------------------------------------- erf series

// Normal cdf through the erf Maclaurin series (usable for |x| <= ~6).
inline double normal_cdf_series(double x) {
    const double z = x / std::sqrt(2.0);
    double term = z;
    double sum = z;
    for (int n = 1; n < 200; ++n) {
        term *= -z * z / n;
        const double add = term / (2.0 * n + 1.0);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    const double erf = 2.0 / std::sqrt(3.141592653589793238462643) * sum;
    return 0.5 * (1.0 + erf);
}

// Conditional mean of a unit Gaussian over (a, b) by quadrature on a
// truncated range; used to check the Lloyd-Max fixed point.
inline double gaussian_bin_mean(double a, double b) {
    const double lo = std::isinf(a) ? -12.0 : a;
    const double hi = std::isinf(b) ? 12.0 : b;
    auto pdf = [](double t) {
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.141592653589793238462643);
    };
    const double mass = integrate(pdf, lo, hi, 1e-13);
    const double first = integrate([&](double t) { return t * pdf(t); }, lo, hi, 1e-13);
    return first / mass;
}

// ------------------------------------------------------- dense linear algebra

// Dense pilot matrix Phi = sqrt(rho) (Phi_t^T kron I_M), MN x MK.
inline arma::cx_mat dense_pilot(const arma::cx_mat &phi_t, double rho,
                                arma::uword M) {
    const arma::uword K = phi_t.n_rows;
    const arma::uword N = phi_t.n_cols;
    arma::cx_mat phi(M * N, M * K, arma::fill::zeros);
    for (arma::uword n = 0; n < N; ++n) {
        for (arma::uword k = 0; k < K; ++k) {
            phi.submat(n * M, k * M, (n + 1) * M - 1, (k + 1) * M - 1) =
                std::sqrt(rho) * phi_t(k, n) * arma::cx_mat(M, M, arma::fill::eye);
        }
    }
    return phi;
}

// Dense C_x = Phi C_g Phi^H + I_N kron C_N by brute force.
inline arma::cx_mat dense_cov_x(const arma::cx_mat &phi_t, double rho,
                                const std::vector<arma::cx_mat> &c_gk,
                                const arma::cx_mat &c_n) {
    const arma::uword K = phi_t.n_rows;
    const arma::uword N = phi_t.n_cols;
    const arma::uword M = c_n.n_rows;
    arma::cx_mat c_g(M * K, M * K, arma::fill::zeros);
    for (arma::uword k = 0; k < K; ++k) {
        c_g.submat(k * M, k * M, (k + 1) * M - 1, (k + 1) * M - 1) = c_gk[k];
    }
    const arma::cx_mat phi = dense_pilot(phi_t, rho, M);
    arma::cx_mat c_x = phi * c_g * phi.t();
    for (arma::uword n = 0; n < N; ++n) {
        c_x.submat(n * M, n * M, (n + 1) * M - 1, (n + 1) * M - 1) += c_n;
    }
    return c_x;
}

// Classical (unquantized) LMMSE estimate, dense construction.
inline arma::cx_vec dense_lmmse(const arma::cx_mat &phi_t, double rho,
                                const std::vector<arma::cx_mat> &c_gk,
                                const arma::cx_mat &c_n,
                                const arma::cx_vec &y) {
    const arma::uword K = phi_t.n_rows;
    const arma::uword M = c_n.n_rows;
    arma::cx_mat c_g(M * K, M * K, arma::fill::zeros);
    for (arma::uword k = 0; k < K; ++k) {
        c_g.submat(k * M, k * M, (k + 1) * M - 1, (k + 1) * M - 1) = c_gk[k];
    }
    const arma::cx_mat phi = dense_pilot(phi_t, rho, M);
    const arma::cx_mat c_x = dense_cov_x(phi_t, rho, c_gk, c_n);
    return c_g * phi.t() * arma::solve(c_x, y);
}

// Conventional one-bit Bussgang LMMSE in the classical unit-output
// normalization: y1 = (sign Re + j sign Im)/sqrt 2, Bussgang gain matrix
// A = sqrt(2/pi) diag(sigma_x)^-1, and the arcsine-law output covariance
//   C_y1(m,n) = (2/pi) ( asin Re(rho_mn) + j asin Im(rho_mn) ),
// where rho_mn is the normalized complex correlation of x.
inline arma::cx_vec dense_blmmse_1bit(const arma::cx_mat &phi_t, double rho,
                                      const std::vector<arma::cx_mat> &c_gk,
                                      const arma::cx_mat &c_n,
                                      const arma::cx_vec &x) {
    const arma::uword K = phi_t.n_rows;
    const arma::uword M = c_n.n_rows;
    const arma::uword MN = x.n_elem;
    const double pi = 3.141592653589793238462643;
    arma::cx_mat c_g(M * K, M * K, arma::fill::zeros);
    for (arma::uword k = 0; k < K; ++k) {
        c_g.submat(k * M, k * M, (k + 1) * M - 1, (k + 1) * M - 1) = c_gk[k];
    }
    const arma::cx_mat phi = dense_pilot(phi_t, rho, M);
    const arma::cx_mat c_x = dense_cov_x(phi_t, rho, c_gk, c_n);

    arma::cx_vec y1(MN);
    for (arma::uword m = 0; m < MN; ++m) {
        const double re = x(m).real() >= 0.0 ? 1.0 : -1.0;
        const double im = x(m).imag() >= 0.0 ? 1.0 : -1.0;
        y1(m) = std::complex<double>(re, im) / std::sqrt(2.0);
    }
    arma::cx_mat a(MN, MN, arma::fill::zeros);
    for (arma::uword m = 0; m < MN; ++m) {
        a(m, m) = std::sqrt(2.0 / pi) / std::sqrt(c_x(m, m).real());
    }
    arma::cx_mat c_y(MN, MN);
    for (arma::uword m = 0; m < MN; ++m) {
        c_y(m, m) = 1.0;
        for (arma::uword n = m + 1; n < MN; ++n) {
            const double den = std::sqrt(c_x(m, m).real() * c_x(n, n).real());
            const double rr = std::asin(std::clamp(c_x(m, n).real() / den, -1.0, 1.0));
            const double ri = std::asin(std::clamp(c_x(m, n).imag() / den, -1.0, 1.0));
            c_y(m, n) = 2.0 / pi * std::complex<double>(rr, ri);
            c_y(n, m) = std::conj(c_y(m, n));
        }
    }
    return c_g * phi.t() * a.t() * arma::solve(c_y, y1);
}

// P(X > h, Y > k) for standard bivariate normal, by direct 2-D quadrature of
// the joint density over a truncated rectangle.
inline double bvn_upper_quadrature(double h, double k, double r) {
    const double pi = 3.141592653589793238462643;
    const double lim = 9.0;
    const double lo_x = std::max(h, -lim);
    const double lo_y = std::max(k, -lim);
    if (lo_x >= lim || lo_y >= lim) {
        return 0.0;
    }
    auto inner = [&](double x) {
        return integrate(
            [&](double y) {
                const double q = (x * x - 2.0 * r * x * y + y * y) / (2.0 * (1.0 - r * r));
                return std::exp(-q) / (2.0 * pi * std::sqrt(1.0 - r * r));
            },
            lo_y, lim, 1e-13);
    };
    return integrate(inner, lo_x, lim, 1e-11);
}

} // namespace oracles

#endif // SDMIMO_TESTS_ORACLES_HPP
