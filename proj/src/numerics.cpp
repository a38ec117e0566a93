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

#include "sdmimo/numerics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace sdmimo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Si and Ci by direct power series. Terms alternate; usable up to x ~ 10
// before cancellation erodes the 1e-12 target.
void sici_series(double x, double &si, double &ci_no_log) {
    const double z = x * x;
    // Si: sum (-1)^n x^(2n+1) / ((2n+1)(2n+1)!)
    double term = x;
    double sum_si = x;
    // Cin: sum (-1)^(n+1) x^(2n) / ((2n)(2n)!), Ci = eta + log x - Cin
    double cterm = 1.0;
    double sum_cin = 0.0;
    for (int n = 1; n < 200; ++n) {
        const double k2 = 2.0 * n;
        cterm *= -z / ((k2 - 1.0) * k2);
        sum_cin -= cterm / k2;
        term *= -z / (k2 * (k2 + 1.0));
        sum_si += term / (k2 + 1.0);
        if (std::abs(term) < 1e-18 * std::abs(sum_si) &&
            std::abs(cterm) < 1e-18) {
            break;
        }
    }
    si = sum_si;
    ci_no_log = -sum_cin; // caller adds eta + log x
}

// Auxiliary function for large arguments via the modified Lentz continued
// fraction of E1(ix); Ci(x) = -Re E1(ix), Si(x) = pi/2 + Im E1(ix).
void sici_cf(double x, double &si, double &ci) {
    using cx = std::complex<double>;
    const double tiny = 1e-290;
    cx b(1.0, x);
    cx c(1.0 / tiny, 0.0);
    cx d = 1.0 / b;
    cx h = d;
    for (int i = 1; i < 400; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            break;
        }
    }
    const cx e1 = h * std::polar(1.0, -x); // E1(ix)
    ci = -e1.real();
    si = 0.5 * kPi + e1.imag();
}

} // namespace

double sin_integral(double x) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("sin_integral: argument must be >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    double si, ci;
    if (x < 8.0) {
        sici_series(x, si, ci);
    } else {
        sici_cf(x, si, ci);
    }
    return si;
}

double cos_integral(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("cos_integral: argument must be > 0");
    }
    double si, ci;
    if (x < 8.0) {
        sici_series(x, si, ci);
        ci += euler_gamma + std::log(x);
    } else {
        sici_cf(x, si, ci);
    }
    return ci;
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("std_normal_quantile: p must be in (0,1)");
    }
    // Coarse logistic start, then Newton on the cdf.
    double x = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double f = std_normal_cdf(x) - p;
        const double fp = std_normal_pdf(x);
        const double step = f / fp;
        x -= step;
        if (std::abs(step) < 1e-14) {
            break;
        }
    }
    return x;
}

double bvn_upper(double h, double k, double r) {
    // Genz's rendition of the Drezner-Wesolowsky method: Gauss-Legendre
    // quadrature on the correlation integral, with the |r| > 0.925 branch
    // integrating the complement against the perfectly correlated case.
    static const double x6[] = {0.9324695142031520, 0.6612093864662645, 0.2386191860831969};
    static const double w6[] = {0.1713244923791703, 0.3607615730481384, 0.4679139345726910};
    static const double x12[] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                 0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
    static const double w12[] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                 0.2031674267230659, 0.2334925365383547, 0.2491470458134029};
    static const double x20[] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                 0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                 0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                 0.07652652113349733};
    static const double w20[] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                 0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                                 0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                                 0.1527533871307259};

    if (std::isinf(h) || std::isinf(k)) {
        if ((std::isinf(h) && h > 0.0) || (std::isinf(k) && k > 0.0)) {
            return 0.0;
        }
        if (std::isinf(h) && std::isinf(k)) {
            return 1.0;
        }
        return std::isinf(h) ? std_normal_cdf(-k) : std_normal_cdf(-h);
    }

    const double *xg;
    const double *wg;
    int ng;
    const double ar = std::abs(r);
    if (ar < 0.3) {
        xg = x6, wg = w6, ng = 3;
    } else if (ar < 0.75) {
        xg = x12, wg = w12, ng = 6;
    } else {
        xg = x20, wg = w20, ng = 10;
    }

    if (ar < 0.925) {
        const double hk = h * k;
        const double hs = 0.5 * (h * h + k * k);
        const double asr = std::asin(r);
        double bvn = 0.0;
        for (int i = 0; i < ng; ++i) {
            for (int is = -1; is <= 1; is += 2) {
                const double sn = std::sin(0.5 * asr * (1.0 + is * xg[i]));
                bvn += wg[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / (4.0 * kPi) + std_normal_cdf(-h) * std_normal_cdf(-k);
        return bvn;
    }

    // High correlation: integrate P(Y > k | X = x) against the marginal,
    // conditioning on X. The integrand is smooth; adaptive Simpson keeps
    // full precision where the series-accelerated forms get delicate.
    if (ar >= 1.0) {
        if (r > 0.0) {
            return std_normal_cdf(-std::max(h, k));
        }
        const double p = std_normal_cdf(-h) - std_normal_cdf(k);
        return p > 0.0 ? p : 0.0;
    }
    const double s = std::sqrt((1.0 - r) * (1.0 + r));
    const double lo = h;
    const double hi = std::max(lo, std::max(8.5, std::abs(k) + 8.5 * s));
    struct Simpson {
        double k, r, s;
        double f(double x) const {
            return std_normal_pdf(x) * std_normal_cdf((r * x - k) / s);
        }
        double run(double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
                return left + right + delta / 15.0;
            }
            return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    } simp{k, r, s};
    if (hi <= lo) {
        return 0.0;
    }
    const double m = 0.5 * (lo + hi);
    const double fa = simp.f(lo), fm = simp.f(m), fb = simp.f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return simp.run(lo, hi, fa, fm, fb, whole, 1e-13, 48);
}

QuantizerLevels lloyd_max(int bits) {
    if (bits != 1 && bits != 2) {
        throw std::invalid_argument("lloyd_max: only 1- and 2-bit quantizers supported");
    }
    const std::size_t n = std::size_t{1} << bits;
    const double inf = std::numeric_limits<double>::infinity();

    // Equal-probability initial thresholds t_1..t_{n-1}.
    std::vector<double> t(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        t[i] = std_normal_quantile(static_cast<double>(i + 1) / static_cast<double>(n));
    }

    std::vector<double> lev(n, 0.0);
    for (int it = 0; it < 500; ++it) {
        // Centroid condition: level = conditional mean over its bin.
        double max_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = (i == 0) ? -inf : t[i - 1];
            const double b = (i + 1 == n) ? inf : t[i];
            const double pa = (i == 0) ? 0.0 : std_normal_pdf(a);
            const double pb = (i + 1 == n) ? 0.0 : std_normal_pdf(b);
            const double mass = std_normal_cdf(b) - std_normal_cdf(a);
            const double next = (pa - pb) / mass;
            max_change = std::max(max_change, std::abs(next - lev[i]));
            lev[i] = next;
        }
        // Nearest-neighbor condition: threshold = midpoint of adjacent levels.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            t[i] = 0.5 * (lev[i] + lev[i + 1]);
        }
        if (max_change < 1e-10 && it > 1) {
            break;
        }
    }

    QuantizerLevels q;
    q.bits = bits;
    q.levels = lev;
    q.lo.resize(n);
    q.hi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.lo[i] = (i == 0) ? -inf : t[i - 1];
        q.hi[i] = (i + 1 == n) ? inf : t[i];
    }
    return q;
}

} // namespace sdmimo
