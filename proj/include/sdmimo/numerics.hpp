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

#ifndef SDMIMO_NUMERICS_HPP
#define SDMIMO_NUMERICS_HPP

#include <vector>

namespace sdmimo {

// Euler-Mascheroni constant
inline constexpr double euler_gamma = 0.577215664901532860606512090082;

// Sine integral Si(x) = int_0^x sin(t)/t dt, x >= 0.
// Power series below x = 8, convergent continued fraction of the auxiliary
// function above. Absolute error below 1e-12 over the tested range.
double sin_integral(double x);

// Cosine integral Ci(x) = eta + log(x) + int_0^x (cos(t)-1)/t dt, x > 0.
double cos_integral(double x);

// Standard normal cdf and pdf.
double std_normal_cdf(double x);
double std_normal_pdf(double x);

// Inverse of the standard normal cdf (Newton refinement, ~1e-12).
double std_normal_quantile(double p);

// Upper-orthant probability P(X > h, Y > k) of a standard bivariate normal
// pair with correlation r. Drezner-Wesolowsky / Genz quadrature, absolute
// error below 5e-16. Used for exact quantizer output cross-covariances.
double bvn_upper(double h, double k, double r);

// Scalar quantizer for a unit-variance Gaussian input: output levels in
// ascending order and the bin edges that map an input to its level.
// lo[0] = -inf, hi[last] = +inf, hi[i] = lo[i+1]. Levels and edges are
// antisymmetric about zero.
struct QuantizerLevels {
    int bits = 0;
    std::vector<double> levels;
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t bins() const { return levels.size(); }
};

// Minimum-distortion (Lloyd-Max) levels for a unit-variance Gaussian source.
// Fixed-point iteration from equal-probability thresholds; supports 1 and 2
// bits. Throws std::invalid_argument for other widths.
QuantizerLevels lloyd_max(int bits);

} // namespace sdmimo

#endif // SDMIMO_NUMERICS_HPP
