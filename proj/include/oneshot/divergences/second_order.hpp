// Copyright 2026 The oneshot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>

#include "oneshot/divergences/relative_entropy.hpp"

namespace oneshot {

inline double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double gaussian_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0));
}

/** Phi^{-1}(p): rational initial guess refined by two Halley steps. */
inline double inverse_gaussian_cdf(double p) {
  require(p > 0 && p < 1, ErrorKind::BadParam, "probability must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  const double lo = 0.02425, hi = 1 - lo;
  double x;
  if (p < lo) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= hi) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  for (int it = 0; it < 2; ++it) {
    const double e = gaussian_cdf(x) - p;
    const double u = e / gaussian_pdf(x);
    x -= u / (1 + 0.5 * x * u);
  }
  return x;
}

struct SecondOrderEstimate {
  double relative_entropy = 0;
  double variance = 0;
  double quantile = 0;
  double value_bits = 0;  // n D + sqrt(n V) Phi^{-1}(eps)
};

inline SecondOrderEstimate second_order_estimate(const Matrix& rho, const Matrix& sigma,
                                                 std::size_t n, double eps) {
  require(n >= 1, ErrorKind::BadParam, "n must be positive");
  SecondOrderEstimate out;
  out.relative_entropy = relative_entropy(rho, sigma);
  out.variance = relative_entropy_variance(rho, sigma);
  out.quantile = inverse_gaussian_cdf(eps);
  out.value_bits = double(n) * out.relative_entropy +
                   std::sqrt(double(n) * out.variance) * out.quantile;
  return out;
}

inline SecondOrderEstimate second_order_estimate(const DensityOperator& rho,
                                                 const DensityOperator& sigma,
                                                 std::size_t n, double eps) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return second_order_estimate(rho.matrix(), sigma.matrix(), n, eps);
}

}  // namespace oneshot
