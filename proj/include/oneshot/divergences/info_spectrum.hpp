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
#include <vector>

#include "oneshot/divergences/hypothesis_testing.hpp"

namespace oneshot {

enum class SpectrumVariant {
  Standard,   // sup{R : Tr(rho {rho - 2^R sigma}_+) >= 1 - eps}
  Alternate,  // inf{R : Tr(rho {rho - 2^R sigma}_-) >= 1 - eps}
};

struct InfoSpectrumResult {
  double value_bits = 0;    // +-inf when the set is empty
  double witness_bits = 0;  // a grid-refined R that satisfies the condition
  bool non_monotone = false;
  double bracket_lo = 0;
  double bracket_hi = 0;
};

struct InfoSpectrumOptions {
  double step = 1e-3;
  double lower_margin = 40.0;
  int refine_iterations = 60;
};

namespace detail {

inline std::vector<char> spectrum_selection(const PencilSpectrum& p, SpectrumVariant variant) {
  double scale = 0;
  for (double l : p.lambda) scale = std::max(scale, std::abs(l));
  const double noise = 1e-14 * std::max(scale, 1e-300);
  std::vector<char> keep(p.lambda.size());
  for (std::size_t i = 0; i < p.lambda.size(); ++i)
    keep[i] = (variant == SpectrumVariant::Standard) != (p.lambda[i] < -noise);
  return keep;
}

}  // namespace detail

/** Weight of rho on the non-negative (Standard) or strictly negative
 *  (Alternate) eigenspace of rho - 2^R sigma. */
inline double info_spectrum_weight(const Matrix& rho, const Matrix& sigma, double r_bits,
                                   SpectrumVariant variant) {
  auto p = detail::matrix_pencil(rho, sigma, std::exp2(-r_bits));
  auto keep = detail::spectrum_selection(p, variant);
  double w = 0;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) w += p.r[i];
  return w;
}

/** Projector onto the eigenspace whose weight info_spectrum_weight reports. */
inline Matrix info_spectrum_projector(const Matrix& rho, const Matrix& sigma, double r_bits,
                                      SpectrumVariant variant) {
  auto p = detail::matrix_pencil(rho, sigma, std::exp2(-r_bits));
  auto keep = detail::spectrum_selection(p, variant);
  Matrix proj = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) {
      const auto c = p.vectors.col(Eigen::Index(i));
      proj += c * c.adjoint();
    }
  return proj;
}

inline InfoSpectrumResult info_spectrum(const Matrix& rho, const Matrix& sigma, double eps,
                                        SpectrumVariant variant,
                                        const InfoSpectrumOptions& opt = {}) {
  require(eps > 0 && eps < 1, ErrorKind::BadParam, "eps must lie in (0, 1)");
  require(rho.rows() == sigma.rows(), ErrorKind::ShapeMismatch,
          "operators have different dimensions");
  const double top = d_max(rho, sigma) + 1.0;
  const double bottom = -std::log2(double(rho.rows())) - opt.lower_margin;
  const double level = 1.0 - eps;
  auto holds = [&](double r) {
    return info_spectrum_weight(rho, sigma, r, variant) >= level;
  };
  const auto steps = static_cast<long>(std::ceil((top - bottom) / opt.step));
  std::vector<char> grid(static_cast<std::size_t>(steps + 1));
  for (long i = 0; i <= steps; ++i)
    grid[static_cast<std::size_t>(i)] = holds(bottom + double(i) * opt.step) ? 1 : 0;
  auto at = [&](long i) { return bottom + double(i) * opt.step; };

  InfoSpectrumResult res;
  if (variant == SpectrumVariant::Standard) {
    long first = -1;  // highest grid index that holds
    for (long i = steps; i >= 0; --i)
      if (grid[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    if (first < 0) {
      res.value_bits = res.witness_bits = -kInf;
      return res;
    }
    for (long i = first; i >= 0; --i)
      if (!grid[static_cast<std::size_t>(i)]) res.non_monotone = true;
    double lo = at(first), hi = first < steps ? at(first + 1) : at(first);
    if (first < steps)
      for (int it = 0; it < opt.refine_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (holds(mid)) lo = mid;
        else hi = mid;
      }
    res.value_bits = lo;
    res.witness_bits = lo;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
  } else {
    long first = -1;  // lowest grid index that holds
    for (long i = 0; i <= steps; ++i)
      if (grid[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    if (first < 0) {
      res.value_bits = res.witness_bits = kInf;
      return res;
    }
    for (long i = first; i <= steps; ++i)
      if (!grid[static_cast<std::size_t>(i)]) res.non_monotone = true;
    double hi = at(first), lo = first > 0 ? at(first - 1) : at(first);
    if (first > 0)
      for (int it = 0; it < opt.refine_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (holds(mid)) hi = mid;
        else lo = mid;
      }
    res.value_bits = hi;
    res.witness_bits = hi;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
  }
  return res;
}

inline InfoSpectrumResult info_spectrum(const DensityOperator& rho,
                                        const DensityOperator& sigma, double eps,
                                        SpectrumVariant variant,
                                        const InfoSpectrumOptions& opt = {}) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return info_spectrum(rho.matrix(), sigma.matrix(), eps, variant, opt);
}

}  // namespace oneshot
