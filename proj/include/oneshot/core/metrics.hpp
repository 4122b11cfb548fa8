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
#include <string>
#include <vector>

#include "oneshot/core/state.hpp"

namespace oneshot {

namespace detail {
inline void require_same_layout(const RegisterLayout& a, const RegisterLayout& b) {
  require(a == b, ErrorKind::ShapeMismatch, "operators live on different layouts");
}
}  // namespace detail

/** F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1 on raw matrices. */
inline double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (is_diagonal(rho) && is_diagonal(sigma)) {
    double f = 0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
      f += std::sqrt(std::max(0.0, rho(i, i).real()) * std::max(0.0, sigma(i, i).real()));
    return f;
  }
  return trace_norm(psd_sqrt(rho) * psd_sqrt(sigma));
}

inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return fidelity(rho.matrix(), sigma.matrix());
}

/** P = sqrt(1 - F^2); F is clamped to [0, 1]. */
inline double purified_distance_from_fidelity(double f) {
  f = std::clamp(f, 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

inline double purified_distance(const Matrix& rho, const Matrix& sigma) {
  return purified_distance_from_fidelity(fidelity(rho, sigma));
}

inline double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  return purified_distance_from_fidelity(fidelity(rho, sigma));
}

inline double entropy(const Matrix& rho) {
  auto e = hermitian_eigen(rho);
  const double thr = support_threshold(e);
  double s = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > thr) s -= e.values(i) * std::log2(e.values(i));
  return s;
}

inline double entropy(const DensityOperator& rho) { return entropy(rho.matrix()); }

/** I(A:B) where A is the register set `cut` and B the rest. */
inline double mutual_information(const DensityOperator& rho,
                                 const std::vector<std::string>& cut) {
  auto rest = rho.layout().complement(cut).labels();
  require(!cut.empty() && !rest.empty(), ErrorKind::BadPartition,
          "mutual information needs a proper cut");
  return entropy(partial_trace_keep(rho, cut)) + entropy(partial_trace_keep(rho, rest)) -
         entropy(rho);
}

}  // namespace oneshot
