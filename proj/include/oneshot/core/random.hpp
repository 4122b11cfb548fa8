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

#include <cstdint>
#include <random>

#include "oneshot/core/state.hpp"

namespace oneshot::random {

using Rng = std::mt19937_64;

inline Matrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

/** Density matrix of dimension d and rank at most `rank` (0 means full). */
inline Matrix density_matrix(Rng& rng, Eigen::Index d, Eigen::Index rank = 0) {
  Matrix g = ginibre(rng, d, rank > 0 ? rank : d);
  Matrix r = g * g.adjoint();
  return hermitian_part(r / r.trace().real());
}

inline Matrix unitary(Rng& rng, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(rng, d, d));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

inline Vector unit_vector(Rng& rng, Eigen::Index d) {
  Matrix g = ginibre(rng, d, 1);
  return g.col(0) / g.col(0).norm();
}

inline std::vector<double> probability_vector(Rng& rng, std::size_t d) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(d);
  double s = 0;
  for (auto& x : p) s += (x = ex(rng));
  for (auto& x : p) x /= s;
  return p;
}

inline Matrix diagonal_density(Rng& rng, Eigen::Index d) {
  auto p = probability_vector(rng, static_cast<std::size_t>(d));
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
  return m;
}

/** Random operator with 0 <= Lambda <= I. */
inline Matrix effect(Rng& rng, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix v = unitary(rng, d);
  Matrix dg = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) dg(i, i) = u(rng);
  return hermitian_part(v * dg * v.adjoint());
}

inline DensityOperator state(Rng& rng, RegisterLayout layout, Eigen::Index rank = 0) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return DensityOperator::trusted(std::move(layout), density_matrix(rng, d, rank));
}

inline PureState pure_state(Rng& rng, RegisterLayout layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return PureState::trusted(std::move(layout), unit_vector(rng, d));
}

}  // namespace oneshot::random
