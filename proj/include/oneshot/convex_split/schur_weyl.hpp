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
#include <utility>
#include <vector>

#include "oneshot/core/linalg.hpp"

namespace oneshot::schur_weyl {

/** Complex number plus a first-order infinitesimal part. */
struct Dual {
  cplx v{0.0, 0.0};
  cplx d{0.0, 0.0};
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  return std::round(std::exp(std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) -
                             std::lgamma(double(n - k) + 1)));
}

/** Multiplicity of the two-row irrep (n-k, k) of S_n. */
inline double multiplicity(std::size_t n, std::size_t k) {
  return binomial(n, k) - (k > 0 ? binomial(n, k - 1) : 0.0);
}

using DualPoly = std::vector<Dual>;  // coefficient of y^a

inline DualPoly poly_mul(const DualPoly& a, const DualPoly& b) {
  DualPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

inline DualPoly poly_pow(const DualPoly& a, std::size_t e) {
  DualPoly out{Dual{1.0, 0.0}};
  for (std::size_t i = 0; i < e; ++i) out = poly_mul(out, a);
  return out;
}

/** pi(g) and its derivative along `dir`, where pi is the irrep
 *  Sym^{n-2k} (x) det^k of GL(2) in the orthonormal Dicke basis. */
inline std::pair<Matrix, Matrix> irrep(const Matrix& g, const Matrix& dir, std::size_t n,
                                       std::size_t k) {
  const std::size_t m = n - 2 * k;
  Dual g00{g(0, 0), dir(0, 0)}, g01{g(0, 1), dir(0, 1)};
  Dual g10{g(1, 0), dir(1, 0)}, g11{g(1, 1), dir(1, 1)};
  const DualPoly col0{g00, g10};  // image of x: g00 x + g10 y
  const DualPoly col1{g01, g11};
  Dual det = g00 * g11 - g01 * g10;
  Dual detk{1.0, 0.0};
  for (std::size_t i = 0; i < k; ++i) detk = detk * det;
  const auto dim = static_cast<Eigen::Index>(m + 1);
  Matrix val(dim, dim), der(dim, dim);
  for (std::size_t b = 0; b <= m; ++b) {
    DualPoly p = poly_mul(poly_pow(col0, m - b), poly_pow(col1, b));
    for (std::size_t a = 0; a <= m; ++a) {
      const double scale = std::sqrt(binomial(m, b) / binomial(m, a));
      Dual e = detk * (scale * p[a]);
      val(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = e.v;
      der(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = e.d;
    }
  }
  return {val, der};
}

inline Matrix unit(Eigen::Index d, Eigen::Index a, Eigen::Index b) {
  Matrix e = Matrix::Zero(d, d);
  e(a, b) = 1.0;
  return e;
}

}  // namespace oneshot::schur_weyl
