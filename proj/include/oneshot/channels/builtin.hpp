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

#include "oneshot/channels/channel.hpp"

namespace oneshot::channels {

inline void check_probability(double p, const char* name) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::BadParam,
          std::string(name) + " must lie in [0, 1]");
}

inline KrausChannel identity(std::size_t d, const std::string& in = "A",
                             const std::string& out = "B") {
  const auto n = static_cast<Eigen::Index>(d);
  return KrausChannel(RegisterLayout{{in, d}}, RegisterLayout{{out, d}},
                      {Matrix::Identity(n, n)});
}

/** Weyl operator X^a Z^b in dimension d. */
inline Matrix weyl(std::size_t d, std::size_t a, std::size_t b) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Zero(n, n);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t j = 0; j < d; ++j) {
    const double ph = two_pi * double(b * j % d) / double(d);
    m(static_cast<Eigen::Index>((j + a) % d), static_cast<Eigen::Index>(j)) =
        cplx(std::cos(ph), std::sin(ph));
  }
  return m;
}

/** rho -> (1 - p) rho + p Tr(rho) I/d. */
inline KrausChannel depolarizing(std::size_t d, double p, const std::string& in = "A",
                                 const std::string& out = "B") {
  check_probability(p, "depolarizing parameter");
  const double dd = double(d) * double(d);
  std::vector<Matrix> ks;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const double w = (a == 0 && b == 0) ? 1.0 - p + p / dd : p / dd;
      if (w > 0) ks.push_back(std::sqrt(w) * weyl(d, a, b));
    }
  return KrausChannel(RegisterLayout{{in, d}}, RegisterLayout{{out, d}}, std::move(ks));
}

/** rho -> (1 - p) rho + p diag(rho). */
inline KrausChannel dephasing(std::size_t d, double p, const std::string& in = "A",
                              const std::string& out = "B") {
  check_probability(p, "dephasing parameter");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Matrix> ks;
  if (p < 1) ks.push_back(std::sqrt(1 - p) * Matrix::Identity(n, n));
  if (p > 0)
    for (Eigen::Index i = 0; i < n; ++i) {
      Matrix k = Matrix::Zero(n, n);
      k(i, i) = std::sqrt(p);
      ks.push_back(k);
    }
  return KrausChannel(RegisterLayout{{in, d}}, RegisterLayout{{out, d}}, std::move(ks));
}

inline KrausChannel amplitude_damping(double gamma, const std::string& in = "A",
                                      const std::string& out = "B") {
  check_probability(gamma, "damping rate");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel(RegisterLayout{{in, 2}}, RegisterLayout{{out, 2}}, {k0, k1});
}

/** Measure in the computational basis and prepare |y> with probability
 *  w[y][x]; `w` is column stochastic. */
inline KrausChannel classical(const std::vector<std::vector<double>>& w,
                              const std::string& in = "A", const std::string& out = "B") {
  require(!w.empty() && !w[0].empty(), ErrorKind::BadParam, "empty stochastic matrix");
  const std::size_t dy = w.size(), dx = w[0].size();
  for (const auto& row : w)
    require(row.size() == dx, ErrorKind::ShapeMismatch, "ragged stochastic matrix");
  for (std::size_t x = 0; x < dx; ++x) {
    double s = 0;
    for (std::size_t y = 0; y < dy; ++y) {
      require(w[y][x] >= 0, ErrorKind::NotCPTP, "negative transition probability");
      s += w[y][x];
    }
    require(std::abs(s - 1) <= tol::trace, ErrorKind::NotCPTP,
            "column " + std::to_string(x) + " of the stochastic matrix sums to " +
                std::to_string(s));
  }
  std::vector<Matrix> ks;
  for (std::size_t y = 0; y < dy; ++y)
    for (std::size_t x = 0; x < dx; ++x)
      if (w[y][x] > 0) {
        Matrix k = Matrix::Zero(static_cast<Eigen::Index>(dy), static_cast<Eigen::Index>(dx));
        k(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = std::sqrt(w[y][x]);
        ks.push_back(std::move(k));
      }
  return KrausChannel(RegisterLayout{{in, dx}}, RegisterLayout{{out, dy}}, std::move(ks));
}

/** Qubit to qutrit erasure: the input survives with probability 1 - p,
 *  otherwise the flag |2> is emitted. */
inline KrausChannel erasure(double p, const std::string& in = "A",
                            const std::string& out = "B") {
  check_probability(p, "erasure probability");
  Matrix k0 = Matrix::Zero(3, 2), k1 = Matrix::Zero(3, 2), k2 = Matrix::Zero(3, 2);
  k0(0, 0) = k0(1, 1) = std::sqrt(1 - p);
  k1(2, 0) = std::sqrt(p);
  k2(2, 1) = std::sqrt(p);
  return KrausChannel(RegisterLayout{{in, 2}}, RegisterLayout{{out, 3}}, {k0, k1, k2});
}

}  // namespace oneshot::channels
