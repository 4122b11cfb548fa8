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

#include "oneshot/core/metrics.hpp"

namespace oneshot {

/** Weight of rho outside the support of sigma. */
inline double mass_outside_support(const Matrix& rho, const HermitianEigen& sigma_eig) {
  const double thr = support_threshold(sigma_eig);
  Matrix p = sigma_eig.projector([&](double x) { return x > thr; });
  return std::max(0.0, 1.0 * rho.trace().real() - trace_product(p, rho).real());
}

inline void require_support(const Matrix& rho, const HermitianEigen& sigma_eig,
                            const char* what) {
  const double out = mass_outside_support(rho, sigma_eig);
  require(out <= tol::psd, ErrorKind::SupportViolation,
          std::string(what) + ": supp(rho) is not inside supp(sigma) (outside weight " +
              std::to_string(out) + ")");
}

namespace detail {
/** log2(rho) - log2(sigma) restricted to supports. */
inline Matrix log_ratio(const Matrix& rho, const Matrix& sigma, const char* what) {
  auto es = hermitian_eigen(sigma);
  require_support(rho, es, what);
  return log2_on_support(hermitian_eigen(rho)) - log2_on_support(es);
}
}  // namespace detail

/** D(rho||sigma) in bits. */
inline double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  Matrix l = detail::log_ratio(rho, sigma, "relative entropy");
  return trace_product(rho, l).real();
}

inline double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return relative_entropy(rho.matrix(), sigma.matrix());
}

/** V(rho||sigma) = Tr rho (log rho - log sigma)^2 - D^2, in bits squared. */
inline double relative_entropy_variance(const Matrix& rho, const Matrix& sigma) {
  Matrix l = detail::log_ratio(rho, sigma, "relative entropy variance");
  const double d = trace_product(rho, l).real();
  const double second = trace_product(rho, l * l).real();
  return std::max(0.0, second - d * d);
}

inline double relative_entropy_variance(const DensityOperator& rho,
                                        const DensityOperator& sigma) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return relative_entropy_variance(rho.matrix(), sigma.matrix());
}

/** D_max(rho||sigma) = log2 lambda_max(sigma^{-1/2} rho sigma^{-1/2}). */
inline double d_max(const Matrix& rho, const Matrix& sigma) {
  auto es = hermitian_eigen(sigma);
  require_support(rho, es, "max-relative entropy");
  const double thr = support_threshold(es);
  Matrix s = es.apply([&](double x) { return x > thr ? 1.0 / std::sqrt(x) : 0.0; });
  const double l = lambda_max(s * rho * s);
  require(l > 0, ErrorKind::NotPSD, "max-relative entropy of a zero operator");
  return std::log2(l);
}

inline double d_max(const DensityOperator& rho, const DensityOperator& sigma) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return d_max(rho.matrix(), sigma.matrix());
}

/** The pair (rho_AB, rho_A (x) rho_B) with registers ordered as (A, B). */
struct ProductReference {
  DensityOperator joint;
  DensityOperator product;
  DensityOperator a;
  DensityOperator b;
};

inline ProductReference product_reference(const DensityOperator& rho,
                                          const std::vector<std::string>& cut) {
  auto rest = rho.layout().complement(cut).labels();
  require(!cut.empty() && !rest.empty(), ErrorKind::BadPartition,
          "the cut must split the registers");
  std::vector<std::string> order = cut;
  order.insert(order.end(), rest.begin(), rest.end());
  auto joint = rho.reordered(order);
  auto a = partial_trace_keep(rho, cut);
  auto b = partial_trace_keep(rho, rest);
  auto prod = DensityOperator::trusted(joint.layout(), kron(a.matrix(), b.matrix()));
  return {joint, prod, a, b};
}

/** I_max(A:B) = D_max(rho_AB || rho_A (x) rho_B), A being `cut`. */
inline double i_max(const DensityOperator& rho, const std::vector<std::string>& cut) {
  auto ref = product_reference(rho, cut);
  return d_max(ref.joint.matrix(), ref.product.matrix());
}

}  // namespace oneshot
