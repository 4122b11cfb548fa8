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

#include "oneshot/divergences/relative_entropy.hpp"

namespace oneshot {

/** A smoothed state together with what was proven and what was measured. */
struct SmoothingCertificate {
  DensityOperator smoothed;
  double distance = 0;           // P(smoothed, original)
  double declared_distance = 0;  // radius the construction promises
  double certified_dmax_bits = 0;
  double achieved_dmax_bits = 0;
  double inflation_a = 1;  // lambda_max(rho_A^{-1/2} smoothed_A rho_A^{-1/2})
  double inflation_b = 1;
  bool holds() const {
    return distance <= declared_distance + 1e-8 &&
           achieved_dmax_bits <= certified_dmax_bits + 1e-6;
  }
};

namespace detail {
inline double inflation(const Matrix& smoothed, const Matrix& reference) {
  return std::exp2(d_max(smoothed, reference));
}
}  // namespace detail

/** Upper certificate for the smooth max-information: returns rho'' in the
 *  2 eps ball with rho''_A = rho_A and
 *  D_max(rho'' || rho''_A (x) rho_B) <= D_max(rho || sigma_A (x) rho_B) + log2(3/eps^2).
 *  `cut` names the A registers; the result is ordered (A, B). */
inline SmoothingCertificate smooth_dmax_upper(const DensityOperator& rho,
                                              const std::vector<std::string>& cut,
                                              const DensityOperator& sigma_a, double eps) {
  require(eps > 0 && eps < 1, ErrorKind::BadParam, "eps must lie in (0, 1)");
  auto ref = product_reference(rho, cut);
  require(sigma_a.layout().dims() == ref.a.layout().dims(), ErrorKind::ShapeMismatch,
          "sigma_A does not match the A registers");
  const auto da = static_cast<Eigen::Index>(ref.a.dim());
  const auto db = static_cast<Eigen::Index>(ref.b.dim());
  const Matrix ref_sigma = kron(sigma_a.matrix(), ref.b.matrix());
  const double base = d_max(ref.joint.matrix(), ref_sigma);

  // Purify rho_AB, cut A | BC and keep the smallest Schmidt block whose
  // weight reaches sqrt(1 - eps^2).
  std::string c_label = "C";
  while (ref.joint.layout().contains(c_label)) c_label += "'";
  auto psi = purify(ref.joint, c_label);
  Matrix x = psi.as_matrix(cut);
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double target = std::sqrt(1 - eps * eps);
  double acc = 0;
  Eigen::Index keep = 0;
  while (keep < s.size() && acc < target - 1e-15) {
    const double level = s(keep) * s(keep);
    while (keep < s.size() && std::abs(s(keep) * s(keep) - level) <= 1e-12 * std::max(level, 1e-300)) {
      acc += s(keep) * s(keep);
      ++keep;
    }
  }
  Matrix xp = svd.matrixU().leftCols(keep) * s.head(keep).asDiagonal() *
              svd.matrixV().leftCols(keep).adjoint();
  // xp is A x (B C); trace C to get rho'_AB.
  const Eigen::Index dc = xp.cols() / db;
  Matrix rho_p = Matrix::Zero(da * db, da * db);
  for (Eigen::Index a1 = 0; a1 < da; ++a1)
    for (Eigen::Index b1 = 0; b1 < db; ++b1)
      for (Eigen::Index a2 = 0; a2 < da; ++a2)
        for (Eigen::Index b2 = 0; b2 < db; ++b2) {
          cplx v = 0;
          for (Eigen::Index c = 0; c < dc; ++c)
            v += xp(a1, b1 * dc + c) * std::conj(xp(a2, b2 * dc + c));
          rho_p(a1 * db + b1, a2 * db + b2) = v;
        }
  Matrix rho_pa = trace_trailing(rho_p, std::size_t(da), std::size_t(db));
  Matrix smoothed = rho_p + kron(ref.a.matrix() - rho_pa, ref.b.matrix());

  SmoothingCertificate cert;
  cert.smoothed = DensityOperator::trusted(ref.joint.layout(), hermitian_part(smoothed));
  cert.distance = purified_distance(cert.smoothed.matrix(), ref.joint.matrix());
  cert.declared_distance = 2 * eps;
  cert.certified_dmax_bits = base + std::log2(3.0 / (eps * eps));
  Matrix sm_a = trace_trailing(cert.smoothed.matrix(), std::size_t(da), std::size_t(db));
  cert.achieved_dmax_bits = d_max(cert.smoothed.matrix(), kron(sm_a, ref.b.matrix()));
  cert.inflation_a = detail::inflation(sm_a, ref.a.matrix());
  auto sm_b = partial_trace_keep(cert.smoothed, ref.b.layout().labels());
  cert.inflation_b = detail::inflation(sm_b.matrix(), ref.b.matrix());
  return cert;
}

}  // namespace oneshot
