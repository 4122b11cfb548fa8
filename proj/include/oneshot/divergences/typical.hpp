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

#include "oneshot/divergences/info_spectrum.hpp"
#include "oneshot/divergences/smoothing.hpp"

namespace oneshot {

enum class TypicalWindow {
  Multiplicative,  // eigenvalues in [(1-d) 2^{-nS}, (1+d) 2^{-nS}]
  Exponent,        // eigenvalues in [2^{-(1+d) nS}, 2^{-(1-d) nS}]
};

/** Spectral projector of rho^{(x)n} onto a window around 2^{-nS(rho)}. */
struct TypicalProjectionResult {
  Matrix projector;
  Matrix uniform;  // projector / rank
  Matrix power;    // rho^{(x)n}
  std::size_t rank = 0;
  double capture = 0;  // Tr(projector rho^{(x)n})
  double window_lo = 0;
  double window_hi = 0;
  /** (1-d) P rho P <= uniform <= (1+d) P rho P on the projector's support. */
  bool uniform_sandwich = false;
};

inline TypicalProjectionResult typical_projection(const Matrix& rho, std::size_t n,
                                                  double delta, TypicalWindow window,
                                                  std::size_t max_dim = default_max_dim()) {
  require(n >= 1, ErrorKind::BadParam, "n must be positive");
  require(delta > 0 && delta <= 1, ErrorKind::BadParam, "delta must lie in (0, 1]");
  const auto d = static_cast<std::size_t>(rho.rows());
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= d;
    check_dim_guard(total, max_dim, "typical projection");
  }
  auto e = hermitian_eigen(rho);
  const double s = entropy(rho);
  TypicalProjectionResult out;
  if (window == TypicalWindow::Multiplicative) {
    out.window_lo = (1 - delta) * std::exp2(-double(n) * s);
    out.window_hi = (1 + delta) * std::exp2(-double(n) * s);
  } else {
    out.window_lo = std::exp2(-(1 + delta) * double(n) * s);
    out.window_hi = std::exp2(-(1 - delta) * double(n) * s);
  }
  // Eigenbasis of the power is the tensor power of the eigenbasis.
  Matrix v = e.vectors;
  std::vector<double> lam(e.values.data(), e.values.data() + e.values.size());
  for (auto& x : lam) x = std::max(x, 0.0);
  std::vector<double> prod_lam = lam;
  for (std::size_t k = 1; k < n; ++k) {
    v = kron(v, e.vectors);
    std::vector<double> next;
    next.reserve(prod_lam.size() * lam.size());
    for (double a : prod_lam)
      for (double b : lam) next.push_back(a * b);
    prod_lam = std::move(next);
  }
  const double slack = 1e-12;
  Matrix pw = v;
  Matrix pr = v;
  std::size_t rank = 0;
  double cap = 0;
  for (std::size_t i = 0; i < prod_lam.size(); ++i) {
    const double l = prod_lam[i];
    const bool in = l > 0 && l >= out.window_lo * (1 - slack) && l <= out.window_hi * (1 + slack);
    pw.col(static_cast<Eigen::Index>(i)) *= l;
    if (in) {
      ++rank;
      cap += l;
    } else {
      pr.col(static_cast<Eigen::Index>(i)).setZero();
    }
  }
  out.power = hermitian_part(pw * v.adjoint());
  out.projector = hermitian_part(pr * v.adjoint());
  out.rank = rank;
  out.capture = cap;
  out.uniform = rank > 0 ? Matrix(out.projector / double(rank)) : Matrix(out.projector);
  out.uniform_sandwich = rank > 0;
  for (std::size_t i = 0; i < prod_lam.size() && rank > 0; ++i) {
    const double l = prod_lam[i];
    if (pr.col(static_cast<Eigen::Index>(i)).squaredNorm() == 0) continue;
    const double u = 1.0 / double(rank);
    if ((1 - delta) * l > u * (1 + 1e-12) || u > (1 + delta) * l * (1 + 1e-12))
      out.uniform_sandwich = false;
  }
  return out;
}

/** Outcome of the restricted smoothing pipeline on rho_AB^{(x)n}. */
struct PipelineResult {
  double delta = 0;
  std::size_t n = 0;
  TypicalProjectionResult typical_a;
  TypicalProjectionResult typical_b;
  DensityOperator power;      // rho^{(x)n}, ordered A_1..A_n B_1..B_n
  DensityOperator projected;  // rho'
  DensityOperator smoothed;   // rho''
  double projected_fidelity_sq = 0;  // F^2(rho', rho^{(x)n})
  double r_prime_bits = 0;
  double clip_weight = 0;  // Tr(Pi' rho')
  SmoothingCertificate certificate;
  double inflation_limit = 0;  // 1 + 1000 delta
  bool distance_ok = false;
  bool inflation_ok = false;
  bool dmax_finite = false;
  bool all_hold() const { return distance_ok && inflation_ok && dmax_finite; }
};

inline PipelineResult restricted_smooth_pipeline(const DensityOperator& rho,
                                                 const std::vector<std::string>& cut,
                                                 std::size_t n, double eps,
                                                 std::size_t max_dim = default_max_dim()) {
  require(eps > 0 && eps < 0.5, ErrorKind::BadParam, "eps must lie in (0, 1/2)");
  auto ref = product_reference(rho, cut);
  const auto da = ref.a.dim(), db = ref.b.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= da * db;
    check_dim_guard(total, max_dim, "restricted pipeline");
  }
  PipelineResult res;
  res.n = n;
  res.delta = eps / 576.0;
  const double delta = res.delta;

  res.typical_a = typical_projection(ref.a.matrix(), n, delta, TypicalWindow::Multiplicative, max_dim);
  res.typical_b = typical_projection(ref.b.matrix(), n, delta, TypicalWindow::Multiplicative, max_dim);
  for (const auto* t : {&res.typical_a, &res.typical_b})
    require(t->capture >= 1 - delta, ErrorKind::TypicalityFail,
            "typical projector captures " + std::to_string(t->capture) +
                " < 1 - delta at n = " + std::to_string(n) +
                "; larger n is needed");

  // rho^{(x)n} in the order A_1..A_n B_1..B_n.
  std::vector<Register> regs;
  for (std::size_t j = 1; j <= n; ++j) regs.push_back({indexed("A", j), da});
  for (std::size_t j = 1; j <= n; ++j) regs.push_back({indexed("B", j), db});
  RegisterLayout layout(regs);
  Matrix interleaved = ref.joint.matrix();
  for (std::size_t j = 1; j < n; ++j) interleaved = kron(interleaved, ref.joint.matrix());
  std::vector<std::size_t> dims, perm;
  for (std::size_t j = 0; j < n; ++j) {
    dims.push_back(da);
    dims.push_back(db);
  }
  for (std::size_t j = 0; j < n; ++j) perm.push_back(2 * j);
  for (std::size_t j = 0; j < n; ++j) perm.push_back(2 * j + 1);
  res.power = DensityOperator::trusted(layout, permute_factors(interleaved, dims, perm));

  const Matrix pab = kron(res.typical_a.projector, res.typical_b.projector);
  Matrix proj = pab * res.power.matrix() * pab;
  const double w = proj.trace().real();
  require(w > 0, ErrorKind::TypicalityFail, "typical projection annihilates the state");
  res.projected = DensityOperator::trusted(layout, proj / w);
  res.projected_fidelity_sq =
      std::pow(fidelity(res.projected.matrix(), res.power.matrix()), 2);

  const Matrix mu = kron(res.typical_a.uniform, res.typical_b.uniform);
  auto spec = info_spectrum(res.projected.matrix(), mu, 400 * delta, SpectrumVariant::Alternate);
  require(std::isfinite(spec.witness_bits), ErrorKind::NoConverge,
          "alternate information spectrum is empty");
  res.r_prime_bits = spec.witness_bits;

  const Matrix clip = info_spectrum_projector(res.projected.matrix(), mu, res.r_prime_bits,
                                              SpectrumVariant::Alternate);
  Matrix clipped = clip * res.projected.matrix() * clip;
  res.clip_weight = clipped.trace().real();
  require(res.clip_weight > 0, ErrorKind::NoConverge, "clipping removed the whole state");
  auto smoothed = DensityOperator::trusted(layout, clipped / res.clip_weight);
  res.smoothed = smoothed;

  SmoothingCertificate& cert = res.certificate;
  cert.smoothed = smoothed;
  cert.distance = purified_distance(smoothed.matrix(), res.power.matrix());
  cert.declared_distance = 24 * std::sqrt(delta);
  const std::size_t dan = res.typical_a.power.rows();
  const std::size_t dbn = res.typical_b.power.rows();
  Matrix sa = trace_trailing(smoothed.matrix(), dan, dbn);
  Matrix sb = trace_trailing(permute_factors(smoothed.matrix(), {dan, dbn}, {1, 0}), dbn, dan);
  cert.inflation_a = detail::inflation(sa, res.typical_a.power);
  cert.inflation_b = detail::inflation(sb, res.typical_b.power);
  cert.achieved_dmax_bits =
      d_max(smoothed.matrix(), kron(res.typical_a.power, res.typical_b.power));
  cert.certified_dmax_bits =
      res.r_prime_bits + 2 * std::log2(1 + delta) - std::log2(res.clip_weight);
  res.inflation_limit = 1 + 1000 * delta;
  res.distance_ok = cert.distance <= cert.declared_distance + 1e-8;
  res.inflation_ok = cert.inflation_a <= res.inflation_limit + 1e-8 &&
                     cert.inflation_b <= res.inflation_limit + 1e-8;
  res.dmax_finite = std::isfinite(cert.achieved_dmax_bits);
  return res;
}

}  // namespace oneshot
