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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/convex_split/schur_weyl.hpp"
#include "oneshot/divergences/relative_entropy.hpp"

namespace oneshot {

enum class ConvexSplitMethod {
  Auto,       // classical if commuting, symmetric for qubit copies, else dense
  Dense,      // materialise tau
  Symmetric,  // permutation-symmetric block decomposition (qubit copies)
  Classical,  // type enumeration for commuting inputs
};

inline const char* to_string(ConvexSplitMethod m) {
  switch (m) {
    case ConvexSplitMethod::Auto: return "auto";
    case ConvexSplitMethod::Dense: return "dense";
    case ConvexSplitMethod::Symmetric: return "symmetric";
    case ConvexSplitMethod::Classical: return "classical";
  }
  return "auto";
}

/** A convex-split state with its exact distance to the product reference. */
struct ConvexSplitState {
  std::size_t n = 0;  // copies of Q
  std::size_t m = 1;  // copies of P (bipartite form)
  double k_bits = 0;
  double exact_distance = 0;
  double declared_bound = 0;
  bool bound_applicable = true;
  ConvexSplitMethod method = ConvexSplitMethod::Dense;
  std::optional<DensityOperator> state;      // tau, when materialised
  std::optional<DensityOperator> reference;  // product reference, when materialised
  bool holds(double slack = 1e-8) const {
    return !bound_applicable || exact_distance <= declared_bound + slack;
  }
};

namespace detail {

/** rho_PQ as a matrix on (P, Q) with P the complement of `q_labels`. */
inline ProductReference split_pq(const DensityOperator& rho,
                                 const std::vector<std::string>& q_labels) {
  auto p_labels = rho.layout().complement(q_labels).labels();
  return product_reference(rho, p_labels);
}

inline Matrix power(const Matrix& m, std::size_t n) {
  if (n == 0) return Matrix::Identity(1, 1);
  Matrix out = m;
  for (std::size_t i = 1; i < n; ++i) out = kron(out, m);
  return out;
}

inline bool all_diagonal(std::initializer_list<const Matrix*> ms) {
  for (auto* m : ms)
    if (!is_diagonal(*m)) return false;
  return true;
}

/** F(tau, rho_P (x) sigma^{(x)n}) for qubit Q via the Schur-Weyl blocks. */
inline double symmetric_fidelity(const Matrix& rho_pq, const Matrix& rho_p,
                                 const Matrix& sigma, std::size_t n) {
  const Eigen::Index dp = rho_p.rows();
  double f = 0;
  for (std::size_t k = 0; 2 * k <= n; ++k) {
    const Eigen::Index dv = static_cast<Eigen::Index>(n - 2 * k + 1);
    Matrix w = kron(rho_p, schur_weyl::irrep(sigma, Matrix::Zero(2, 2), n, k).first);
    Matrix mk = Matrix::Zero(dp * dv, dp * dv);
    for (Eigen::Index a = 0; a < dp; ++a)
      for (Eigen::Index b = 0; b < dp; ++b) {
        Matrix r = rho_pq.block(a * 2, b * 2, 2, 2);
        if (r.cwiseAbs().maxCoeff() == 0) continue;
        mk.block(a * dv, b * dv, dv, dv) += schur_weyl::irrep(sigma, r, n, k).second / double(n);
      }
    f += schur_weyl::multiplicity(n, k) * fidelity(hermitian_part(mk), hermitian_part(w));
  }
  return f;
}

/** Same for the bipartite form with qubit P and qubit Q. */
inline double symmetric_fidelity_bipartite(const Matrix& rho_pq, const Matrix& rho_p,
                                           const Matrix& rho_q, std::size_t m,
                                           std::size_t n) {
  double f = 0;
  for (std::size_t k = 0; 2 * k <= m; ++k)
    for (std::size_t l = 0; 2 * l <= n; ++l) {
      const Eigen::Index dk = static_cast<Eigen::Index>(m - 2 * k + 1);
      const Eigen::Index dl = static_cast<Eigen::Index>(n - 2 * l + 1);
      Matrix w = kron(schur_weyl::irrep(rho_p, Matrix::Zero(2, 2), m, k).first,
                      schur_weyl::irrep(rho_q, Matrix::Zero(2, 2), n, l).first);
      Matrix mk = Matrix::Zero(dk * dl, dk * dl);
      std::vector<Matrix> dp(4), dq(4);
      for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index b = 0; b < 2; ++b) {
          dp[static_cast<std::size_t>(a * 2 + b)] =
              schur_weyl::irrep(rho_p, schur_weyl::unit(2, a, b), m, k).second;
          dq[static_cast<std::size_t>(a * 2 + b)] =
              schur_weyl::irrep(rho_q, schur_weyl::unit(2, a, b), n, l).second;
        }
      for (Eigen::Index a = 0; a < 2; ++a)
        for (Eigen::Index b = 0; b < 2; ++b)
          for (Eigen::Index c = 0; c < 2; ++c)
            for (Eigen::Index d = 0; d < 2; ++d) {
              const cplx coef = rho_pq(a * 2 + c, b * 2 + d);
              if (coef == cplx(0)) continue;
              mk += coef * kron(dp[static_cast<std::size_t>(a * 2 + b)],
                                dq[static_cast<std::size_t>(c * 2 + d)]);
            }
      mk /= double(n) * double(m);
      f += schur_weyl::multiplicity(m, k) * schur_weyl::multiplicity(n, l) *
           fidelity(hermitian_part(mk), hermitian_part(w));
    }
  return f;
}

/** F(tau, rho_P (x) sigma^{(x)n}) for commuting inputs by enumerating types. */
inline double classical_fidelity(const Matrix& rho_pq, const Matrix& rho_p,
                                 const Matrix& sigma, std::size_t n,
                                 std::size_t max_types) {
  const Eigen::Index dp = rho_p.rows(), dq = sigma.rows();
  std::vector<Eigen::Index> letters;
  for (Eigen::Index q = 0; q < dq; ++q)
    if (sigma(q, q).real() > 0) letters.push_back(q);
  const std::size_t L = letters.size();
  // Number of types is C(n + L - 1, L - 1).
  const double types = schur_weyl::binomial(n + L - 1, L - 1);
  require(types <= double(max_types), ErrorKind::DimGuard,
          "classical convex split needs " + std::to_string(types) + " types");
  std::vector<double> log_sigma(L);
  for (std::size_t i = 0; i < L; ++i) log_sigma[i] = std::log(sigma(letters[i], letters[i]).real());
  double f = 0;
  std::vector<std::size_t> c(L, 0);
  const double lg_n = std::lgamma(double(n) + 1);
  for (Eigen::Index p = 0; p < dp; ++p) {
    const double pp = rho_p(p, p).real();
    if (pp <= 0) continue;
    std::vector<double> like(L);
    for (std::size_t i = 0; i < L; ++i)
      like[i] = rho_pq(p * dq + letters[i], p * dq + letters[i]).real() /
                (pp * sigma(letters[i], letters[i]).real());
    // Enumerate compositions of n into L parts.
    double acc = 0;
    std::function<void(std::size_t, std::size_t, double, double)> rec =
        [&](std::size_t i, std::size_t left, double logw, double lin) {
          if (i + 1 == L) {
            const double lw = logw - std::lgamma(double(left) + 1) + double(left) * log_sigma[i];
            const double total = lin + double(left) * like[i];
            acc += std::exp(lg_n + lw) * std::sqrt(std::max(total, 0.0) / double(n));
            return;
          }
          for (std::size_t ci = 0; ci <= left; ++ci)
            rec(i + 1, left - ci,
                logw - std::lgamma(double(ci) + 1) + double(ci) * log_sigma[i],
                lin + double(ci) * like[i]);
        };
    rec(0, n, 0.0, 0.0);
    f += pp * acc;
  }
  return f;
}

}  // namespace detail

struct ConvexSplitOptions {
  ConvexSplitMethod method = ConvexSplitMethod::Auto;
  std::size_t max_dim = default_max_dim();
  std::size_t max_types = 5'000'000;
  bool materialize = true;  // keep tau and the reference for the dense method
};

/** tau = (1/n) sum_j rho_{P Q_j} (x) sigma_Q^{(x)(n-1)} compared with
 *  rho_P (x) sigma_Q^{(x)n}. `q_labels` name Q inside rho_PQ. */
inline ConvexSplitState build_convex_split(const DensityOperator& rho_pq,
                                           const std::vector<std::string>& q_labels,
                                           const DensityOperator& sigma_q, std::size_t n,
                                           const ConvexSplitOptions& opt = {}) {
  require(n >= 1, ErrorKind::BadParam, "n must be positive");
  auto ref = detail::split_pq(rho_pq, q_labels);
  require(sigma_q.layout().dims() == ref.b.layout().dims(), ErrorKind::ShapeMismatch,
          "sigma_Q does not match the Q registers");
  const Matrix& joint = ref.joint.matrix();
  const Matrix& rp = ref.a.matrix();
  const Matrix& sq = sigma_q.matrix();
  const auto dp = static_cast<std::size_t>(rp.rows());
  const auto dq = static_cast<std::size_t>(sq.rows());

  ConvexSplitState out;
  out.n = n;
  out.k_bits = d_max(joint, kron(rp, sq));
  out.declared_bound = std::sqrt(std::exp2(out.k_bits) / double(n));

  ConvexSplitMethod method = opt.method;
  if (method == ConvexSplitMethod::Auto) {
    if (detail::all_diagonal({&joint, &sq})) method = ConvexSplitMethod::Classical;
    else if (dq == 2) method = ConvexSplitMethod::Symmetric;
    else method = ConvexSplitMethod::Dense;
  }
  out.method = method;

  if (method == ConvexSplitMethod::Classical) {
    require(detail::all_diagonal({&joint, &sq}), ErrorKind::BadParam,
            "classical method needs diagonal inputs");
    out.exact_distance = purified_distance_from_fidelity(
        detail::classical_fidelity(joint, rp, sq, n, opt.max_types));
    return out;
  }
  if (method == ConvexSplitMethod::Symmetric) {
    require(dq == 2, ErrorKind::BadParam, "symmetric method needs a qubit Q");
    out.exact_distance =
        purified_distance_from_fidelity(detail::symmetric_fidelity(joint, rp, sq, n));
    return out;
  }

  std::size_t total = dp;
  for (std::size_t i = 0; i < n; ++i) {
    total *= dq;
    check_dim_guard(total, opt.max_dim, "dense convex split");
  }
  std::vector<Register> regs{{"P", dp}};
  for (std::size_t j = 1; j <= n; ++j) regs.push_back({indexed("Q", j), dq});
  RegisterLayout layout(regs);
  const Matrix rest = detail::power(sq, n - 1);
  const Matrix base = kron(joint, rest);  // order P, Q_j, others
  std::vector<std::size_t> dims(n + 1, dq);
  dims[0] = dp;
  Matrix tau = Matrix::Zero(Eigen::Index(total), Eigen::Index(total));
  for (std::size_t j = 1; j <= n; ++j) {
    // base factor order: P, Q_j, then Q_i for i != j ascending.
    std::vector<std::size_t> order{0, j};
    for (std::size_t i = 1; i <= n; ++i)
      if (i != j) order.push_back(i);
    tau += permute_factors(base, dims, inverse_permutation(order));
  }
  tau /= double(n);
  Matrix reference = kron(rp, detail::power(sq, n));
  out.exact_distance = purified_distance(tau, reference);
  if (opt.materialize) {
    out.state = DensityOperator::trusted(layout, tau);
    out.reference = DensityOperator::trusted(layout, reference);
  }
  return out;
}

/** Smoothing data behind the bipartite bound. */
struct BipartiteCertificate {
  double k_bits = 0;  // restricted smooth max-information
  double eps = 0;
  double delta = 0;
};

/** tau = (1/nm) sum_{i,j} rho_{P_i Q_j} (x) rho_P^{(x)(m-1)} (x) rho_Q^{(x)(n-1)}
 *  compared with rho_P^{(x)m} (x) rho_Q^{(x)n}. With no certificate the
 *  exact I_max is used and eps = delta = 0. */
inline ConvexSplitState build_bipartite_convex_split(
    const DensityOperator& rho_pq, const std::vector<std::string>& q_labels, std::size_t m,
    std::size_t n, std::optional<BipartiteCertificate> cert = std::nullopt,
    const ConvexSplitOptions& opt = {}) {
  require(n >= 1 && m >= 1, ErrorKind::BadParam, "n and m must be positive");
  auto ref = detail::split_pq(rho_pq, q_labels);
  const Matrix& joint = ref.joint.matrix();
  const Matrix& rp = ref.a.matrix();
  const Matrix& rq = ref.b.matrix();
  const auto dp = static_cast<std::size_t>(rp.rows());
  const auto dq = static_cast<std::size_t>(rq.rows());

  ConvexSplitState out;
  out.n = n;
  out.m = m;
  if (!cert) cert = BipartiteCertificate{d_max(joint, kron(rp, rq)), 0.0, 0.0};
  require(cert->eps >= 0 && cert->delta >= 0, ErrorKind::BadParam,
          "smoothing parameters must be non-negative");
  out.k_bits = cert->k_bits;
  const double nm = double(n) * double(m);
  out.declared_bound = cert->eps + 2 * std::sqrt(cert->delta) + std::sqrt(std::exp2(cert->k_bits) / nm);
  out.bound_applicable =
      cert->delta == 0 ? cert->eps == 0
                       : (double(n) > 1 / cert->delta && double(m) > 1 / cert->delta);

  ConvexSplitMethod method = opt.method;
  if (method == ConvexSplitMethod::Auto)
    method = (dp == 2 && dq == 2) ? ConvexSplitMethod::Symmetric : ConvexSplitMethod::Dense;
  require(method != ConvexSplitMethod::Classical, ErrorKind::BadParam,
          "bipartite split has no classical method");
  out.method = method;
  if (method == ConvexSplitMethod::Symmetric) {
    require(dp == 2 && dq == 2, ErrorKind::BadParam, "symmetric method needs qubit P and Q");
    out.exact_distance = purified_distance_from_fidelity(
        detail::symmetric_fidelity_bipartite(joint, rp, rq, m, n));
    return out;
  }

  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= dp;
    check_dim_guard(total, opt.max_dim, "dense bipartite convex split");
  }
  for (std::size_t i = 0; i < n; ++i) {
    total *= dq;
    check_dim_guard(total, opt.max_dim, "dense bipartite convex split");
  }
  std::vector<Register> regs;
  for (std::size_t i = 1; i <= m; ++i) regs.push_back({indexed("P", i), dp});
  for (std::size_t j = 1; j <= n; ++j) regs.push_back({indexed("Q", j), dq});
  RegisterLayout layout(regs);
  const Matrix base = kron(kron(joint, detail::power(rp, m - 1)), detail::power(rq, n - 1));
  // base order: P_i, Q_j, other P ascending, other Q ascending.
  std::vector<std::size_t> dims;
  dims.push_back(dp);
  dims.push_back(dq);
  for (std::size_t i = 1; i < m; ++i) dims.push_back(dp);
  for (std::size_t j = 1; j < n; ++j) dims.push_back(dq);
  Matrix tau = Matrix::Zero(Eigen::Index(total), Eigen::Index(total));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // Position in the final layout of each base factor.
      std::vector<std::size_t> target{i, m + j};
      for (std::size_t a = 0; a < m; ++a)
        if (a != i) target.push_back(a);
      for (std::size_t b = 0; b < n; ++b)
        if (b != j) target.push_back(m + b);
      // permute_factors wants: new factor t is old factor perm[t].
      tau += permute_factors(base, dims, inverse_permutation(target));
    }
  tau /= nm;
  Matrix reference = kron(detail::power(rp, m), detail::power(rq, n));
  out.exact_distance = purified_distance(tau, reference);
  if (opt.materialize) {
    out.state = DensityOperator::trusted(layout, tau);
    out.reference = DensityOperator::trusted(layout, reference);
  }
  return out;
}

}  // namespace oneshot
