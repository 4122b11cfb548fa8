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

#include <string>
#include <vector>

#include "oneshot/core/metrics.hpp"

namespace oneshot {

/** Isometry V from the source purifier to the target purifier maximising
 *  |<target| (I (x) V) |source>|, which equals F of the shared marginals. */
struct UhlmannResult {
  Matrix isometry;  // dim(target purifier) x dim(source purifier)
  RegisterLayout source_purifier;
  RegisterLayout target_purifier;
  double overlap = 0;
  PureState mapped;  // (I (x) V)|source>, in the target's register order
};

inline UhlmannResult uhlmann_isometry(const PureState& target, const PureState& source,
                                      const std::vector<std::string>& shared) {
  require(!shared.empty(), ErrorKind::BadPartition, "no shared registers");
  auto ts = target.layout().select(shared);
  auto ss = source.layout().select(shared);
  require(ts.dims() == ss.dims(), ErrorKind::ShapeMismatch,
          "shared registers have different dimensions");
  UhlmannResult out;
  out.source_purifier = source.layout().complement(shared);
  out.target_purifier = target.layout().complement(shared);
  const auto ds = static_cast<Eigen::Index>(out.source_purifier.total_dim());
  const auto dt = static_cast<Eigen::Index>(out.target_purifier.total_dim());
  require(ds <= dt, ErrorKind::ShapeMismatch,
          "source purifier (" + std::to_string(ds) + ") is larger than target purifier (" +
              std::to_string(dt) + ")");
  Matrix s = source.as_matrix(shared);  // X x ds
  Matrix t = target.as_matrix(shared);  // X x dt
  Matrix b = (t.adjoint() * s).conjugate();  // dt x ds
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.isometry = svd.matrixU() * svd.matrixV().adjoint();
  Matrix mapped = s * out.isometry.transpose();  // X x dt
  Vector v(mapped.size());
  for (Eigen::Index i = 0; i < mapped.rows(); ++i)
    for (Eigen::Index j = 0; j < mapped.cols(); ++j) v(i * mapped.cols() + j) = mapped(i, j);
  auto tmp = PureState::trusted(ts.concat(out.target_purifier), v);
  out.mapped = tmp.reordered(target.layout().labels());
  out.overlap = std::abs(target.amplitudes().dot(out.mapped.amplitudes()));
  return out;
}

/** Tensor product of all parts, reordered to `order`, scaled by `coef`. */
inline Vector assemble_term(const std::vector<PureState>& parts,
                            const std::vector<std::string>& order, cplx coef,
                            std::size_t max_dim) {
  PureState acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = tensor(acc, parts[i], max_dim);
  return coef * acc.reordered(order).amplitudes();
}

/** |k> on a register of dimension d. */
inline PureState basis_ket(const std::string& label, std::size_t d, std::size_t k) {
  return PureState::basis(RegisterLayout{{label, d}}, k);
}

/** Purification of a convex-split state:
 *  n^{-1/2} sum_k |k>_K |psi>_{..., Q_{pos_k}} (x) |0>_{Q''_{pos_k}}
 *  (x)_{l != k} |sigma>_{Q''_{pos_l} Q_{pos_l}}.
 *  `psi` contains `q`; `sigma` lives on (q, q_pur). Copies are labelled by
 *  `positions`. Result order: K, other psi registers, then (Q''_p, Q_p). */
inline PureState convex_split_purification(const PureState& psi, const std::string& q,
                                           const PureState& sigma, const std::string& q_pur,
                                           const std::vector<std::size_t>& positions,
                                           const std::string& k_label = "K",
                                           std::size_t max_dim = default_max_dim()) {
  const std::size_t n = positions.size();
  require(n >= 1, ErrorKind::BadParam, "need at least one copy");
  require(sigma.layout().size() == 2 && sigma.layout().contains(q) &&
              sigma.layout().contains(q_pur),
          ErrorKind::BadParam, "sigma must live on (Q, Q'')");
  require(psi.layout().dim_of(q) == sigma.layout().dim_of(q), ErrorKind::ShapeMismatch,
          "Q dimensions differ");
  const std::size_t dpur = sigma.layout().dim_of(q_pur);
  std::vector<std::string> order{k_label};
  for (const auto& l : psi.layout().labels())
    if (l != q) order.push_back(l);
  for (auto p : positions) {
    order.push_back(indexed(q_pur, p));
    order.push_back(indexed(q, p));
  }
  Vector total;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<PureState> parts{basis_ket(k_label, n, k),
                                 psi.relabeled({{q, indexed(q, positions[k])}}),
                                 basis_ket(indexed(q_pur, positions[k]), dpur, 0)};
    for (std::size_t l = 0; l < n; ++l)
      if (l != k)
        parts.push_back(sigma.relabeled(
            {{q, indexed(q, positions[l])}, {q_pur, indexed(q_pur, positions[l])}}));
    Vector term = assemble_term(parts, order, 1.0 / std::sqrt(double(n)), max_dim);
    if (total.size() == 0) total = term;
    else total += term;
  }
  std::vector<Register> regs{{k_label, n}};
  for (const auto& r : psi.layout().registers())
    if (r.label != q) regs.push_back(r);
  for (auto p : positions) {
    regs.push_back({indexed(q_pur, p), dpur});
    regs.push_back({indexed(q, p), psi.layout().dim_of(q)});
  }
  return PureState::trusted(RegisterLayout(regs), total);
}

/** Bipartite analogue over the grid of (P, Q) positions with one index
 *  register of dimension m n. */
inline PureState bipartite_convex_split_purification(
    const PureState& psi, const std::string& p, const std::string& q,
    const PureState& sigma_p, const std::string& p_pur, const PureState& sigma_q,
    const std::string& q_pur, const std::vector<std::size_t>& p_positions,
    const std::vector<std::size_t>& q_positions, const std::string& k_label = "K",
    std::size_t max_dim = default_max_dim()) {
  const std::size_t m = p_positions.size(), n = q_positions.size();
  require(m >= 1 && n >= 1, ErrorKind::BadParam, "need at least one copy of each side");
  const std::size_t dpp = sigma_p.layout().dim_of(p_pur);
  const std::size_t dqp = sigma_q.layout().dim_of(q_pur);
  std::vector<std::string> order{k_label};
  for (const auto& l : psi.layout().labels())
    if (l != p && l != q) order.push_back(l);
  for (auto i : p_positions) {
    order.push_back(indexed(p_pur, i));
    order.push_back(indexed(p, i));
  }
  for (auto j : q_positions) {
    order.push_back(indexed(q_pur, j));
    order.push_back(indexed(q, j));
  }
  Vector total;
  const double c = 1.0 / std::sqrt(double(m) * double(n));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<PureState> parts{
          basis_ket(k_label, m * n, a * n + b),
          psi.relabeled({{p, indexed(p, p_positions[a])}, {q, indexed(q, q_positions[b])}}),
          basis_ket(indexed(p_pur, p_positions[a]), dpp, 0),
          basis_ket(indexed(q_pur, q_positions[b]), dqp, 0)};
      for (std::size_t i = 0; i < m; ++i)
        if (i != a)
          parts.push_back(sigma_p.relabeled(
              {{p, indexed(p, p_positions[i])}, {p_pur, indexed(p_pur, p_positions[i])}}));
      for (std::size_t j = 0; j < n; ++j)
        if (j != b)
          parts.push_back(sigma_q.relabeled(
              {{q, indexed(q, q_positions[j])}, {q_pur, indexed(q_pur, q_positions[j])}}));
      Vector term = assemble_term(parts, order, c, max_dim);
      if (total.size() == 0) total = term;
      else total += term;
    }
  std::vector<Register> regs{{k_label, m * n}};
  for (const auto& r : psi.layout().registers())
    if (r.label != p && r.label != q) regs.push_back(r);
  for (auto i : p_positions) {
    regs.push_back({indexed(p_pur, i), dpp});
    regs.push_back({indexed(p, i), psi.layout().dim_of(p)});
  }
  for (auto j : q_positions) {
    regs.push_back({indexed(q_pur, j), dqp});
    regs.push_back({indexed(q, j), psi.layout().dim_of(q)});
  }
  return PureState::trusted(RegisterLayout(regs), total);
}

}  // namespace oneshot
