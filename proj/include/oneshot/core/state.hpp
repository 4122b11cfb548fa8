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
#include <utility>
#include <vector>

#include "oneshot/core/layout.hpp"
#include "oneshot/core/linalg.hpp"

namespace oneshot {

enum class Normalization { Normalized, Subnormalized };

namespace detail {

inline std::vector<std::size_t> label_indices(
    const RegisterLayout& layout, const std::vector<std::string>& labels) {
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    std::size_t i = layout.index_of(l);
    require(std::find(idx.begin(), idx.end(), i) == idx.end(),
            ErrorKind::BadPartition, "label '" + l + "' listed twice");
    idx.push_back(i);
  }
  return idx;
}

inline void validate_density(const RegisterLayout& layout, const Matrix& m,
                             Normalization norm) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  require(m.rows() == d && m.cols() == d, ErrorKind::ShapeMismatch,
          "matrix is " + std::to_string(m.rows()) + "x" +
              std::to_string(m.cols()) + " but layout has dimension " +
              std::to_string(d));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= tol::herm * scale,
          ErrorKind::NotHermitian, "matrix is not Hermitian");
  auto e = hermitian_eigen(m);
  const double lmin = e.values.size() ? e.values(e.values.size() - 1) : 0.0;
  require(lmin >= -tol::psd * scale, ErrorKind::NotPSD,
          "matrix has eigenvalue " + std::to_string(lmin));
  const double tr = m.trace().real();
  if (norm == Normalization::Normalized)
    require(std::abs(tr - 1.0) <= tol::trace, ErrorKind::NotNormalized,
            "trace is " + std::to_string(tr));
  else
    require(tr <= 1.0 + tol::trace, ErrorKind::NotNormalized,
            "subnormalized trace is " + std::to_string(tr));
}

}  // namespace detail

/** Positive semidefinite operator on a labelled register layout. */
class DensityOperator {
 public:
  DensityOperator() = default;

  DensityOperator(RegisterLayout layout, Matrix m,
                  Normalization norm = Normalization::Normalized)
      : layout_(std::move(layout)), m_(std::move(m)), norm_(norm) {
    detail::validate_density(layout_, m_, norm_);
    m_ = hermitian_part(m_);
  }

  /** Skips the spectral validation; for results of operations that
   *  preserve positivity. */
  static DensityOperator trusted(RegisterLayout layout, Matrix m,
                                 Normalization norm = Normalization::Normalized) {
    DensityOperator out;
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    require(m.rows() == d && m.cols() == d, ErrorKind::ShapeMismatch,
            "matrix does not match layout");
    out.layout_ = std::move(layout);
    out.m_ = hermitian_part(m);
    out.norm_ = norm;
    return out;
  }

  static DensityOperator diagonal(RegisterLayout layout,
                                  const std::vector<double>& probs) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(probs.size()),
                            static_cast<Eigen::Index>(probs.size()));
    for (std::size_t i = 0; i < probs.size(); ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probs[i];
    return DensityOperator(std::move(layout), std::move(m));
  }

  static DensityOperator maximally_mixed(RegisterLayout layout) {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    return trusted(std::move(layout), Matrix::Identity(d, d) / double(d));
  }

  const RegisterLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  Normalization normalization() const { return norm_; }
  std::size_t dim() const { return layout_.total_dim(); }
  double trace() const { return m_.trace().real(); }

  DensityOperator normalized() const {
    const double t = trace();
    require(t > 0, ErrorKind::NotNormalized, "cannot normalize a zero operator");
    return trusted(layout_, m_ / t);
  }

  /** Same operator with registers reordered to `labels`. */
  DensityOperator reordered(const std::vector<std::string>& labels) const {
    require(labels.size() == layout_.size(), ErrorKind::BadPartition,
            "reordering must list every register");
    auto perm = detail::label_indices(layout_, labels);
    return trusted(layout_.select(labels),
                   permute_factors(m_, layout_.dims(), perm), norm_);
  }

  DensityOperator relabeled(const std::vector<std::pair<std::string, std::string>>& renames) const {
    std::vector<Register> regs = layout_.registers();
    for (auto& r : regs)
      for (const auto& [from, to] : renames)
        if (r.label == from) {
          r.label = to;
          break;
        }
    return trusted(RegisterLayout(std::move(regs)), m_, norm_);
  }

 private:
  RegisterLayout layout_;
  Matrix m_;
  Normalization norm_ = Normalization::Normalized;
};

/** Unit vector on a labelled register layout. */
class PureState {
 public:
  PureState() = default;

  PureState(RegisterLayout layout, Vector v) : layout_(std::move(layout)), v_(std::move(v)) {
    require(v_.size() == static_cast<Eigen::Index>(layout_.total_dim()),
            ErrorKind::ShapeMismatch, "amplitude vector does not match layout");
    require(std::abs(v_.norm() - 1.0) <= tol::trace, ErrorKind::NotNormalized,
            "state vector norm is " + std::to_string(v_.norm()));
  }

  static PureState trusted(RegisterLayout layout, Vector v) {
    PureState out;
    out.layout_ = std::move(layout);
    out.v_ = std::move(v);
    return out;
  }

  static PureState basis(RegisterLayout layout, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(layout), std::move(v));
  }

  /** (1/sqrt d) sum_i |i>|i> on two registers of equal dimension d. */
  static PureState maximally_entangled(const std::string& a,
                                       const std::string& b, std::size_t d) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i)
      v(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(double(d));
    return PureState(RegisterLayout{{a, d}, {b, d}}, std::move(v));
  }

  const RegisterLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return v_; }
  std::size_t dim() const { return layout_.total_dim(); }

  DensityOperator density() const {
    return DensityOperator::trusted(layout_, v_ * v_.adjoint());
  }

  PureState reordered(const std::vector<std::string>& labels) const {
    require(labels.size() == layout_.size(), ErrorKind::BadPartition,
            "reordering must list every register");
    auto perm = detail::label_indices(layout_, labels);
    return trusted(layout_.select(labels),
                   permute_factors(v_, layout_.dims(), perm));
  }

  PureState relabeled(const std::vector<std::pair<std::string, std::string>>& renames) const {
    std::vector<Register> regs = layout_.registers();
    for (auto& r : regs)
      for (const auto& [from, to] : renames)
        if (r.label == from) {
          r.label = to;
          break;
        }
    return trusted(RegisterLayout(std::move(regs)), v_);
  }

  /** Amplitudes as a (labels) x (rest) matrix, labels first. */
  Matrix as_matrix(const std::vector<std::string>& row_labels) const {
    auto rows = layout_.select(row_labels);
    auto rest = layout_.complement(row_labels);
    auto perm = front_permutation(layout_.size(), detail::label_indices(layout_, row_labels));
    Vector p = permute_factors(v_, layout_.dims(), perm);
    const auto r = static_cast<Eigen::Index>(rows.total_dim());
    const auto c = static_cast<Eigen::Index>(rest.total_dim());
    Matrix out(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) out(i, j) = p(i * c + j);
    return out;
  }

 private:
  RegisterLayout layout_;
  Vector v_;
};

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                              std::size_t max_dim = default_max_dim()) {
  auto layout = a.layout().concat(b.layout());
  check_dim_guard(layout.total_dim(), max_dim, "tensor product");
  auto norm = (a.normalization() == Normalization::Normalized &&
               b.normalization() == Normalization::Normalized)
                  ? Normalization::Normalized
                  : Normalization::Subnormalized;
  return DensityOperator::trusted(std::move(layout), kron(a.matrix(), b.matrix()), norm);
}

inline PureState tensor(const PureState& a, const PureState& b,
                        std::size_t max_dim = default_max_dim()) {
  auto layout = a.layout().concat(b.layout());
  check_dim_guard(layout.total_dim(), max_dim, "tensor product");
  return PureState::trusted(std::move(layout), kron(a.amplitudes(), b.amplitudes()));
}

/** n-fold tensor power; copy j of register X is labelled X_j. */
inline DensityOperator tensor_power(const DensityOperator& rho, std::size_t n,
                                    std::size_t max_dim = default_max_dim()) {
  require(n >= 1, ErrorKind::BadParam, "tensor power needs n >= 1");
  auto copy = [&](std::size_t j) {
    std::vector<std::pair<std::string, std::string>> ren;
    for (const auto& l : rho.layout().labels()) ren.emplace_back(l, indexed(l, j));
    return rho.relabeled(ren);
  };
  DensityOperator out = copy(1);
  for (std::size_t j = 2; j <= n; ++j) out = tensor(out, copy(j), max_dim);
  return out;
}

/** Marginal on `keep`, in the order given. */
inline DensityOperator partial_trace_keep(const DensityOperator& rho,
                                          const std::vector<std::string>& keep) {
  const auto& layout = rho.layout();
  auto idx = detail::label_indices(layout, keep);
  auto kept = layout.select(keep);
  auto perm = front_permutation(layout.size(), idx);
  Matrix p = permute_factors(rho.matrix(), layout.dims(), perm);
  const std::size_t dk = kept.total_dim();
  Matrix out = trace_trailing(p, dk, layout.total_dim() / dk);
  return DensityOperator::trusted(std::move(kept), std::move(out), rho.normalization());
}

/** Trace out the registers in `traced`; remaining registers keep their order. */
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::string>& traced) {
  (void)detail::label_indices(rho.layout(), traced);
  return partial_trace_keep(rho, rho.layout().complement(traced).labels());
}

/** Reduced density operator of a pure state on `keep`. */
inline DensityOperator reduced(const PureState& psi,
                               const std::vector<std::string>& keep) {
  Matrix x = psi.as_matrix(keep);
  return DensityOperator::trusted(psi.layout().select(keep), x * x.adjoint());
}

/** Purification with a new register of dimension rank(rho). */
inline PureState purify(const DensityOperator& rho, const std::string& label) {
  require(!rho.layout().contains(label), ErrorKind::LabelCollision,
          "purifying label '" + label + "' already present");
  auto e = hermitian_eigen(rho.matrix());
  const double thr = support_threshold(e);
  std::vector<Eigen::Index> sup;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > thr) sup.push_back(i);
  const auto r = static_cast<Eigen::Index>(std::max<std::size_t>(sup.size(), 1));
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Vector v = Vector::Zero(d * r);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(sup.size()); ++k) {
    const double s = std::sqrt(e.values(sup[k]));
    for (Eigen::Index i = 0; i < d; ++i) v(i * r + k) = s * e.vectors(i, sup[k]);
  }
  const double nrm = v.norm();
  require(nrm > 0, ErrorKind::NotNormalized, "cannot purify a zero operator");
  auto layout = rho.layout().concat(RegisterLayout{{label, std::size_t(r)}});
  return PureState::trusted(std::move(layout), v / nrm);
}

struct SchmidtDecomposition {
  RealVector coefficients;  // descending, sum of squares 1
  Matrix left;              // columns: orthonormal vectors on the left cut
  Matrix right;             // columns: orthonormal vectors on the right cut
  RegisterLayout left_layout;
  RegisterLayout right_layout;
};

inline SchmidtDecomposition schmidt(const PureState& psi,
                                    const std::vector<std::string>& left) {
  require(!left.empty() && left.size() < psi.layout().size(),
          ErrorKind::BadPartition, "Schmidt cut must split the registers");
  Matrix x = psi.as_matrix(left);
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();
  out.left = svd.matrixU();
  out.right = svd.matrixV().conjugate();
  out.left_layout = psi.layout().select(left);
  out.right_layout = psi.layout().complement(left);
  return out;
}

/** Operator `op` on registers `labels` (in that order) embedded as
 *  op (x) I into the full `layout`. */
inline Matrix embed(const Matrix& op, const std::vector<std::string>& labels,
                    const RegisterLayout& layout) {
  auto idx = detail::label_indices(layout, labels);
  auto sub = layout.select(labels);
  const auto ds = static_cast<Eigen::Index>(sub.total_dim());
  require(op.rows() == ds && op.cols() == ds, ErrorKind::ShapeMismatch,
          "operator does not match the registers it acts on");
  const auto dr = static_cast<Eigen::Index>(layout.total_dim()) / ds;
  Matrix full = kron(op, Matrix::Identity(dr, dr));
  auto perm = front_permutation(layout.size(), idx);
  std::vector<std::size_t> perm_dims;
  for (auto p : perm) perm_dims.push_back(layout[p].dim);
  return permute_factors(full, perm_dims, inverse_permutation(perm));
}

}  // namespace oneshot
