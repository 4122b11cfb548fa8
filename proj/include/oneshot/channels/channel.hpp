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

#include "oneshot/core/state.hpp"

namespace oneshot {

/** Completely positive trace-preserving map given by Kraus operators, each
 *  of shape dim(output) x dim(input). */
class KrausChannel {
 public:
  KrausChannel() = default;

  KrausChannel(RegisterLayout input, RegisterLayout output, std::vector<Matrix> kraus)
      : in_(std::move(input)), out_(std::move(output)), kraus_(std::move(kraus)) {
    require(!kraus_.empty(), ErrorKind::NotCPTP, "channel has no Kraus operators");
    const auto di = static_cast<Eigen::Index>(in_.total_dim());
    const auto dout = static_cast<Eigen::Index>(out_.total_dim());
    Matrix sum = Matrix::Zero(di, di);
    for (const auto& k : kraus_) {
      require(k.rows() == dout && k.cols() == di, ErrorKind::ShapeMismatch,
              "Kraus operator has shape " + std::to_string(k.rows()) + "x" +
                  std::to_string(k.cols()) + ", expected " + std::to_string(dout) +
                  "x" + std::to_string(di));
      sum += k.adjoint() * k;
    }
    const double dev = (sum - Matrix::Identity(di, di)).cwiseAbs().maxCoeff();
    require(dev <= tol::trace, ErrorKind::NotCPTP,
            "sum of K^dagger K deviates from identity by " + std::to_string(dev));
  }

  const RegisterLayout& input_layout() const { return in_; }
  const RegisterLayout& output_layout() const { return out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  /** Same channel with input/output registers renamed. */
  KrausChannel relabeled(const std::vector<std::string>& in_labels,
                         const std::vector<std::string>& out_labels) const {
    require(in_labels.size() == in_.size() && out_labels.size() == out_.size(),
            ErrorKind::BadParam, "relabeling must name every register");
    std::vector<Register> ri, ro;
    for (std::size_t i = 0; i < in_.size(); ++i) ri.push_back({in_labels[i], in_[i].dim});
    for (std::size_t i = 0; i < out_.size(); ++i) ro.push_back({out_labels[i], out_[i].dim});
    return KrausChannel(RegisterLayout(ri), RegisterLayout(ro), kraus_);
  }

 private:
  RegisterLayout in_;
  RegisterLayout out_;
  std::vector<Matrix> kraus_;
};

/** Unnormalized Choi matrix C = sum_ij |i><j| (x) N(|i><j|) on input (x) output. */
struct ChoiMatrix {
  RegisterLayout input;
  RegisterLayout output;
  Matrix matrix;
};

inline ChoiMatrix choi_from_kraus(const KrausChannel& ch) {
  const auto di = static_cast<Eigen::Index>(ch.input_layout().total_dim());
  const auto dout = static_cast<Eigen::Index>(ch.output_layout().total_dim());
  Matrix c = Matrix::Zero(di * dout, di * dout);
  for (const auto& k : ch.kraus()) {
    Vector v(di * dout);
    for (Eigen::Index i = 0; i < di; ++i)
      for (Eigen::Index o = 0; o < dout; ++o) v(i * dout + o) = k(o, i);
    c += v * v.adjoint();
  }
  return {ch.input_layout(), ch.output_layout(), c};
}

/** Kraus operators from the eigendecomposition of a Choi matrix. */
inline KrausChannel kraus_from_choi(const ChoiMatrix& choi) {
  const auto di = static_cast<Eigen::Index>(choi.input.total_dim());
  const auto dout = static_cast<Eigen::Index>(choi.output.total_dim());
  require(choi.matrix.rows() == di * dout && choi.matrix.cols() == di * dout,
          ErrorKind::ShapeMismatch, "Choi matrix does not match layouts");
  const double scale = std::max(1.0, choi.matrix.cwiseAbs().maxCoeff());
  require((choi.matrix - choi.matrix.adjoint()).cwiseAbs().maxCoeff() <= tol::herm * scale,
          ErrorKind::NotHermitian, "Choi matrix is not Hermitian");
  auto e = hermitian_eigen(choi.matrix);
  require(e.values(e.size() - 1) >= -tol::psd * scale, ErrorKind::NotPSD,
          "Choi matrix is not positive semidefinite");
  Matrix tr_out = Matrix::Zero(di, di);
  for (Eigen::Index a = 0; a < di; ++a)
    for (Eigen::Index b = 0; b < di; ++b)
      for (Eigen::Index o = 0; o < dout; ++o) tr_out(a, b) += choi.matrix(a * dout + o, b * dout + o);
  require((tr_out - Matrix::Identity(di, di)).cwiseAbs().maxCoeff() <= tol::trace,
          ErrorKind::NotCPTP, "partial trace of the Choi matrix is not the identity");
  const double thr = support_threshold(e);
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    if (e.values(k) <= thr) continue;
    const double s = std::sqrt(e.values(k));
    Matrix op(dout, di);
    for (Eigen::Index i = 0; i < di; ++i)
      for (Eigen::Index o = 0; o < dout; ++o) op(o, i) = s * e.vectors(i * dout + o, k);
    kraus.push_back(std::move(op));
  }
  return KrausChannel(choi.input, choi.output, std::move(kraus));
}

namespace detail {

/** sum_k (K (x) I) m (K (x) I)^dagger with the channel input as the leading factor. */
inline Matrix apply_leading(const std::vector<Matrix>& kraus, const Matrix& m,
                            Eigen::Index din, Eigen::Index dout, Eigen::Index dr) {
  Matrix out = Matrix::Zero(dout * dr, dout * dr);
  std::vector<Matrix> t(static_cast<std::size_t>(dout * din));
  for (const auto& k : kraus) {
    for (Eigen::Index o1 = 0; o1 < dout; ++o1)
      for (Eigen::Index j = 0; j < din; ++j) {
        Matrix acc = Matrix::Zero(dr, dr);
        for (Eigen::Index i = 0; i < din; ++i)
          if (k(o1, i) != cplx(0)) acc += k(o1, i) * m.block(i * dr, j * dr, dr, dr);
        t[static_cast<std::size_t>(o1 * din + j)] = std::move(acc);
      }
    for (Eigen::Index o1 = 0; o1 < dout; ++o1)
      for (Eigen::Index o2 = 0; o2 < dout; ++o2) {
        auto blk = out.block(o1 * dr, o2 * dr, dr, dr);
        for (Eigen::Index j = 0; j < din; ++j)
          if (k(o2, j) != cplx(0))
            blk += std::conj(k(o2, j)) * t[static_cast<std::size_t>(o1 * din + j)];
      }
  }
  return out;
}

}  // namespace detail

/** Apply `ch` to the registers `targets` (listed in the channel's input
 *  order). The output registers take the place of the first target. */
inline DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho,
                                     const std::vector<std::string>& targets,
                                     std::size_t max_dim = default_max_dim()) {
  const auto& lay = rho.layout();
  require(targets.size() == ch.input_layout().size(), ErrorKind::ShapeMismatch,
          "channel expects " + std::to_string(ch.input_layout().size()) + " input registers");
  auto idx = detail::label_indices(lay, targets);
  for (std::size_t i = 0; i < targets.size(); ++i)
    require(lay[idx[i]].dim == ch.input_layout()[i].dim, ErrorKind::ShapeMismatch,
            "register '" + targets[i] + "' has the wrong dimension for the channel");
  auto rest = lay.complement(targets);
  for (const auto& r : ch.output_layout().registers())
    require(!rest.contains(r.label), ErrorKind::LabelCollision,
            "channel output label '" + r.label + "' already present");
  const auto din = static_cast<Eigen::Index>(ch.input_layout().total_dim());
  const auto dout = static_cast<Eigen::Index>(ch.output_layout().total_dim());
  const auto dr = static_cast<Eigen::Index>(rest.total_dim());
  check_dim_guard(static_cast<std::size_t>(std::max(dout, din) * dr), max_dim, "channel application");

  auto perm = front_permutation(lay.size(), idx);
  Matrix p = permute_factors(rho.matrix(), lay.dims(), perm);
  Matrix out = detail::apply_leading(ch.kraus(), p, din, dout, dr);

  // Final order: rest, with the outputs inserted where the first target was.
  std::vector<std::string> final_order;
  std::size_t first = *std::min_element(idx.begin(), idx.end());
  for (std::size_t i = 0; i < lay.size(); ++i) {
    if (i == first)
      for (const auto& r : ch.output_layout().registers()) final_order.push_back(r.label);
    if (std::find(targets.begin(), targets.end(), lay[i].label) == targets.end())
      final_order.push_back(lay[i].label);
  }
  auto mid = DensityOperator::trusted(ch.output_layout().concat(rest), std::move(out),
                                      rho.normalization());
  return mid.reordered(final_order);
}

/** Parallel composition N1 (x) N2. */
inline KrausChannel product_channel(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> ks;
  for (const auto& x : a.kraus())
    for (const auto& y : b.kraus()) ks.push_back(kron(x, y));
  return KrausChannel(a.input_layout().concat(b.input_layout()),
                      a.output_layout().concat(b.output_layout()), std::move(ks));
}

}  // namespace oneshot
