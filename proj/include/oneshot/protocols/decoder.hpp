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

#include <optional>
#include <string>
#include <vector>

#include "oneshot/core/state.hpp"

namespace oneshot {

/** Pretty-good measurement built from position tests:
 *  Omega(k) = S^{-1/2} Lambda(k) S^{-1/2} with S = sum_k Lambda(k), plus the
 *  abort outcome I - Pi_supp(S). */
class PositionDecoder {
 public:
  explicit PositionDecoder(std::vector<Matrix> lambdas) : lambdas_(std::move(lambdas)) {
    require(!lambdas_.empty(), ErrorKind::BadParam, "decoder needs at least one position");
    Matrix s = Matrix::Zero(lambdas_[0].rows(), lambdas_[0].cols());
    for (const auto& l : lambdas_) s += l;
    inv_sqrt_ = pinv_sqrt(s);
  }

  std::size_t positions() const { return lambdas_.size(); }
  const Matrix& lambda(std::size_t k) const { return lambdas_[k]; }

  Matrix omega(std::size_t k) const { return inv_sqrt_ * lambdas_[k] * inv_sqrt_; }

  Matrix abort_effect() const {
    Matrix sum = Matrix::Zero(inv_sqrt_.rows(), inv_sqrt_.cols());
    for (std::size_t k = 0; k < lambdas_.size(); ++k) sum += omega(k);
    return Matrix::Identity(sum.rows(), sum.cols()) - sum;
  }

  /** Probability that the outcome lies in `accept` for state `theta`. */
  double accept_probability(const Matrix& theta, const std::vector<std::size_t>& accept) const {
    Matrix x = inv_sqrt_ * theta * inv_sqrt_;
    double p = 0;
    for (auto k : accept) p += trace_product(lambdas_[k], x).real();
    return p;
  }

  /** Sum of Omega(k) over `accept`. */
  Matrix accept_effect(const std::vector<std::size_t>& accept) const {
    Matrix sum = Matrix::Zero(inv_sqrt_.rows(), inv_sqrt_.cols());
    for (auto k : accept) sum += lambdas_[k];
    return inv_sqrt_ * sum * inv_sqrt_;
  }

 private:
  std::vector<Matrix> lambdas_;
  Matrix inv_sqrt_;
};


namespace detail {

struct Factor {
  std::vector<std::string> labels;
  Matrix op;
};

/** Tensor product of `factors`, which must cover `layout` exactly, brought
 *  into the register order of `layout`. */
inline Matrix assemble(const std::vector<Factor>& factors, const RegisterLayout& layout) {
  std::vector<std::string> order;
  Matrix full = Matrix::Ones(1, 1);
  for (const auto& f : factors) {
    order.insert(order.end(), f.labels.begin(), f.labels.end());
    full = kron(full, f.op);
  }
  require(order.size() == layout.size(), ErrorKind::BadPartition,
          "factors do not cover the layout");
  auto sub = layout.select(order);
  require(full.rows() == static_cast<Eigen::Index>(sub.total_dim()), ErrorKind::ShapeMismatch,
          "factor dimensions do not match the layout");
  return DensityOperator::trusted(sub, full).reordered(layout.labels()).matrix();
}

}  // namespace detail

/** Position decoder on out (x) P_1 .. P_N with N = messages * band, where
 *  position k tests `pi` on (out, P_k) and positions are grouped into
 *  consecutive bands, one per message. A single message is decoded without
 *  measuring. */
class BandedDecoder {
 public:
  BandedDecoder(const Matrix& pi, std::size_t d_out, std::size_t d_pos, std::size_t messages,
                std::size_t band, std::string out = "B", std::string pos = "A'",
                std::size_t max_dim = default_max_dim())
      : out_(std::move(out)), pos_(std::move(pos)), messages_(messages), band_(band) {
    require(messages >= 1 && band >= 1, ErrorKind::BadParam, "need messages, band >= 1");
    std::vector<Register> regs{{out_, d_out}};
    std::size_t total = d_out;
    for (std::size_t k = 1; k <= messages * band; ++k) {
      total *= d_pos;
      check_dim_guard(total, max_dim, "position decoding space");
      regs.push_back({indexed(pos_, k), d_pos});
    }
    layout_ = RegisterLayout(regs);
    std::vector<Matrix> lambdas;
    for (std::size_t k = 1; k <= messages * band; ++k)
      lambdas.push_back(embed(pi, {out_, indexed(pos_, k)}, layout_));
    dec_.emplace(std::move(lambdas));
  }

  const RegisterLayout& layout() const { return layout_; }
  const PositionDecoder& decoder() const { return *dec_; }
  std::size_t messages() const { return messages_; }
  std::size_t band() const { return band_; }

  /** Labels of the band of message m (0-based). */
  std::vector<std::string> band_labels(std::size_t m) const {
    std::vector<std::string> ls;
    for (std::size_t k = m * band_ + 1; k <= (m + 1) * band_; ++k) ls.push_back(indexed(pos_, k));
    return ls;
  }

  std::vector<std::size_t> band_positions(std::size_t m) const {
    std::vector<std::size_t> ks;
    for (std::size_t k = m * band_; k < (m + 1) * band_; ++k) ks.push_back(k);
    return ks;
  }

  /** `local` on (out, band of m) and `filler` on every other position. */
  Matrix place(const Matrix& local, std::size_t m, const Matrix& filler) const {
    std::vector<std::string> front{out_};
    for (const auto& l : band_labels(m)) front.push_back(l);
    std::vector<detail::Factor> fs{{front, local}};
    for (const auto& l : layout_.complement(front).labels()) fs.push_back({{l}, filler});
    return detail::assemble(fs, layout_);
  }

  double error(const Matrix& theta, std::size_t m) const {
    if (messages_ == 1) return 0.0;
    return 1.0 - dec_->accept_probability(theta, band_positions(m));
  }

  Matrix accept_effect(std::size_t m) const {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (messages_ == 1) return Matrix::Identity(d, d);
    return dec_->accept_effect(band_positions(m));
  }

 private:
  std::string out_, pos_;
  std::size_t messages_, band_;
  RegisterLayout layout_;
  std::optional<PositionDecoder> dec_;
};

}  // namespace oneshot
