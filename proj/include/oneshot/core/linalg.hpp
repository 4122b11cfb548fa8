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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "oneshot/core/error.hpp"
#include "oneshot/core/tolerances.hpp"

namespace oneshot {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/** Spectral decomposition of a Hermitian matrix, eigenvalues descending. */
struct HermitianEigen {
  RealVector values;
  Matrix vectors;

  Eigen::Index size() const { return values.size(); }

  double max_abs() const {
    return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  }

  /** V diag(f(lambda)) V^dagger. */
  Matrix apply(const std::function<double(double)>& f) const {
    const Eigen::Index n = values.size();
    Matrix scaled = vectors;
    for (Eigen::Index j = 0; j < n; ++j) scaled.col(j) *= f(values(j));
    return scaled * vectors.adjoint();
  }

  /** Projector onto the eigenvectors whose eigenvalue satisfies `keep`. */
  Matrix projector(const std::function<bool(double)>& keep) const {
    return apply([&](double x) { return keep(x) ? 1.0 : 0.0; });
  }
};

inline bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx(0.0, 0.0)) return false;
  return true;
}

inline Matrix hermitian_part(const Matrix& m) {
  return (m + m.adjoint()) * 0.5;
}

inline HermitianEigen hermitian_eigen(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorKind::ShapeMismatch,
          "eigendecomposition of a non-square matrix");
  const Eigen::Index n = m.rows();
  HermitianEigen out;
  if (is_diagonal(m)) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return m(a, a).real() > m(b, b).real();
    });
    out.values.resize(n);
    out.vectors = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      out.values(k) = m(order[k], order[k]).real();
      out.vectors(order[k], k) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  require(es.info() == Eigen::Success, ErrorKind::NoConverge,
          "Hermitian eigensolver failed");
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

inline double support_threshold(const HermitianEigen& e) {
  return tol::support_cutoff * std::max(e.max_abs(), 0.0);
}

inline Matrix support_projector(const Matrix& m) {
  auto e = hermitian_eigen(m);
  const double thr = support_threshold(e);
  return e.projector([&](double x) { return x > thr; });
}

inline std::size_t numerical_rank(const HermitianEigen& e) {
  const double thr = support_threshold(e);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > thr) ++r;
  return r;
}

inline Matrix psd_sqrt(const Matrix& m) {
  return hermitian_eigen(m).apply(
      [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

/** Inverse square root on the support, zero elsewhere. */
inline Matrix pinv_sqrt(const Matrix& m) {
  auto e = hermitian_eigen(m);
  const double thr = support_threshold(e);
  return e.apply([&](double x) { return x > thr ? 1.0 / std::sqrt(x) : 0.0; });
}

/** Base-2 logarithm on the support, zero elsewhere. */
inline Matrix log2_on_support(const HermitianEigen& e) {
  const double thr = support_threshold(e);
  return e.apply([&](double x) { return x > thr ? std::log2(x) : 0.0; });
}

struct PositivePart {
  Matrix projector;
  Matrix clipped;
};

/** Projector onto eigenvalues above the support cutoff and the clipped
 *  positive part of a Hermitian matrix. */
inline PositivePart positive_part(const Matrix& m) {
  auto e = hermitian_eigen(m);
  const double thr = support_threshold(e);
  return {e.projector([&](double x) { return x > thr; }),
          e.apply([&](double x) { return x > thr ? x : 0.0; })};
}

inline double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

/** For factors `dims` and a reordering where new factor i is old factor
 *  perm[i], returns the old flat index of each new flat index. */
inline std::vector<std::size_t> permutation_map(
    const std::vector<std::size_t>& dims, const std::vector<std::size_t>& perm) {
  const std::size_t k = dims.size();
  require(perm.size() == k, ErrorKind::ShapeMismatch, "permutation size");
  std::vector<std::size_t> old_stride(k, 1);
  for (std::size_t i = k; i-- > 1;) old_stride[i - 1] = old_stride[i] * dims[i];
  std::vector<std::size_t> new_dims(k), new_stride_old(k);
  for (std::size_t i = 0; i < k; ++i) {
    new_dims[i] = dims[perm[i]];
    new_stride_old[i] = old_stride[perm[i]];
  }
  const std::size_t total = product(dims);
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digit(k, 0);
  std::size_t old = 0;
  for (std::size_t n = 0; n < total; ++n) {
    map[n] = old;
    for (std::size_t i = k; i-- > 0;) {
      ++digit[i];
      old += new_stride_old[i];
      if (digit[i] < new_dims[i]) break;
      old -= new_stride_old[i] * digit[i];
      digit[i] = 0;
    }
  }
  return map;
}

inline Matrix permute_factors(const Matrix& m,
                              const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
  auto map = permutation_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  require(m.rows() == n && m.cols() == n, ErrorKind::ShapeMismatch,
          "matrix does not match register dimensions");
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = m(static_cast<Eigen::Index>(map[i]),
                    static_cast<Eigen::Index>(map[j]));
  return out;
}

inline Vector permute_factors(const Vector& v,
                              const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
  auto map = permutation_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  require(v.size() == n, ErrorKind::ShapeMismatch,
          "vector does not match register dimensions");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = v(static_cast<Eigen::Index>(map[i]));
  return out;
}

/** Trace over the trailing factor of a matrix on (keep (x) traced). */
inline Matrix trace_trailing(const Matrix& m, std::size_t keep_dim,
                             std::size_t traced_dim) {
  const auto dk = static_cast<Eigen::Index>(keep_dim);
  const auto dt = static_cast<Eigen::Index>(traced_dim);
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx s = 0;
      for (Eigen::Index t = 0; t < dt; ++t) s += m(a * dt + t, b * dt + t);
      out(a, b) = s;
    }
  return out;
}

/** Order `front` first, then the remaining factor indices ascending. */
inline std::vector<std::size_t> front_permutation(
    std::size_t k, const std::vector<std::size_t>& front) {
  std::vector<std::size_t> perm = front;
  for (std::size_t i = 0; i < k; ++i)
    if (std::find(front.begin(), front.end(), i) == front.end())
      perm.push_back(i);
  return perm;
}

inline std::vector<std::size_t> inverse_permutation(
    const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

/** Largest eigenvalue of a Hermitian matrix. */
inline double lambda_max(const Matrix& m) {
  auto e = hermitian_eigen(m);
  return e.values.size() ? e.values(0) : 0.0;
}

inline double real_trace(const Matrix& m) { return m.trace().real(); }

/** Tr(A B) without forming the product. */
inline cplx trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().array() * b.array()).sum();
}

}  // namespace oneshot
