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

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "oneshot/divergences/relative_entropy.hpp"

namespace oneshot {

/** Optimal test for min Tr(Lambda sigma) s.t. Tr(Lambda rho) >= alpha_min,
 *  0 <= Lambda <= I, with the matching dual certificate. */
struct HypothesisTestResult {
  double value_bits = 0;       // -log2 beta, +inf when beta underflows
  double alpha_min = 0;
  double alpha = 0;            // Tr(Lambda rho) achieved
  double beta = 0;             // Tr(Lambda sigma)
  double dual_value = 0;       // sup_t t alpha_min - Tr(t rho - sigma)_+
  double dual_value_bits = 0;
  double gap = 0;              // |beta - dual| / beta
  double multiplier = 0;       // t at the optimum (+inf when not attained)
  std::optional<Matrix> test;  // Lambda, for the matrix form
  std::vector<double> test_weights;  // eigenbasis weights of Lambda
};

struct HypothesisTestOptions {
  int golden_iterations = 60;
  int bisection_iterations = 400;
  bool keep_test = true;
};

namespace detail {

/** Spectrum of t rho - sigma with the diagonal of rho and sigma in its eigenbasis. */
struct PencilSpectrum {
  std::vector<double> lambda;
  std::vector<double> r;  // <v|rho|v>
  std::vector<double> s;  // <v|sigma|v>
  Matrix vectors;         // empty for the classical form
};

using PencilFn = std::function<PencilSpectrum(double)>;

inline double pencil_dual(const PencilSpectrum& p, double t, double alpha) {
  double pos = 0;
  for (double l : p.lambda)
    if (l > 0) pos += l;
  return t * alpha - pos;
}

inline double pencil_supergradient(const PencilSpectrum& p, double alpha) {
  double m = 0;
  for (std::size_t i = 0; i < p.lambda.size(); ++i)
    if (p.lambda[i] > 0) m += p.r[i];
  return alpha - m;
}

/** Weights w in [0,1] on the eigenbasis reaching Tr(Lambda rho) = alpha:
 *  full weight above the boundary cluster, uniform weight inside it, and a
 *  greedy descending fill if rounding leaves the cluster short. */
inline std::vector<double> pencil_primal(const PencilSpectrum& p, double alpha,
                                         double scale) {
  const std::size_t n = p.lambda.size();
  const double thr = tol::cluster * scale;
  std::vector<double> w(n, 0.0);
  double m_pos = 0, m_c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.lambda[i] > thr) m_pos += p.r[i];
    else if (p.lambda[i] >= -thr) m_c += p.r[i];
  }
  if (m_pos <= alpha && m_pos + m_c >= alpha && m_c > 0) {
    const double frac = std::clamp((alpha - m_pos) / m_c, 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.lambda[i] > thr) w[i] = 1.0;
      else if (p.lambda[i] >= -thr) w[i] = frac;
    }
    return w;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return p.lambda[a] > p.lambda[b]; });
  double acc = 0;
  for (auto i : order) {
    if (acc >= alpha) break;
    if (p.r[i] <= 0) continue;
    if (acc + p.r[i] <= alpha) {
      w[i] = 1.0;
      acc += p.r[i];
    } else {
      w[i] = (alpha - acc) / p.r[i];
      acc = alpha;
    }
  }
  return w;
}

inline double bits_of(double beta) {
  return beta > 0 ? -std::log2(beta) : kInf;
}

inline HypothesisTestResult finish(const PencilSpectrum& p, const std::vector<double>& w,
                                   double alpha_min, double dual, double t,
                                   bool keep_test) {
  HypothesisTestResult res;
  res.alpha_min = alpha_min;
  double a = 0, b = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    a += w[i] * p.r[i];
    b += w[i] * p.s[i];
  }
  res.alpha = a;
  res.beta = std::max(b, 0.0);
  res.value_bits = bits_of(res.beta);
  res.dual_value = dual;
  res.dual_value_bits = bits_of(dual);
  res.gap = res.beta > 0 ? std::abs(res.beta - dual) / res.beta : std::abs(dual);
  res.multiplier = t;
  res.test_weights = w;
  if (keep_test && p.vectors.size() > 0) {
    Matrix v = p.vectors;
    for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j) *= w[static_cast<std::size_t>(j)];
    res.test = hermitian_part(v * p.vectors.adjoint());
  }
  return res;
}

/** Shared driver: `pencil(t)` returns the spectrum of t rho - sigma.
 *  `support_rho` and `outside_sigma` describe the support structure. */
inline HypothesisTestResult solve_pencil(const PencilFn& pencil, double alpha_min,
                                         double rho_max, double sigma_max,
                                         const PencilSpectrum& rho_support,
                                         double outside_sigma,
                                         const HypothesisTestOptions& opt) {
  require(alpha_min > 0 && alpha_min <= 1, ErrorKind::BadParam,
          "alpha_min must lie in (0, 1]");

  if (alpha_min >= 1.0) {
    // Lambda must act as the identity on supp(rho): beta = Tr(Pi_rho sigma).
    std::vector<double> w(rho_support.lambda.size());
    const double thr = tol::support_cutoff * rho_max;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rho_support.lambda[i] > thr ? 1.0 : 0.0;
    double beta = 0;
    for (std::size_t i = 0; i < w.size(); ++i) beta += w[i] * rho_support.s[i];
    // g(t) increases towards beta without attaining it; rounding in
    // t - Tr(t rho - sigma)_+ grows like t, so t stays below 1e6 beta / rho_max.
    double best = 0;
    const double t_cap = 1e6 * std::max(beta, 1e-300) / rho_max;
    for (int j = 0; j <= 80; ++j) {
      const double t = std::ldexp(1.0, j) * sigma_max / rho_max;
      if (j > 0 && t > t_cap) break;
      best = std::max(best, pencil_dual(pencil(t), t, alpha_min));
    }
    auto res = finish(rho_support, w, alpha_min, best, kInf, opt.keep_test);
    return res;
  }

  if (outside_sigma >= alpha_min) {
    // Enough weight of rho is invisible to sigma: beta = 0.
    auto p0 = pencil(0.0);
    std::vector<double> w(p0.lambda.size(), 0.0);
    double m = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (p0.s[i] <= tol::support_cutoff * sigma_max && p0.r[i] > 0) {
        w[i] = 1.0;
        m += p0.r[i];
      }
    for (auto& x : w) x *= alpha_min / m;
    auto res = finish(p0, w, alpha_min, 0.0, 0.0, opt.keep_test);
    // What remains of Tr(Lambda sigma) is eigenvector roundoff.
    res.beta = 0;
    res.value_bits = kInf;
    res.gap = 0;
    return res;
  }

  // Bracket the maximiser of g(t) in u = ln t: s(t_lo) > 0 >= s(t_hi).
  auto s_at = [&](double u) { return pencil_supergradient(pencil(std::exp(u)), alpha_min); };
  double u0 = std::log(std::max(sigma_max, 1e-300) / std::max(rho_max, 1e-300));
  double u_lo = u0, u_hi = u0;
  const double step = std::log(4.0);
  if (s_at(u0) > 0) {
    u_hi = u0 + step;
    while (s_at(u_hi) > 0) {
      u_lo = u_hi;
      u_hi += step;
      require(u_hi < 690, ErrorKind::NoConverge,
              "no upper bracket for the dual multiplier (last t = " +
                  std::to_string(std::exp(u_lo)) + ")");
    }
  } else {
    u_lo = u0 - step;
    while (s_at(u_lo) <= 0) {
      u_hi = u_lo;
      u_lo -= step;
      require(u_lo > -690, ErrorKind::NoConverge,
              "no lower bracket for the dual multiplier (last t = " +
                  std::to_string(std::exp(u_hi)) + ")");
    }
  }

  // Golden-section narrowing on g(e^u), which is unimodal in u.
  auto g_at = [&](double u) {
    const double t = std::exp(u);
    return pencil_dual(pencil(t), t, alpha_min);
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = u_lo, b = u_hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g_at(c), gd = g_at(d);
  for (int it = 0; it < opt.golden_iterations && b - a > 1e-3; ++it) {
    if (gc < gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g_at(d);
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g_at(c);
    }
  }
  // Re-establish the sign bracket inside [a, b] when possible.
  if (s_at(a) > 0) u_lo = a;
  if (s_at(b) <= 0) u_hi = b;

  // Supergradient bisection to machine precision.
  for (int it = 0; it < opt.bisection_iterations; ++it) {
    const double mid = 0.5 * (u_lo + u_hi);
    if (mid <= u_lo || mid >= u_hi) break;
    if (s_at(mid) > 0) u_lo = mid;
    else u_hi = mid;
  }
  const double t_lo = std::exp(u_lo), t_hi = std::exp(u_hi);
  auto p_lo = pencil(t_lo);
  auto p_hi = pencil(t_hi);
  const double dual = std::max(pencil_dual(p_lo, t_lo, alpha_min),
                               pencil_dual(p_hi, t_hi, alpha_min));
  auto w = pencil_primal(p_hi, alpha_min, t_hi * rho_max + sigma_max);
  return finish(p_hi, w, alpha_min, dual, t_hi, opt.keep_test);
}

inline PencilSpectrum matrix_pencil(const Matrix& rho, const Matrix& sigma, double t) {
  auto e = hermitian_eigen(t * rho - sigma);
  PencilSpectrum p;
  const auto n = e.values.size();
  p.lambda.resize(static_cast<std::size_t>(n));
  p.r.resize(static_cast<std::size_t>(n));
  p.s.resize(static_cast<std::size_t>(n));
  Matrix rv = rho * e.vectors, sv = sigma * e.vectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    p.lambda[static_cast<std::size_t>(j)] = e.values(j);
    p.r[static_cast<std::size_t>(j)] = e.vectors.col(j).dot(rv.col(j)).real();
    p.s[static_cast<std::size_t>(j)] = e.vectors.col(j).dot(sv.col(j)).real();
  }
  p.vectors = std::move(e.vectors);
  return p;
}

}  // namespace detail

/** D_H with threshold alpha_min: -log2 of the optimal type-II error. */
inline HypothesisTestResult hypothesis_testing_divergence(
    const Matrix& rho, const Matrix& sigma, double alpha_min,
    const HypothesisTestOptions& opt = {}) {
  require(rho.rows() == sigma.rows() && rho.cols() == sigma.cols(),
          ErrorKind::ShapeMismatch, "operators have different dimensions");
  auto es = hermitian_eigen(sigma);
  const double outside = mass_outside_support(rho, es);
  auto er = hermitian_eigen(rho);
  detail::PencilSpectrum rho_support;
  {
    const auto n = er.values.size();
    Matrix sv = sigma * er.vectors;
    for (Eigen::Index j = 0; j < n; ++j) {
      rho_support.lambda.push_back(er.values(j));
      rho_support.r.push_back(er.values(j));
      rho_support.s.push_back(er.vectors.col(j).dot(sv.col(j)).real());
    }
    rho_support.vectors = er.vectors;
  }
  const double rho_max = std::max(er.max_abs(), 1e-300);
  const double sigma_max = std::max(es.max_abs(), 1e-300);
  return detail::solve_pencil(
      [&](double t) { return detail::matrix_pencil(rho, sigma, t); }, alpha_min, rho_max,
      sigma_max, rho_support, outside, opt);
}

inline HypothesisTestResult hypothesis_testing_divergence(
    const DensityOperator& rho, const DensityOperator& sigma, double alpha_min,
    const HypothesisTestOptions& opt = {}) {
  detail::require_same_layout(rho.layout(), sigma.layout());
  return hypothesis_testing_divergence(rho.matrix(), sigma.matrix(), alpha_min, opt);
}

/** Same optimisation for commuting inputs given as probability vectors. */
inline HypothesisTestResult hypothesis_testing_divergence_classical(
    const std::vector<double>& p, const std::vector<double>& q, double alpha_min,
    const HypothesisTestOptions& opt = {}) {
  require(p.size() == q.size(), ErrorKind::ShapeMismatch, "distributions differ in size");
  const double p_max = std::max(*std::max_element(p.begin(), p.end()), 1e-300);
  const double q_max = std::max(*std::max_element(q.begin(), q.end()), 1e-300);
  double outside = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (q[i] <= tol::support_cutoff * q_max) outside += p[i];
  detail::PencilSpectrum support;
  support.lambda = p;
  support.r = p;
  support.s = q;
  auto pencil = [&](double t) {
    detail::PencilSpectrum s;
    s.lambda.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) s.lambda[i] = t * p[i] - q[i];
    s.r = p;
    s.s = q;
    return s;
  };
  return detail::solve_pencil(pencil, alpha_min, p_max, q_max, support, outside, opt);
}

}  // namespace oneshot
