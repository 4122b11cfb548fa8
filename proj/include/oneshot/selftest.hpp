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

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oneshot/channels/builtin.hpp"
#include "oneshot/convex_split/convex_split.hpp"
#include "oneshot/convex_split/uhlmann.hpp"
#include "oneshot/core/random.hpp"
#include "oneshot/divergences/hypothesis_testing.hpp"
#include "oneshot/divergences/relative_entropy.hpp"
#include "oneshot/protocols/p2p.hpp"

namespace oneshot::selftest {

/** Outcome of one randomized property: `worst` is the largest violation
 *  (lhs - rhs for an inequality lhs <= rhs) seen over all instances. */
struct PropertyResult {
  std::string suite;
  std::string name;
  std::size_t instances = 0;
  double worst = -kInf;
  double tolerance = 0;
  double seconds = 0;
  bool passed() const { return worst <= tolerance; }
};

using Rng = random::Rng;
using Check = std::function<double(Rng&)>;

inline PropertyResult run(const std::string& suite, const std::string& name, std::size_t count,
                          double tolerance, std::uint64_t seed, const Check& check) {
  PropertyResult r{suite, name, count, -kInf, tolerance};
  Rng rng(seed ^ std::hash<std::string>{}(name));
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < count; ++i) {
    double v;
    try {
      v = check(rng);
    } catch (const Error&) {
      v = kInf;
    }
    if (std::isnan(v)) v = kInf;
    r.worst = std::max(r.worst, v);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline Eigen::Index pick(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

/** Random operator with spectrum inside [lo, hi]. */
inline Matrix spectral_op(Rng& rng, Eigen::Index d, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix v = random::unitary(rng, d);
  Matrix dg = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) dg(i, i) = u(rng);
  return hermitian_part(v * dg * v.adjoint());
}

/** Random channel from a Haar isometry with `r` Kraus operators, raised to ceil(din/dout). */
inline KrausChannel random_channel(Rng& rng, std::size_t din, std::size_t dout, std::size_t r,
                                   const std::string& in = "A", const std::string& out = "B") {
  r = std::max(r, (din + dout - 1) / dout);
  const auto di = Eigen::Index(din), dz = Eigen::Index(dout), rr = Eigen::Index(r);
  Matrix v = random::unitary(rng, dz * rr).leftCols(di);
  std::vector<Matrix> ks;
  for (Eigen::Index k = 0; k < rr; ++k) ks.push_back(v.middleRows(k * dz, dz));
  return KrausChannel(RegisterLayout{{in, din}}, RegisterLayout{{out, dout}}, ks);
}

inline Matrix apply_channel(const KrausChannel& ch, const Matrix& rho) {
  Matrix out = Matrix::Zero(Eigen::Index(ch.output_layout().total_dim()),
                            Eigen::Index(ch.output_layout().total_dim()));
  for (const auto& k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

inline double min_eig(const Matrix& m) { return hermitian_eigen(m).values.minCoeff(); }

/** Inequalities behind the coding bounds. */
inline std::vector<PropertyResult> facts(std::uint64_t seed, std::size_t count) {
  const std::string s = "facts";
  std::vector<PropertyResult> out;
  out.push_back(run(s, "hayashi_nagaoka", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix S = spectral_op(rng, d, 1e-3, 1 - 1e-3);
    Matrix g = random::ginibre(rng, d, pick(rng, 1, d));
    Matrix T = hermitian_part(g * g.adjoint() / double(d));
    Matrix x = pinv_sqrt(S + T);
    Matrix I = Matrix::Identity(d, d);
    return -min_eig(2 * (I - S) + 4 * T - (I - x * S * x));
  }));
  out.push_back(run(s, "gentle_measurement", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix A = spectral_op(rng, d, 1e-3, 1 - 1e-3);
    const double p = real_trace(A * A * rho);
    return std::sqrt(p) - fidelity(rho, hermitian_part(A * rho * A / p));
  }));
  out.push_back(run(s, "pinsker", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix sigma = random::density_matrix(rng, d);
    return std::exp2(-relative_entropy(rho, sigma) / 2) - fidelity(rho, sigma);
  }));
  out.push_back(run(s, "effect_distance", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix sigma = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix L = random::effect(rng, d);
    const double a = std::max(0.0, real_trace(L * rho)), b = std::max(0.0, real_trace(L * sigma));
    return std::abs(std::sqrt(a) - std::sqrt(b)) - purified_distance(rho, sigma);
  }));
  out.push_back(run(s, "purified_distance_triangle", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix a = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix b = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix c = random::density_matrix(rng, d, pick(rng, 1, d));
    return purified_distance(a, b) - purified_distance(a, c) - purified_distance(c, b);
  }));
  out.push_back(run(s, "dmax_triangle", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix sigma = random::density_matrix(rng, d);
    Matrix tau = random::density_matrix(rng, d);
    return d_max(rho, tau) - d_max(sigma, tau) - d_max(rho, sigma);
  }));
  out.push_back(run(s, "monotonicity_fidelity_partial_trace", count, 1e-8, seed, [](Rng& rng) {
    const auto da = std::size_t(pick(rng, 2, 3)), db = std::size_t(pick(rng, 2, 3));
    RegisterLayout l{{"A", da}, {"B", db}};
    auto rho = random::state(rng, l, pick(rng, 1, Eigen::Index(da * db)));
    auto sigma = random::state(rng, l, pick(rng, 1, Eigen::Index(da * db)));
    return fidelity(rho, sigma) -
           fidelity(partial_trace_keep(rho, {"A"}), partial_trace_keep(sigma, {"A"}));
  }));
  out.push_back(run(s, "monotonicity_dmax_channel", count, 1e-8, seed, [](Rng& rng) {
    const auto d = std::size_t(pick(rng, 2, 4));
    auto ch = random_channel(rng, d, std::size_t(pick(rng, 2, 4)), std::size_t(pick(rng, 1, 3)));
    Matrix rho = random::density_matrix(rng, Eigen::Index(d), pick(rng, 1, Eigen::Index(d)));
    Matrix sigma = random::density_matrix(rng, Eigen::Index(d));
    return d_max(apply_channel(ch, rho), apply_channel(ch, sigma)) - d_max(rho, sigma);
  }));
  out.push_back(run(s, "monotonicity_dh_channel", count, 1e-6, seed, [](Rng& rng) {
    const auto d = std::size_t(pick(rng, 2, 4));
    auto ch = random_channel(rng, d, std::size_t(pick(rng, 2, 4)), std::size_t(pick(rng, 1, 3)));
    Matrix rho = random::density_matrix(rng, Eigen::Index(d), pick(rng, 1, Eigen::Index(d)));
    Matrix sigma = random::density_matrix(rng, Eigen::Index(d));
    const double a = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const double after = hypothesis_testing_divergence(apply_channel(ch, rho), apply_channel(ch, sigma), a).value_bits;
    const double before = hypothesis_testing_divergence(rho, sigma, a).value_bits;
    return after - before;
  }));
  out.push_back(run(s, "slow_change", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 4);
    const std::size_t k = std::size_t(pick(rng, 2, 6));
    Matrix rho1 = random::density_matrix(rng, d);
    // Small perturbations: mix with a random channel at strength <= 0.1.
    std::vector<std::pair<double, KrausChannel>> maps;
    double step = 0;
    for (std::size_t i = 2; i <= k; ++i) {
      const double p = std::uniform_real_distribution<double>(0, 0.1)(rng);
      maps.emplace_back(p, random_channel(rng, std::size_t(d), std::size_t(d), 2));
      Matrix once = (1 - p) * rho1 + p * apply_channel(maps.back().second, rho1);
      step = std::max(step, purified_distance(once, rho1));
    }
    Matrix rho = rho1;
    for (const auto& [p, ch] : maps) rho = (1 - p) * rho + p * apply_channel(ch, rho);
    return purified_distance(hermitian_part(rho), rho1) - double(k - 1) * step;
  }));
  return out;
}

inline std::vector<PropertyResult> core(std::uint64_t seed, std::size_t count) {
  const std::string s = "core";
  std::vector<PropertyResult> out;
  out.push_back(run(s, "partial_trace_of_tensor", count, tol::trace, seed, [](Rng& rng) {
    auto a = random::state(rng, {{"A", std::size_t(pick(rng, 1, 4))}});
    auto b = random::state(rng, {{"B", std::size_t(pick(rng, 1, 4))}});
    auto back = partial_trace_keep(tensor(a, b), {"A"});
    return (back.matrix() - a.matrix()).cwiseAbs().maxCoeff();
  }));
  out.push_back(run(s, "purification_marginal", count, tol::trace, seed, [](Rng& rng) {
    const auto d = std::size_t(pick(rng, 2, 6));
    auto rho = random::state(rng, {{"A", d}}, pick(rng, 1, Eigen::Index(d)));
    return (reduced(purify(rho, "R"), {"A"}).matrix() - rho.matrix()).cwiseAbs().maxCoeff();
  }));
  out.push_back(run(s, "fidelity_symmetry", count, 1e-9, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix a = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix b = random::density_matrix(rng, d, pick(rng, 1, d));
    return std::abs(fidelity(a, b) - fidelity(b, a));
  }));
  return out;
}

inline std::vector<PropertyResult> channel_suite(std::uint64_t seed, std::size_t count) {
  const std::string s = "channels";
  std::vector<PropertyResult> out;
  auto builtins = [](Rng& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<KrausChannel> chs{channels::identity(2), channels::depolarizing(2, u(rng)),
                                  channels::dephasing(3, u(rng), "A", "B"),
                                  channels::amplitude_damping(u(rng)), channels::erasure(u(rng))};
    const double e = u(rng) * 0.5;
    chs.push_back(channels::classical({{1 - e, e}, {e, 1 - e}}));
    return chs;
  };
  out.push_back(run(s, "trace_preservation", count, tol::trace, seed, [&](Rng& rng) {
    double worst = 0;
    for (const auto& ch : builtins(rng)) {
      const auto d = Eigen::Index(ch.input_layout().total_dim());
      worst = std::max(worst, std::abs(real_trace(apply_channel(ch, random::density_matrix(rng, d))) - 1));
    }
    return worst;
  }));
  out.push_back(run(s, "linearity", count, tol::trace, seed, [&](Rng& rng) {
    double worst = 0;
    const double p = std::uniform_real_distribution<double>(0, 1)(rng);
    for (const auto& ch : builtins(rng)) {
      const auto d = Eigen::Index(ch.input_layout().total_dim());
      Matrix a = random::density_matrix(rng, d), b = random::density_matrix(rng, d);
      Matrix lhs = apply_channel(ch, p * a + (1 - p) * b);
      Matrix rhs = p * apply_channel(ch, a) + (1 - p) * apply_channel(ch, b);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
  }));
  out.push_back(run(s, "choi_round_trip", count, tol::trace, seed, [](Rng& rng) {
    auto ch = random_channel(rng, std::size_t(pick(rng, 2, 3)), std::size_t(pick(rng, 2, 3)),
                             std::size_t(pick(rng, 1, 3)));
    auto back = kraus_from_choi(choi_from_kraus(ch));
    const auto d = Eigen::Index(ch.input_layout().total_dim());
    Matrix rho = random::density_matrix(rng, d);
    return (apply_channel(ch, rho) - apply_channel(back, rho)).cwiseAbs().maxCoeff();
  }));
  out.push_back(run(s, "dmax_monotone_under_builtins", count, 1e-6, seed, [&](Rng& rng) {
    double worst = -kInf;
    for (const auto& ch : builtins(rng)) {
      const auto d = Eigen::Index(ch.input_layout().total_dim());
      Matrix rho = random::density_matrix(rng, d), sigma = random::density_matrix(rng, d);
      worst = std::max(worst, d_max(apply_channel(ch, rho), apply_channel(ch, sigma)) - d_max(rho, sigma));
    }
    return worst;
  }));
  return out;
}

inline std::vector<PropertyResult> divergence_suite(std::uint64_t seed, std::size_t count) {
  const std::string s = "divergences";
  std::vector<PropertyResult> out;
  out.push_back(run(s, "dh_duality_gap", count, 1e-7, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix sigma = random::density_matrix(rng, d, pick(rng, 1, d));
    const double a = std::uniform_real_distribution<double>(0.05, 0.999)(rng);
    auto r = hypothesis_testing_divergence(rho, sigma, a);
    return std::isfinite(r.value_bits) ? r.gap : 0.0;
  }));
  out.push_back(run(s, "dh_primal_feasibility", count, 1e-9, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix sigma = random::density_matrix(rng, d);
    const double a = std::uniform_real_distribution<double>(0.05, 0.999)(rng);
    auto r = hypothesis_testing_divergence(rho, sigma, a);
    const Matrix& L = *r.test;
    const double tr = real_trace(L * rho);
    const auto e = hermitian_eigen(L);
    return std::max({a - tr, tr - a - 1e-6 + 1e-9, -e.values.minCoeff(), e.values.maxCoeff() - 1});
  }));
  out.push_back(run(s, "dh_classical_oracle", count, 1e-9, seed, [](Rng& rng) {
    const auto d = std::size_t(pick(rng, 2, 8));
    auto p = random::probability_vector(rng, d), q = random::probability_vector(rng, d);
    const double a = std::uniform_real_distribution<double>(0.05, 0.999)(rng);
    // Neyman-Pearson: fill by decreasing likelihood ratio, fractional last.
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return p[i] * q[j] > p[j] * q[i]; });
    double mass = 0, beta = 0;
    for (auto i : idx) {
      const double take = std::min(1.0, (a - mass) / p[i]);
      if (take <= 0) break;
      mass += take * p[i];
      beta += take * q[i];
    }
    Matrix rho = Matrix::Zero(Eigen::Index(d), Eigen::Index(d)), sigma = rho;
    for (std::size_t i = 0; i < d; ++i) {
      rho(Eigen::Index(i), Eigen::Index(i)) = p[i];
      sigma(Eigen::Index(i), Eigen::Index(i)) = q[i];
    }
    return std::abs(hypothesis_testing_divergence(rho, sigma, a).value_bits + std::log2(beta));
  }));
  out.push_back(run(s, "dh_data_processing", count, 1e-6, seed, [](Rng& rng) {
    const auto da = std::size_t(pick(rng, 2, 3)), db = std::size_t(pick(rng, 2, 3));
    RegisterLayout l{{"A", da}, {"B", db}};
    auto rho = random::state(rng, l, pick(rng, 1, Eigen::Index(da * db)));
    auto sigma = random::state(rng, l);
    const double a = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    return hypothesis_testing_divergence(partial_trace_keep(rho, {"A"}),
                                         partial_trace_keep(sigma, {"A"}), a)
               .value_bits -
           hypothesis_testing_divergence(rho, sigma, a).value_bits;
  }));
  out.push_back(run(s, "dmax_above_relative_entropy", count, 1e-8, seed, [](Rng& rng) {
    const auto d = pick(rng, 2, 6);
    Matrix rho = random::density_matrix(rng, d, pick(rng, 1, d));
    Matrix sigma = random::density_matrix(rng, d);
    const double D = relative_entropy(rho, sigma);
    return std::max(D - d_max(rho, sigma), -D);
  }));
  return out;
}

inline std::vector<PropertyResult> convex_split_suite(std::uint64_t seed, std::size_t count) {
  const std::string s = "convex_split";
  std::vector<PropertyResult> out;
  out.push_back(run(s, "convex_split_bound", count, 1e-8, seed, [](Rng& rng) {
    const auto dp = std::size_t(pick(rng, 1, 3));
    RegisterLayout l{{"P", dp}, {"Q", 2}};
    auto prod = kron(random::density_matrix(rng, Eigen::Index(dp)), random::density_matrix(rng, 2));
    const double t = std::uniform_real_distribution<double>(0, 0.6)(rng);
    Matrix m = (1 - t) * prod + t * random::density_matrix(rng, Eigen::Index(2 * dp));
    auto rho = DensityOperator::trusted(l, hermitian_part(m));
    auto sigma = partial_trace_keep(rho, {"Q"});
    const double delta = std::bernoulli_distribution(0.5)(rng) ? 0.4 : 0.6;
    const double k = i_max(rho, {"P"});
    const auto n = std::size_t(std::ceil(std::exp2(k) / (delta * delta)));
    if (n > 400) return -1.0;
    auto cs = build_convex_split(rho, {"Q"}, sigma, n);
    return cs.exact_distance - delta;
  }));
  out.push_back(run(s, "uhlmann_optimality", count, 1e-9, seed, [](Rng& rng) {
    const auto da = std::size_t(pick(rng, 2, 3)), dr = std::size_t(pick(rng, 2, 3));
    RegisterLayout lt{{"A", da}, {"R", dr}}, ls{{"A", da}, {"S", dr}};
    auto target = random::pure_state(rng, lt), source = random::pure_state(rng, ls);
    auto u = uhlmann_isometry(target, source, {"A"});
    double best = 0;
    for (int i = 0; i < 100; ++i) {
      Matrix v = random::unitary(rng, Eigen::Index(dr));
      Matrix mapped = source.as_matrix({"A"}) * v.transpose();
      Vector flat(mapped.size());
      for (Eigen::Index a = 0; a < mapped.rows(); ++a)
        for (Eigen::Index b = 0; b < mapped.cols(); ++b) flat(a * mapped.cols() + b) = mapped(a, b);
      best = std::max(best, std::abs(target.amplitudes().dot(flat)));
    }
    return best - u.overlap;
  }));
  out.push_back(run(s, "purification_reproduces_tau", count, tol::trace, seed, [](Rng& rng) {
    RegisterLayout l{{"X", 2}, {"Q", 2}};
    auto psi = random::pure_state(rng, l);
    auto sigma = purify(partial_trace_keep(psi.density(), {"Q"}), "Q''");
    const std::size_t n = std::size_t(pick(rng, 1, 3));
    std::vector<std::size_t> pos;
    for (std::size_t j = 1; j <= n; ++j) pos.push_back(j);
    auto pur = convex_split_purification(psi, "Q", sigma, "Q''", pos);
    std::vector<std::string> keep{"X"};
    for (auto j : pos) keep.push_back(indexed("Q", j));
    auto tau = partial_trace_keep(pur.density(), keep);
    // Dense tau with sigma_Q = psi_Q.
    auto cs = build_convex_split(psi.density().reordered({"X", "Q"}), {"Q"},
                                 partial_trace_keep(psi.density(), {"Q"}), n,
                                 {ConvexSplitMethod::Dense});
    return (tau.matrix() - cs.state->matrix()).cwiseAbs().maxCoeff();
  }));
  return out;
}

inline std::vector<PropertyResult> protocol_suite(std::uint64_t seed, std::size_t count) {
  const std::string s = "protocols";
  std::vector<PropertyResult> out;
  auto instance = [](Rng& rng) {
    const auto d = std::size_t(pick(rng, 2, 3));
    auto ch = random_channel(rng, d, 2, std::size_t(pick(rng, 1, 2)), "A", "B");
    auto psi = random::pure_state(rng, {{"A", d}, {"A'", d}});
    P2PConfig cfg{ch, psi, std::size_t(pick(rng, 2, 3)),
                  std::uniform_real_distribution<double>(0.05, 0.6)(rng), 0.5};
    return cfg;
  };
  out.push_back(run(s, "povm_completeness", count, 1e-8, seed, [&](Rng& rng) {
    auto cfg = instance(rng);
    auto cp = channel_pair(cfg.channel, cfg.psi.density(), {"A"}, {"A'"});
    auto dh = hypothesis_testing_divergence(cp.joint, cp.reference, alpha_from_eps(cfg.epsilon));
    BandedDecoder dec(*dh.test, cp.d_out, cp.d_pur, cfg.messages, 1);
    const auto& pd = dec.decoder();
    Matrix sum = pd.abort_effect();
    for (std::size_t k = 0; k < pd.positions(); ++k) sum += pd.omega(k);
    const auto dim = sum.rows();
    const auto e = hermitian_eigen(sum - Matrix::Identity(dim, dim));
    return std::max(e.max_abs(), -hermitian_eigen(pd.abort_effect()).values.minCoeff());
  }));
  out.push_back(run(s, "p2p_chain_bound", count, 1e-8, seed, [&](Rng& rng) {
    auto rep = simulate_p2p(instance(rng));
    return rep.max_error - rep.theory_bound;
  }));
  out.push_back(run(s, "message_relabel_symmetry", count, 1e-9, seed, [&](Rng& rng) {
    auto rep = simulate_p2p(instance(rng));
    double spread = 0;
    for (double e : rep.per_message_error) spread = std::max(spread, std::abs(e - rep.mean_error));
    return spread;
  }));
  return out;
}

inline std::vector<PropertyResult> all(std::uint64_t seed = 2026, std::size_t count = 200) {
  std::vector<PropertyResult> out;
  for (auto suite : {facts, core, channel_suite, divergence_suite, convex_split_suite,
                     protocol_suite}) {
    auto part = suite(seed, count);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace oneshot::selftest
