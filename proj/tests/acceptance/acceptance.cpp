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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oneshot/convex_split/convex_split.hpp"
#include "oneshot/divergences/second_order.hpp"
#include "oneshot/divergences/typical.hpp"
#include "oneshot/protocols/broadcast.hpp"
#include "oneshot/protocols/gelfand_pinsker.hpp"
#include "oneshot/protocols/iid.hpp"
#include "oneshot/protocols/p2p.hpp"
#include "oneshot/selftest.hpp"

namespace {

using namespace oneshot;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %2d %-28s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), s);
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Neyman-Pearson oracle for distributions: take outcomes in decreasing
// likelihood-ratio order until the detection mass reaches alpha.
double np_oracle_bits(const std::vector<double>& p, const std::vector<double>& q, double alpha) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto ratio = [&](std::size_t i) {
    return q[i] > 0 ? p[i] / q[i] : (p[i] > 0 ? kInf : 0.0);
  };
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return ratio(a) > ratio(b); });
  double got = 0, beta = 0;
  for (auto i : idx) {
    if (got >= alpha) break;
    if (p[i] <= 0) continue;
    const double take = std::min(1.0, (alpha - got) / p[i]);
    got += take * p[i];
    beta += take * q[i];
  }
  return -std::log2(beta);
}

std::vector<double> product_power(const std::vector<double>& p, std::size_t n) {
  std::vector<double> out{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> next;
    next.reserve(out.size() * p.size());
    for (double a : out)
      for (double b : p) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

KrausChannel cnot_split() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
  return KrausChannel(RegisterLayout{{"F1", 2}, {"F2", 2}}, RegisterLayout{{"B", 2}, {"C", 2}},
                      {u});
}

}  // namespace

int main() {
  criterion(1, "neyman-pearson", [] {
    const auto t0 = std::chrono::steady_clock::now();
    random::Rng rng(101);
    double worst_gap = 0;
    for (int i = 0; i < 200; ++i) {
      const auto d = Eigen::Index(2 + i % 5);
      Matrix rho = random::density_matrix(rng, d), sigma = random::density_matrix(rng, d);
      const double a = std::uniform_real_distribution<double>(0.05, 0.99)(rng);
      worst_gap = std::max(worst_gap, hypothesis_testing_divergence(rho, sigma, a).gap);
    }
    double worst_lp = 0;
    int lp_cases = 0;
    for (int d = 1; d <= 8; ++d)
      for (int i = 0; i < 40; ++i, ++lp_cases) {
        auto p = random::probability_vector(rng, std::size_t(d));
        auto q = random::probability_vector(rng, std::size_t(d));
        if (i % 4 == 0 && d > 1) {  // sigma missing part of the support
          q[0] = 0;
          const double s = std::accumulate(q.begin(), q.end(), 0.0);
          for (auto& x : q) x /= s;
        }
        const double a = std::uniform_real_distribution<double>(0.05, 0.99)(rng);
        Matrix rho = Matrix::Zero(d, d), sigma = Matrix::Zero(d, d);
        for (int k = 0; k < d; ++k) {
          rho(k, k) = p[std::size_t(k)];
          sigma(k, k) = q[std::size_t(k)];
        }
        const double v = hypothesis_testing_divergence(rho, sigma, a).value_bits;
        worst_lp = std::max(worst_lp, std::abs(v - np_oracle_bits(p, q, a)));
      }
    const double s = seconds_since(t0);
    return Outcome{worst_gap <= 1e-7 && worst_lp <= 1e-9 && s < 30,
                   fmt("max rel gap %.2e (tol 1e-7), max |D_H - LP| %.2e over %d diagonal "
                       "pairs (tol 1e-9), %.1f s (limit 30)",
                       worst_gap, worst_lp, lp_cases, s)};
  });

  criterion(2, "closed forms", [] {
    random::Rng rng(202);
    double worst = 0;
    for (double eps : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      Matrix rho = random::density_matrix(rng, 3);
      const double v = hypothesis_testing_divergence(rho, rho, alpha_from_eps(eps)).value_bits;
      worst = std::max(worst, std::abs(v - std::log2(1 / (1 - eps * eps))));
    }
    auto bell = PureState::maximally_entangled("A", "B", 2).density();
    auto mixed = DensityOperator::maximally_mixed(bell.layout());
    const double dmax_err = std::abs(d_max(bell, mixed) - 2);
    double sd = 0;
    for (std::size_t d : {2, 3, 4}) {
      auto phi = PureState::maximally_entangled("A", "B", d).density();
      auto mm = DensityOperator::maximally_mixed(phi.layout());
      sd = std::max(sd, std::abs(hypothesis_testing_divergence(phi, mm, 1.0).value_bits -
                                 2 * std::log2(double(d))));
    }
    return Outcome{worst <= 1e-9 && dmax_err <= 1e-9 && sd <= 1e-8,
                   fmt("D_H(rho||rho) err %.1e (tol 1e-9), D_max(Bell||I/4) err %.1e (tol "
                       "1e-9), D_H^0(Phi_d||I/d^2) err %.1e (tol 1e-8)",
                       worst, dmax_err, sd)};
  });

  criterion(3, "convex split", [] {
    const auto t0 = std::chrono::steady_clock::now();
    auto bell = PureState::maximally_entangled("A", "B", 2).density();
    auto half = DensityOperator::maximally_mixed(RegisterLayout{{"B", 2}});
    bool ok = true;
    std::string d;
    for (double delta : {0.4, 0.6}) {
      const auto n = std::size_t(std::ceil(4 / (delta * delta)));
      auto s = build_convex_split(bell, {"B"}, half, n);
      ok &= s.exact_distance <= delta;
      d += fmt("delta %.1f n=%zu P=%.4f (%s); ", delta, n, s.exact_distance, to_string(s.method));
    }
    ConvexSplitOptions dense;
    dense.method = ConvexSplitMethod::Dense;
    dense.materialize = false;
    auto sd = build_convex_split(bell, {"B"}, half, 10, dense);
    auto ss = build_convex_split(bell, {"B"}, half, 10);
    const double agree = std::abs(sd.exact_distance - ss.exact_distance);
    ok &= sd.exact_distance <= sd.declared_bound && agree <= 1e-9;
    d += fmt("dense dim 2^11 P=%.4f <= %.4f, |dense - symmetric| %.1e; ", sd.exact_distance,
             sd.declared_bound, agree);
    // Classical instances with a binary Q; sigma = (1 - 2^-k, 2^-k) gives D_max = k.
    double worst = -kInf;
    for (int k = 1; k <= 3; ++k) {
      const double s1 = std::exp2(-k);
      RegisterLayout l{{"P", 2}, {"Q", 2}};
      auto rho = DensityOperator::diagonal(l, {0.5, 0, 0, 0.5});
      auto sigma = DensityOperator::diagonal(RegisterLayout{{"Q", 2}}, {1 - s1, s1});
      for (std::size_t n : {16u, 1024u, 16384u}) {
        auto s = build_convex_split(rho, {"Q"}, sigma, n);
        ok &= s.method == ConvexSplitMethod::Classical && std::abs(s.k_bits - k) < 1e-9;
        worst = std::max(worst, s.exact_distance - s.declared_bound);
      }
    }
    ok &= worst <= 0;
    const double secs = seconds_since(t0);
    ok &= secs < 120;
    d += fmt("classical k=1..3, n up to 2^14: max (P - bound) %.3e; %.1f s (limit 120)", worst,
             secs);
    return Outcome{ok, d};
  });

  criterion(4, "bipartite convex split", [] {
    random::Rng rng(404);
    std::vector<std::pair<std::string, DensityOperator>> inst;
    inst.emplace_back("bell", PureState::maximally_entangled("P", "Q", 2).density());
    inst.emplace_back("classical",
                      DensityOperator::diagonal(RegisterLayout{{"P", 2}, {"Q", 2}},
                                                {0.4, 0.1, 0.1, 0.4}));
    inst.emplace_back("random", random::state(rng, RegisterLayout{{"P", 2}, {"Q", 2}}));
    double worst = -kInf;
    int cases = 0;
    bool all_applicable = true;
    for (const auto& [name, rho] : inst)
      for (std::size_t n : {2u, 4u, 8u})
        for (std::size_t m : {2u, 4u, 8u}) {
          auto s = build_bipartite_convex_split(rho, {"Q"}, m, n);
          all_applicable &= s.bound_applicable;
          worst = std::max(worst, s.exact_distance - std::sqrt(std::exp2(s.k_bits) / double(n * m)));
          ++cases;
        }
    return Outcome{worst <= 1e-8 && all_applicable,
                   fmt("%d instances, max (P - sqrt(2^k/(nm))) %.3e (tol 1e-8)", cases, worst)};
  });

  criterion(5, "p2p end-to-end", [] {
    auto phi = PureState::maximally_entangled("A", "A'", 4);
    P2PConfig c{channels::identity(4, "A", "B"), phi, 2, 0.0, 0.5};
    auto r = simulate_p2p(c);
    const double bound = 4 * std::exp2(1.0 - 4.0);
    P2PConfig dep{channels::depolarizing(4, 1.0, "A", "B"), phi, 2, 0.0, 0.5};
    auto rd = simulate_p2p(dep);
    const double dep_err = std::abs(rd.max_error - (1 - std::exp2(-1.0)));
    return Outcome{r.max_error < bound - 0.1 && std::abs(r.theory_bound - bound) < 1e-9 &&
                       dep_err <= 1e-9,
                   fmt("identity max error %.6f < %.3f (D_H %.6f), depolarizing |err - 1/2| "
                       "%.1e (tol 1e-9)",
                       r.max_error, bound, r.dh_bits, dep_err)};
  });

  criterion(6, "iid subset coding", [] {
    auto phi = PureState::maximally_entangled("A", "A'", 4);
    bool ok = true;
    std::string d;
    for (std::size_t w : {4u, 6u, 30u}) {
      PairwiseIndependentFamily fam(w, 1, 2);
      ok &= fam.exact() && fam.pairwise_uniform();
      SubsetCodeConfig c{channels::identity(4, "A", "B"), phi, 1, w, 2, 0.05, 500, 7};
      auto r = simulate_iid_subset(c);
      const double se = r.diagnostic("mean_error_standard_error");
      const double inter = r.diagnostic("intermediate_bound");
      const bool bound_ok = !r.bound_applicable || r.mean_error <= r.theory_bound + 3 * se;
      ok &= bound_ok;
      d += fmt("w=%zu: mean %.4f SE %.4f bound %.4g (%s) intermediate %.4f; ", w, r.mean_error,
               se, r.theory_bound, r.bound_applicable ? "informative" : "vacuous", inter);
    }
    d += "families exact and pairwise uniform";
    return Outcome{ok, d};
  });

  criterion(7, "gelfand-pinsker", [] {
    auto phi = PureState::maximally_entangled("A", "A'", 4);
    auto trivial = PureState::basis(RegisterLayout{{"S", 1}}, 0);
    GelfandPinskerConfig g{
        product_channel(channels::identity(4, "A", "B"), channels::identity(1, "S", "X")),
        tensor(phi, trivial)};
    g.messages = 2;
    g.epsilon = 0.1;
    g.delta = 0.5;
    auto rg = simulate_gelfand_pinsker(g);
    P2PConfig c{channels::identity(4, "A", "B"), phi, 2, 0.1, 0.5};
    auto rp = simulate_p2p(c);
    double diff = std::abs(rg.max_error - rp.max_error) + std::abs(rg.mean_error - rp.mean_error) +
                  std::abs(rg.dh_bits - rp.dh_bits) +
                  std::abs(rg.achieved_rate_bits - rp.achieved_rate_bits);
    for (std::size_t i = 0; i < rp.per_message_error.size(); ++i)
      diff = std::max(diff, std::abs(rg.per_message_error.at(i) - rp.per_message_error[i]));
    bool ok = diff <= 1e-9 && rg.per_message_error.size() == rp.per_message_error.size();

    // Jammer state S carries a classical bit that the channel flips with probability 0.1.
    PureState s_plus(RegisterLayout{{"S", 2}}, Vector::Constant(2, cplx(1 / std::sqrt(2.0))));
    GelfandPinskerConfig cj{
        product_channel(channels::identity(4, "A", "B1"),
                        channels::classical({{0.9, 0.1}, {0.1, 0.9}}, "S", "B2")),
        tensor(phi, s_plus)};
    cj.messages = 2;
    cj.epsilon = 0.01;
    cj.delta = 0.2;
    auto rj = simulate_gelfand_pinsker(cj);
    const double bound = std::pow(6 * cj.epsilon + 4 * cj.delta, 2);
    const bool informative = bound < 1;
    ok &= std::abs(rj.theory_bound - bound) < 1e-12 && (!informative || rj.max_error <= bound);
    return Outcome{ok, fmt("trivial jammer vs p2p max field diff %.1e (tol 1e-9); classical "
                           "jammer max error %.4f vs (6e+4d)^2 = %.4f (%s, hypotheses %s)",
                           diff, rj.max_error, bound, informative ? "informative" : "vacuous",
                           rj.hypotheses_met ? "met" : "not met")};
  });

  criterion(8, "broadcast", [] {
    auto psi = tensor(PureState::maximally_entangled("F1", "A1", 2),
                      PureState::maximally_entangled("F2", "A2", 2));
    BroadcastConfig b{product_channel(channels::identity(2, "F1", "B"),
                                      channels::depolarizing(2, 0.3, "F2", "C")),
                      psi};
    b.enforce_region = false;
    b.epsilon = 0.1;
    auto rb = simulate_broadcast(b);
    P2PConfig pb{channels::identity(2, "F1", "B"), PureState::maximally_entangled("F1", "A'", 2),
                 2, 0.1, 0.5};
    P2PConfig pc{channels::depolarizing(2, 0.3, "F2", "C"),
                 PureState::maximally_entangled("F2", "A'", 2), 2, 0.1, 0.5};
    auto e1 = simulate_p2p(pb), e2 = simulate_p2p(pc);
    double diff = std::abs(rb.diagnostic("max_bob_error") - e1.max_error) +
                  std::abs(rb.diagnostic("max_charlie_error") - e2.max_error);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const double joint = 1 - (1 - e1.per_message_error[i]) * (1 - e2.per_message_error[j]);
        diff = std::max(diff, std::abs(rb.per_message_error.at(i * 2 + j) - joint));
      }
    bool ok = diff <= 1e-9;

    BroadcastConfig cc{cnot_split(), psi};
    cc.enforce_region = false;
    cc.epsilon = 0.0;
    cc.delta = 0.01;
    auto rc = simulate_broadcast(cc);
    const double bound = std::pow(4 * cc.epsilon + 9 * std::sqrt(cc.delta), 2);
    const bool informative = bound < 1;
    ok &= std::abs(rc.theory_bound - bound) < 1e-12 && (!informative || rc.max_error <= bound);
    return Outcome{ok, fmt("product instance vs two p2p runs max diff %.1e (tol 1e-9); "
                           "correlated d=4 max error %.4f vs (4e+9sqrt(d))^2 = %.4f (%s, "
                           "region %s)",
                           diff, rc.max_error, bound, informative ? "informative" : "vacuous",
                           rc.hypotheses_met ? "met" : "not met")};
  });

  criterion(9, "fact suite", [] {
    const auto t0 = std::chrono::steady_clock::now();
    auto res = selftest::facts(2026, 200);
    const double s = seconds_since(t0);
    bool ok = s < 60;
    std::string failed;
    double worst = -kInf;
    for (const auto& r : res) {
      ok &= r.passed() && r.instances >= 200;
      worst = std::max(worst, r.worst);
      if (!r.passed()) failed += " " + r.name;
    }
    return Outcome{ok, fmt("%zu facts x 200 instances, worst violation %.2e, %.1f s (limit 60)%s",
                           res.size(), worst, s, failed.empty() ? "" : (" failed:" + failed).c_str())};
  });

  criterion(10, "second order", [] {
    const std::vector<double> p{0.8, 0.2}, q{0.4, 0.6};
    const double eps = 0.1;
    Matrix rho = Matrix::Zero(2, 2), sigma = Matrix::Zero(2, 2);
    rho(0, 0) = p[0];
    rho(1, 1) = p[1];
    sigma(0, 0) = q[0];
    sigma(1, 1) = q[1];
    double c = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
      const double exact =
          hypothesis_testing_divergence_classical(product_power(p, n), product_power(q, n), 1 - eps)
              .value_bits;
      const double approx = second_order_estimate(rho, sigma, n, eps).value_bits;
      c = std::max(c, std::abs(exact - approx) / (std::log2(double(n) + 1) + 1));
    }
    double inv = 0;
    for (int i = 1; i < 1000; ++i) {
      const double x = -6.0 + 12.0 * i / 1000.0;
      const double pr = gaussian_cdf(x);
      inv = std::max(inv, std::abs(inverse_gaussian_cdf(pr) - x) * gaussian_pdf(x));
    }
    const double one = std::abs(inverse_gaussian_cdf(0.8413447460685429) - 1.0);
    return Outcome{c <= 6 && inv <= 1e-12 && one <= 1e-12,
                   fmt("fitted c %.3f (limit 6), inverse CDF error %.1e, |Phi^-1(0.841...) - 1| "
                       "%.1e (tol 1e-12)",
                       c, inv, one)};
  });

  criterion(11, "restricted smoothing", [] {
    std::vector<std::vector<double>> pairs{{0.4, 0.1, 0.1, 0.4}, {0.45, 0.05, 0.05, 0.45},
                                           {0.3, 0.2, 0.2, 0.3}, {0.5, 0.0, 0.0, 0.5}};
    bool ok = true;
    std::string d;
    for (const auto& pr : pairs) {
      auto rho = DensityOperator::diagonal(RegisterLayout{{"A", 2}, {"B", 2}}, pr);
      auto r = restricted_smooth_pipeline(rho, {"A"}, 2, 0.1);
      ok &= r.all_hold();
      d += fmt("[P %.3f <= %.3f, infl %.3f <= %.1f, D_max %.3f] ", r.certificate.distance,
               24 * std::sqrt(r.delta), std::max(r.certificate.inflation_a, r.certificate.inflation_b),
               r.inflation_limit, r.certificate.certified_dmax_bits);
    }
    return Outcome{ok, d};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
