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
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oneshot/core/random.hpp"
#include "oneshot/divergences/relative_entropy.hpp"
#include "oneshot/protocols/p2p.hpp"

namespace oneshot {

namespace detail {

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    require(r <= UINT64_MAX / (n - k + i), ErrorKind::DimGuard, "binomial overflow");
    r = r * (n - k + i) / i;
  }
  return r;
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t f = 2; f * f <= p; ++f)
    if (p % f == 0) return false;
  return true;
}

/** GF(p^k), elements encoded as base-p digit strings of polynomials. */
class FiniteField {
 public:
  FiniteField(std::uint64_t p, std::size_t k) : p_(p), k_(k), q_(1) {
    for (std::size_t i = 0; i < k; ++i) q_ *= p;
    if (k > 1) modulus_ = find_irreducible();
  }

  std::uint64_t order() const { return q_; }

  std::uint64_t add(std::uint64_t x, std::uint64_t y) const {
    if (k_ == 1) return (x + y) % p_;
    auto a = digits(x), b = digits(y);
    for (std::size_t i = 0; i < k_; ++i) a[i] = (a[i] + b[i]) % p_;
    return encode(a);
  }

  std::uint64_t mul(std::uint64_t x, std::uint64_t y) const {
    if (k_ == 1) return (x * y) % p_;
    auto a = digits(x), b = digits(y);
    std::vector<std::uint64_t> c(2 * k_ - 1, 0);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p_;
    reduce(c, modulus_);
    c.resize(k_);
    return encode(c);
  }

 private:
  std::vector<std::uint64_t> digits(std::uint64_t x) const {
    std::vector<std::uint64_t> d(k_);
    for (auto& v : d) {
      v = x % p_;
      x /= p_;
    }
    return d;
  }
  std::uint64_t encode(const std::vector<std::uint64_t>& d) const {
    std::uint64_t x = 0;
    for (std::size_t i = d.size(); i-- > 0;) x = x * p_ + d[i];
    return x;
  }

  // Remainder of `c` modulo the monic polynomial `m` (coefficients low to high).
  void reduce(std::vector<std::uint64_t>& c, const std::vector<std::uint64_t>& m) const {
    const std::size_t deg = m.size() - 1;
    for (std::size_t i = c.size(); i-- > deg;) {
      const std::uint64_t f = c[i];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= deg; ++j)
        c[i - deg + j] = (c[i - deg + j] + (p_ - f) * m[j]) % p_;
    }
  }

  std::vector<std::uint64_t> find_irreducible() const {
    auto monic = [&](std::size_t deg, std::uint64_t code) {
      std::vector<std::uint64_t> m(deg + 1);
      for (std::size_t i = 0; i < deg; ++i) {
        m[i] = code % p_;
        code /= p_;
      }
      m[deg] = 1;
      return m;
    };
    std::uint64_t count = q_;
    for (std::uint64_t code = 0; code < count; ++code) {
      auto cand = monic(k_, code);
      bool irreducible = true;
      for (std::size_t deg = 1; deg <= k_ / 2 && irreducible; ++deg) {
        std::uint64_t nd = 1;
        for (std::size_t i = 0; i < deg; ++i) nd *= p_;
        for (std::uint64_t dc = 0; dc < nd; ++dc) {
          auto c = cand;
          reduce(c, monic(deg, dc));
          if (std::all_of(c.begin(), c.begin() + deg, [](auto v) { return v == 0; })) {
            irreducible = false;
            break;
          }
        }
      }
      if (irreducible) return cand;
    }
    fail(ErrorKind::NoConverge, "no irreducible polynomial found");
  }

  std::uint64_t p_;
  std::size_t k_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
};

}  // namespace detail

/** Pairwise-independent assignment of n-subsets of w positions to messages.
 *
 *  C(w,n) = prod q_i over prime powers; message x maps to the subset with
 *  mixed-radix index (a_i x + b_i over GF(q_i))_i. Uniform and pairwise
 *  independent whenever messages <= min q_i. Otherwise the family falls back
 *  to x -> ((a x + b) mod p) mod C for the smallest prime p >= max(C, messages),
 *  which is slightly biased. */
class PairwiseIndependentFamily {
 public:
  PairwiseIndependentFamily(std::size_t w, std::size_t n, std::size_t messages)
      : w_(w), n_(n), messages_(messages) {
    require(n >= 1 && n <= w, ErrorKind::BadParam, "need 1 <= n <= w");
    require(messages >= 1, ErrorKind::BadParam, "need at least one message");
    count_ = detail::choose(w, n);
    std::uint64_t rest = count_;
    std::uint64_t min_q = UINT64_MAX;
    for (std::uint64_t f = 2; rest > 1; ++f) {
      if (rest % f) continue;
      std::size_t k = 0;
      while (rest % f == 0) {
        rest /= f;
        ++k;
      }
      fields_.emplace_back(f, k);
      min_q = std::min(min_q, fields_.back().order());
    }
    exact_ = count_ == 1 || messages <= min_q;
    if (!exact_) {
      fields_.clear();
      prime_ = std::max<std::uint64_t>(count_, messages);
      while (!detail::is_prime(prime_)) ++prime_;
    }
    params_ = 1;
    if (exact_)
      for (const auto& f : fields_) params_ *= f.order() * f.order();
    else
      params_ = prime_ * prime_;
  }

  std::size_t w() const { return w_; }
  std::size_t n() const { return n_; }
  std::size_t messages() const { return messages_; }
  bool exact() const { return exact_; }
  std::uint64_t subset_count() const { return count_; }
  std::uint64_t parameter_count() const { return params_; }
  std::uint64_t modulus() const { return exact_ ? count_ : prime_; }
  double randomness_bits() const { return std::log2(double(params_)); }

  /** Subset index in [0, C(w,n)) of `message` under parameter `param`. */
  std::uint64_t index(std::uint64_t param, std::size_t message) const {
    if (!exact_) {
      const std::uint64_t a = param % prime_, b = param / prime_;
      return ((a * message + b) % prime_) % count_;
    }
    std::uint64_t idx = 0, radix = 1;
    for (const auto& f : fields_) {
      const std::uint64_t q = f.order();
      const std::uint64_t a = param % q, b = (param / q) % q;
      param /= q * q;
      idx += radix * f.add(f.mul(a, message % q), b);
      radix *= q;
    }
    return idx;
  }

  /** 0-based sorted positions of subset `rank` (combinatorial number system). */
  std::vector<std::size_t> unrank(std::uint64_t rank) const {
    std::vector<std::size_t> s;
    std::size_t c = w_;
    for (std::size_t i = n_; i >= 1; --i) {
      while (detail::choose(c, i) > rank) --c;
      rank -= detail::choose(c, i);
      s.push_back(c);
    }
    std::sort(s.begin(), s.end());
    return s;
  }

  std::vector<std::vector<std::size_t>> subsets(std::uint64_t param) const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t m = 0; m < messages_; ++m) out.push_back(unrank(index(param, m)));
    return out;
  }

  std::uint64_t sample(random::Rng& rng) const {
    return std::uniform_int_distribution<std::uint64_t>(0, params_ - 1)(rng);
  }

  /** Exhaustive check that every single marginal is uniform on C subsets and
   *  every pair of distinct messages is uniform on C^2 pairs. */
  bool pairwise_uniform() const {
    const std::uint64_t C = count_;
    require(C * C <= 1u << 24 && params_ <= 1u << 24, ErrorKind::DimGuard,
            "family too large for exhaustive check");
    for (std::size_t m1 = 0; m1 < messages_; ++m1) {
      std::vector<std::uint64_t> single(C, 0);
      for (std::uint64_t t = 0; t < params_; ++t) ++single[index(t, m1)];
      for (auto c : single)
        if (c * C != params_) return false;
      for (std::size_t m2 = m1 + 1; m2 < messages_; ++m2) {
        std::vector<std::uint64_t> pair(C * C, 0);
        for (std::uint64_t t = 0; t < params_; ++t) ++pair[index(t, m1) * C + index(t, m2)];
        for (auto c : pair)
          if (c * C * C != params_) return false;
      }
    }
    return true;
  }

 private:
  std::size_t w_, n_, messages_;
  std::uint64_t count_ = 1, params_ = 1, prime_ = 0;
  bool exact_ = true;
  std::vector<detail::FiniteField> fields_;
};

struct SubsetCodeConfig {
  KrausChannel channel;
  PureState psi;  // on the channel inputs and the purifier A'
  std::size_t n = 1;
  std::size_t w = 4;
  std::size_t messages = 2;  // 2^{nR}
  double epsilon = 0.05;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::size_t max_dim = default_max_dim();
};

/** sum_t C(n,t) C(w-n,n-t) / C(w,n) 2^{F t}: mean overlap weight of two
 *  independent uniform n-subsets. */
inline double overlap_weight(std::size_t n, std::size_t w, double f_bits) {
  double s = 0;
  const double total = double(detail::choose(w, n));
  for (std::size_t t = 0; t <= n; ++t)
    s += double(detail::choose(n, t)) * double(detail::choose(w - n, n - t)) / total *
         std::exp2(f_bits * double(t));
  return s;
}

inline ProtocolReport simulate_iid_subset(const SubsetCodeConfig& cfg) {
  require(cfg.w > 2 * cfg.n, ErrorKind::BadParam, "subset coding requires w > 2n");
  require(cfg.n >= 1, ErrorKind::BadParam, "need n >= 1");
  require(cfg.samples >= 1, ErrorKind::BadParam, "sample count must be at least 1");
  require(cfg.messages >= 1, ErrorKind::BadParam, "need at least one message");
  require(cfg.epsilon > 0 && cfg.epsilon < 1, ErrorKind::BadParam, "eps must lie in (0, 1)");

  auto pur = purifier_labels(cfg.psi.layout(), cfg.channel);
  auto cp = channel_pair(cfg.channel, cfg.psi.density(), cfg.channel.input_layout().labels(), pur,
                         cfg.max_dim);
  const std::size_t n = cfg.n, M = cfg.messages;
  std::size_t test_dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    test_dim *= cp.d_out * cp.d_pur;
    check_dim_guard(test_dim, cfg.max_dim, "n-fold test space");
  }

  // n-fold pair in the order B_1 A'_1 ... B_n A'_n.
  Matrix joint_n = Matrix::Ones(1, 1), ref_n = Matrix::Ones(1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    joint_n = kron(joint_n, cp.joint);
    ref_n = kron(ref_n, cp.reference);
  }
  const double alpha = 1.0 - cfg.epsilon;
  auto dh = hypothesis_testing_divergence(joint_n, ref_n, alpha);
  const Matrix& pi = *dh.test;

  auto inputs = cfg.channel.input_layout().labels();
  std::vector<std::string> order = inputs;
  order.insert(order.end(), pur.begin(), pur.end());
  const double f_bits = d_max(cfg.psi.reordered(order).density().matrix(),
                              kron(reduced(cfg.psi, inputs).reordered(inputs).matrix(),
                                   reduced(cfg.psi, pur).reordered(pur).matrix()));

  PairwiseIndependentFamily family(cfg.w, n, M);
  random::Rng rng(cfg.seed);

  std::vector<double> sum(M, 0), sum_sq(M, 0);
  std::vector<double> sample_mean;
  std::size_t max_union = 0;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    auto sets = family.subsets(family.sample(rng));
    // A'_j outside the union carries psi_A' in every hypothesis and I in
    // every test; tracing it out leaves all probabilities unchanged.
    std::set<std::size_t> uni;
    for (const auto& set : sets) uni.insert(set.begin(), set.end());
    max_union = std::max(max_union, uni.size());
    std::vector<Register> regs;
    for (std::size_t i = 1; i <= n; ++i) regs.push_back({indexed("B", i), cp.d_out});
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= cp.d_out;
    for (auto j : uni) {
      total *= cp.d_pur;
      check_dim_guard(total, cfg.max_dim, "subset decoding space");
      regs.push_back({indexed("A'", j + 1), cp.d_pur});
    }
    RegisterLayout layout(regs);

    auto pair_labels = [&](const std::vector<std::size_t>& set) {
      std::vector<std::string> ls;
      for (std::size_t i = 0; i < n; ++i) {
        ls.push_back(indexed("B", i + 1));
        ls.push_back(indexed("A'", set[i] + 1));
      }
      return ls;
    };
    std::vector<Matrix> lambdas;
    for (const auto& set : sets) lambdas.push_back(embed(pi, pair_labels(set), layout));
    PositionDecoder dec(std::move(lambdas));

    double mean = 0;
    for (std::size_t m = 0; m < M; ++m) {
      std::vector<detail::Factor> fs;
      for (std::size_t i = 0; i < n; ++i)
        fs.push_back({{indexed("B", i + 1), indexed("A'", sets[m][i] + 1)}, cp.joint});
      std::set<std::size_t> used(sets[m].begin(), sets[m].end());
      for (auto j : uni)
        if (!used.count(j)) fs.push_back({{indexed("A'", j + 1)}, cp.purifier_marginal});
      const double err = 1.0 - dec.accept_probability(detail::assemble(fs, layout), {m});
      sum[m] += err;
      sum_sq[m] += err * err;
      mean += err;
    }
    sample_mean.push_back(mean / double(M));
  }

  ProtocolReport rep;
  rep.protocol = "iid";
  const double S = double(cfg.samples);
  std::vector<double> se(M, 0);
  for (std::size_t m = 0; m < M; ++m) {
    const double mu = sum[m] / S;
    rep.per_message_error.push_back(mu);
    if (cfg.samples > 1)
      se[m] = std::sqrt(std::max(0.0, (sum_sq[m] - S * mu * mu) / (S - 1)) / S);
  }
  const std::size_t worst =
      std::max_element(rep.per_message_error.begin(), rep.per_message_error.end()) -
      rep.per_message_error.begin();

  const double rate_bits = std::log2(double(M)) / double(n);
  const double nR = std::log2(double(M));
  const double log2e = 1.0 / std::log(2.0);
  const double exponent =
      std::exp2(f_bits) * log2e * double(n * n) / double(cfg.w - 2 * n) + nR - dh.value_bits;
  rep.theory_bound = 2 * cfg.epsilon + 4 * std::exp2(exponent);
  rep.relaxed_bound = 7 * cfg.epsilon;
  const double intermediate = 2 * cfg.epsilon + 4 * double(M - 1) * dh.beta *
                                                    overlap_weight(n, cfg.w, f_bits);
  const double rate_limit = dh.value_bits -
                            double(n * n) * std::exp2(f_bits) * log2e / double(cfg.w) +
                            std::log2(cfg.epsilon);
  rep.hypotheses_met = cfg.epsilon < 1.0 / 7 && nR <= rate_limit;
  rep.achieved_rate_bits = rate_bits;
  rep.dh_bits = dh.value_bits;
  rep.resources.ebit_copies = double(cfg.w);
  rep.resources.shared_randomness_bits = family.randomness_bits();
  rep.resources.channel_uses = n;
  rep.summarize();

  double grand = 0, grand_sq = 0;
  for (double v : sample_mean) {
    grand += v;
    grand_sq += v * v;
  }
  grand /= S;
  const double grand_se =
      cfg.samples > 1 ? std::sqrt(std::max(0.0, (grand_sq - S * grand * grand) / (S - 1)) / S) : 0;
  rep.diagnostics = {{"alpha_min", alpha},
                     {"beta", dh.beta},
                     {"f_bits", f_bits},
                     {"intermediate_bound", intermediate},
                     {"rate_limit_bits", rate_limit},
                     {"standard_error", se[worst]},
                     {"mean_error_standard_error", grand_se},
                     {"family_exact", family.exact() ? 1.0 : 0.0},
                     {"max_union_size", double(max_union)},
                     {"samples", S}};
  rep.series = {{"standard_error", se}};
  return rep;
}

}  // namespace oneshot
