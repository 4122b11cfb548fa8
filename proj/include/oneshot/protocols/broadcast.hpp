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
#include <string>
#include <vector>

#include "oneshot/convex_split/uhlmann.hpp"
#include "oneshot/protocols/p2p.hpp"

namespace oneshot {

/** Broadcast channel N_{F -> BC}; Alice shares pools of A1 with Bob and of A2
 *  with Charlie. */
struct BroadcastConfig {
  KrausChannel channel;  // outputs include bob_output and charlie_output
  PureState psi;         // on channel inputs, bob_share, charlie_share and optional extras
  std::string bob_output = "B";
  std::string charlie_output = "C";
  std::string bob_share = "A1";
  std::string charlie_share = "A2";
  std::size_t messages_bob = 2;      // 2^{R1}
  std::size_t messages_charlie = 2;  // 2^{R2}
  std::size_t band_bob = 1;          // 2^{r1}
  std::size_t band_charlie = 1;      // 2^{r2}
  double epsilon = 0;
  double delta = 0.5;
  double imax_certificate = 0;  // certified smooth max-information I(A1:A2)
  bool enforce_region = true;
  std::size_t max_dim = default_max_dim();
};

/** Slack of each band-size inequality; negative means violated. */
struct RegionCheck {
  std::vector<std::string> names;
  std::vector<double> slack;
  std::size_t binding = 0;
  bool holds() const {
    return std::all_of(slack.begin(), slack.end(), [](double s) { return s >= -1e-12; });
  }
};

inline RegionCheck broadcast_region(double R1, double R2, double r1, double r2, double dh1,
                                    double dh2, double certificate, double delta) {
  const double L = std::log2(1 / delta);
  RegionCheck rc;
  rc.names = {"r1 + r2 >= I + 3 log(1/delta)", "r1 >= log(1/delta)", "r2 >= log(1/delta)",
              "R1 + r1 <= D_H(B) - 4 log(1/delta) - 1", "R2 + r2 <= D_H(C) - 4 log(1/delta) - 1"};
  rc.slack = {r1 + r2 - certificate - 3 * L, r1 - L, r2 - L, dh1 - 4 * L - 1 - R1 - r1,
              dh2 - 4 * L - 1 - R2 - r2};
  rc.binding = std::min_element(rc.slack.begin(), rc.slack.end()) - rc.slack.begin();
  return rc;
}

inline ProtocolReport simulate_broadcast(const BroadcastConfig& cfg) {
  require(cfg.messages_bob >= 1 && cfg.messages_charlie >= 1 && cfg.band_bob >= 1 &&
              cfg.band_charlie >= 1,
          ErrorKind::BadParam, "message counts and bands must be >= 1");
  require(cfg.delta > 0 && cfg.delta < 1, ErrorKind::BadParam, "delta must lie in (0, 1)");
  const auto inputs = cfg.channel.input_layout().labels();
  for (const auto& l : {cfg.bob_output, cfg.charlie_output})
    require(cfg.channel.output_layout().contains(l), ErrorKind::UnknownLabel,
            "channel has no output '" + l + "'");
  for (const auto& l : {cfg.bob_share, cfg.charlie_share})
    require(cfg.psi.layout().contains(l), ErrorKind::UnknownLabel, "psi has no register '" + l + "'");
  const std::string p_pur = cfg.bob_share + "'", q_pur = cfg.charlie_share + "'";

  std::vector<std::string> keep = inputs;
  keep.push_back(cfg.bob_share);
  keep.push_back(cfg.charlie_share);
  auto out = apply_channel(cfg.channel, partial_trace_keep(cfg.psi.density(), keep), inputs,
                           cfg.max_dim);
  auto cp_b = pair_from_state(out, {cfg.bob_output}, {cfg.bob_share});
  auto cp_c = pair_from_state(out, {cfg.charlie_output}, {cfg.charlie_share});
  const double alpha = alpha_from_eps(cfg.epsilon);
  auto dh_b = hypothesis_testing_divergence(cp_b.joint, cp_b.reference, alpha);
  auto dh_c = hypothesis_testing_divergence(cp_c.joint, cp_c.reference, alpha);

  const std::size_t M1 = cfg.messages_bob, M2 = cfg.messages_charlie;
  const std::size_t K1 = cfg.band_bob, K2 = cfg.band_charlie;
  const double R1 = std::log2(double(M1)), R2 = std::log2(double(M2));
  auto region = broadcast_region(R1, R2, std::log2(double(K1)), std::log2(double(K2)),
                                 dh_b.value_bits, dh_c.value_bits, cfg.imax_certificate,
                                 cfg.delta);
  if (cfg.enforce_region && !region.holds())
    fail(ErrorKind::RegionViolation,
         "band sizes violate " + region.names[region.binding] + " (slack " +
             std::to_string(region.slack[region.binding]) + ")");

  BandedDecoder bob(*dh_b.test, cp_b.d_out, cp_b.d_pur, M1, K1, cfg.bob_output, cfg.bob_share,
                    cfg.max_dim);
  BandedDecoder charlie(*dh_c.test, cp_c.d_out, cp_c.d_pur, M2, K2, cfg.charlie_output,
                        cfg.charlie_share, cfg.max_dim);
  const std::size_t joint_dim = bob.layout().total_dim() * charlie.layout().total_dim();
  const bool joint_exact = joint_dim <= cfg.max_dim;
  RegisterLayout joint_layout;
  if (joint_exact) joint_layout = bob.layout().concat(charlie.layout());

  auto sigma_p = purify(reduced(cfg.psi, {cfg.bob_share}), p_pur);
  auto sigma_q = purify(reduced(cfg.psi, {cfg.charlie_share}), q_pur);

  ProtocolReport rep;
  rep.protocol = "broadcast";
  std::vector<double> bob_err, charlie_err, overlaps;
  for (std::size_t m1 = 0; m1 < M1; ++m1)
    for (std::size_t m2 = 0; m2 < M2; ++m2) {
      std::vector<std::size_t> pp, qp;
      for (std::size_t k = m1 * K1 + 1; k <= (m1 + 1) * K1; ++k) pp.push_back(k);
      for (std::size_t k = m2 * K2 + 1; k <= (m2 + 1) * K2; ++k) qp.push_back(k);
      auto target = bipartite_convex_split_purification(cfg.psi, cfg.bob_share,
                                                        cfg.charlie_share, sigma_p, p_pur,
                                                        sigma_q, q_pur, pp, qp, "K", cfg.max_dim);
      std::vector<std::string> bob_band = bob.band_labels(m1);
      std::vector<std::string> charlie_band = charlie.band_labels(m2);
      std::vector<PureState> parts;
      for (auto k : pp)
        parts.push_back(sigma_p.relabeled(
            {{cfg.bob_share, indexed(cfg.bob_share, k)}, {p_pur, indexed(p_pur, k)}}));
      for (auto k : qp)
        parts.push_back(sigma_q.relabeled(
            {{cfg.charlie_share, indexed(cfg.charlie_share, k)}, {q_pur, indexed(q_pur, k)}}));
      PureState source = parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) source = tensor(source, parts[i], cfg.max_dim);
      std::vector<std::string> shared = bob_band;
      shared.insert(shared.end(), charlie_band.begin(), charlie_band.end());
      auto u = uhlmann_isometry(target, source, shared);
      overlaps.push_back(u.overlap);

      std::vector<std::string> send = inputs;
      send.insert(send.end(), shared.begin(), shared.end());
      auto sent = apply_channel(cfg.channel, partial_trace_keep(u.mapped.density(), send), inputs,
                                cfg.max_dim);
      std::vector<std::string> bl{cfg.bob_output}, cl{cfg.charlie_output};
      bl.insert(bl.end(), bob_band.begin(), bob_band.end());
      cl.insert(cl.end(), charlie_band.begin(), charlie_band.end());
      Matrix local_b = partial_trace_keep(sent, bl).reordered(bl).matrix();
      Matrix local_c = partial_trace_keep(sent, cl).reordered(cl).matrix();
      const double eb = bob.error(bob.place(local_b, m1, cp_b.purifier_marginal), m1);
      const double ec = charlie.error(charlie.place(local_c, m2, cp_c.purifier_marginal), m2);
      bob_err.push_back(eb);
      charlie_err.push_back(ec);

      double joint = std::min(1.0, eb + ec);
      if (joint_exact) {
        std::vector<std::string> both = bl;
        both.insert(both.end(), cl.begin(), cl.end());
        std::vector<detail::Factor> fs{
            {both, partial_trace_keep(sent, both).reordered(both).matrix()}};
        for (const auto& l : bob.layout().complement(bl).labels())
          fs.push_back({{l}, cp_b.purifier_marginal});
        for (const auto& l : charlie.layout().complement(cl).labels())
          fs.push_back({{l}, cp_c.purifier_marginal});
        Matrix theta = detail::assemble(fs, joint_layout);
        Matrix effect = kron(bob.accept_effect(m1), charlie.accept_effect(m2));
        joint = 1.0 - trace_product(effect, theta).real();
      }
      rep.per_message_error.push_back(joint);
    }

  rep.dh_bits = std::min(dh_b.value_bits, dh_c.value_bits);
  rep.theory_bound = std::pow(4 * cfg.epsilon + 9 * std::sqrt(cfg.delta), 2);
  rep.hypotheses_met = region.holds();
  rep.achieved_rate_bits = R1 + R2;
  rep.resources.ebit_copies = double(M1 * K1 + M2 * K2);
  rep.summarize();
  const double min_overlap = *std::min_element(overlaps.begin(), overlaps.end());
  rep.diagnostics = {{"alpha_min", alpha},
                     {"dh_bob_bits", dh_b.value_bits},
                     {"dh_charlie_bits", dh_c.value_bits},
                     {"rate_bob_bits", R1},
                     {"rate_charlie_bits", R2},
                     {"max_bob_error", *std::max_element(bob_err.begin(), bob_err.end())},
                     {"max_charlie_error",
                      *std::max_element(charlie_err.begin(), charlie_err.end())},
                     {"joint_exact", joint_exact ? 1.0 : 0.0},
                     {"min_uhlmann_overlap", min_overlap},
                     {"convex_split_distance",
                      std::sqrt(std::max(0.0, 1 - min_overlap * min_overlap))},
                     {"binding_inequality", double(region.binding + 1)},
                     {"binding_slack", region.slack[region.binding]}};
  rep.series = {{"bob_error", bob_err},
                {"charlie_error", charlie_err},
                {"uhlmann_overlap", overlaps},
                {"region_slack", region.slack}};
  return rep;
}

}  // namespace oneshot
