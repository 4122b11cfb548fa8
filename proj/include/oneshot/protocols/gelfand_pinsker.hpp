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
#include <optional>
#include <string>
#include <vector>

#include "oneshot/convex_split/uhlmann.hpp"
#include "oneshot/protocols/p2p.hpp"

namespace oneshot {

/** Channel N_{AS -> B} whose input S is held in the state phi_{SS'}. */
struct GelfandPinskerConfig {
  KrausChannel channel;  // inputs include `jammer`
  PureState psi;         // on channel inputs, `purifier` and optional extra registers
  std::optional<PureState> phi;  // on (jammer, jammer_purifier); defaults to a purification of psi_S
  std::string jammer = "S";
  std::string purifier = "A'";
  std::string jammer_purifier = "S'";
  std::size_t messages = 2;  // 2^R
  std::size_t band = 1;      // 2^r
  double epsilon = 0;
  double delta = 0.5;
  std::optional<double> imax_certificate;  // certified smooth max-information I(A':S)
  std::size_t max_dim = default_max_dim();
};

inline ProtocolReport simulate_gelfand_pinsker(const GelfandPinskerConfig& cfg) {
  require(cfg.messages >= 1 && cfg.band >= 1, ErrorKind::BadParam, "need messages, band >= 1");
  require(cfg.delta > 0 && cfg.delta < 1, ErrorKind::BadParam, "delta must lie in (0, 1)");
  const auto inputs = cfg.channel.input_layout().labels();
  require(cfg.channel.input_layout().contains(cfg.jammer), ErrorKind::UnknownLabel,
          "jammer register '" + cfg.jammer + "' is not a channel input");
  require(cfg.psi.layout().contains(cfg.purifier), ErrorKind::UnknownLabel,
          "psi has no register '" + cfg.purifier + "'");
  for (const auto& l : inputs)
    require(cfg.psi.layout().contains(l), ErrorKind::UnknownLabel, "psi has no register '" + l + "'");

  const std::string pur2 = cfg.purifier + "'";
  const std::string k_label = "K";
  for (const auto& l : {pur2, k_label})
    require(!cfg.psi.layout().contains(l), ErrorKind::LabelCollision,
            "psi already uses the internal label '" + l + "'");

  auto psi_s = reduced(cfg.psi, {cfg.jammer});
  PureState phi = cfg.phi ? *cfg.phi : purify(psi_s, cfg.jammer_purifier);
  require(phi.layout().size() == 2 && phi.layout().contains(cfg.jammer) &&
              phi.layout().contains(cfg.jammer_purifier),
          ErrorKind::BadParam, "phi must live on (jammer, jammer purifier)");
  require(phi.layout().dim_of(cfg.jammer) == psi_s.dim(), ErrorKind::ShapeMismatch,
          "phi and psi disagree on the jammer dimension");
  const double mismatch =
      (reduced(phi, {cfg.jammer}).matrix() - psi_s.matrix()).cwiseAbs().maxCoeff();
  require(mismatch <= 1e-8, ErrorKind::MarginalMismatch,
          "psi_S differs from phi_S by " + std::to_string(mismatch));

  const std::size_t M = cfg.messages, band = cfg.band;
  auto cp = channel_pair(cfg.channel, cfg.psi.density(), inputs, {cfg.purifier}, cfg.max_dim);
  const double alpha = alpha_from_eps(cfg.epsilon);
  auto dh = hypothesis_testing_divergence(cp.joint, cp.reference, alpha);
  BandedDecoder dec(*dh.test, cp.d_out, cp.d_pur, M, band, "B", cfg.purifier, cfg.max_dim);

  // |psi>_{A'' A'} purifying psi_A'.
  auto sigma = purify(reduced(cfg.psi, {cfg.purifier}), pur2);

  ProtocolReport rep;
  rep.protocol = "gp";
  std::vector<double> overlaps;
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<std::size_t> positions;
    for (std::size_t k = m * band + 1; k <= (m + 1) * band; ++k) positions.push_back(k);
    auto target = convex_split_purification(cfg.psi, cfg.purifier, sigma, pur2, positions,
                                            k_label, cfg.max_dim);
    PureState source = phi;
    std::vector<std::string> shared{cfg.jammer};
    for (auto k : positions) {
      source = tensor(source,
                      sigma.relabeled({{cfg.purifier, indexed(cfg.purifier, k)},
                                       {pur2, indexed(pur2, k)}}),
                      cfg.max_dim);
      shared.push_back(indexed(cfg.purifier, k));
    }
    auto u = uhlmann_isometry(target, source, shared);
    overlaps.push_back(u.overlap);

    // Send the channel inputs; keep Bob's band.
    std::vector<std::string> keep = inputs;
    for (auto k : positions) keep.push_back(indexed(cfg.purifier, k));
    auto sent = apply_channel(cfg.channel, partial_trace_keep(u.mapped.density(), keep), inputs,
                              cfg.max_dim);
    std::vector<std::string> order = cfg.channel.output_layout().labels();
    for (auto k : positions) order.push_back(indexed(cfg.purifier, k));
    Matrix local = sent.reordered(order).matrix();
    rep.per_message_error.push_back(dec.error(dec.place(local, m, cp.purifier_marginal), m));
  }

  const double R = std::log2(double(M)), r = std::log2(double(band));
  const double L = std::log2(1 / cfg.delta);
  rep.dh_bits = dh.value_bits;
  rep.theory_bound = std::pow(6 * cfg.epsilon + 4 * cfg.delta, 2);
  const double ideal = 2 * cfg.epsilon * cfg.epsilon +
                       (std::isfinite(dh.value_bits) ? 4 * std::exp2(R + r - dh.value_bits) : 0.0);
  const bool rate_ok = R + r <= dh.value_bits - 2 * L;
  const bool band_ok = cfg.imax_certificate && r >= *cfg.imax_certificate + 2 * L;
  rep.hypotheses_met = rate_ok && band_ok;
  rep.achieved_rate_bits = R;
  rep.resources.ebit_copies = double(M * band);
  rep.summarize();
  const double min_overlap = *std::min_element(overlaps.begin(), overlaps.end());
  rep.diagnostics = {{"alpha_min", alpha},
                     {"alpha", dh.alpha},
                     {"beta", dh.beta},
                     {"band_bits", r},
                     {"ideal_decoding_bound", ideal},
                     {"min_uhlmann_overlap", min_overlap},
                     {"convex_split_distance",
                      std::sqrt(std::max(0.0, 1 - min_overlap * min_overlap))},
                     {"rate_condition_met", rate_ok ? 1.0 : 0.0},
                     {"band_condition_met", band_ok ? 1.0 : 0.0}};
  rep.series = {{"uhlmann_overlap", overlaps}};
  return rep;
}

}  // namespace oneshot
