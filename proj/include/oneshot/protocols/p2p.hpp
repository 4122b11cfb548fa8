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
#include <vector>

#include "oneshot/channels/channel.hpp"
#include "oneshot/core/metrics.hpp"
#include "oneshot/divergences/hypothesis_testing.hpp"
#include "oneshot/protocols/decoder.hpp"
#include "oneshot/protocols/report.hpp"

namespace oneshot {

/** A state on (out, pur) and its product reference rho_out (x) rho_pur. */
struct ChannelPair {
  Matrix joint;
  Matrix reference;
  Matrix out_marginal;
  Matrix purifier_marginal;
  std::size_t d_out = 1;
  std::size_t d_pur = 1;
};

inline ChannelPair pair_from_state(const DensityOperator& state,
                                   const std::vector<std::string>& out,
                                   const std::vector<std::string>& pur) {
  std::vector<std::string> keep = out;
  keep.insert(keep.end(), pur.begin(), pur.end());
  auto joint = partial_trace_keep(state, keep).reordered(keep);
  ChannelPair cp;
  cp.d_out = joint.layout().select(out).total_dim();
  cp.d_pur = joint.dim() / cp.d_out;
  cp.joint = joint.matrix();
  cp.out_marginal = trace_trailing(cp.joint, cp.d_out, cp.d_pur);
  cp.purifier_marginal =
      trace_trailing(permute_factors(cp.joint, {cp.d_out, cp.d_pur}, {1, 0}), cp.d_pur, cp.d_out);
  cp.reference = kron(cp.out_marginal, cp.purifier_marginal);
  return cp;
}

/** N(psi) on (channel outputs, purifier) and N(psi_in) (x) psi_purifier.
 *  Registers of `psi` outside inputs and purifier are traced out. */
inline ChannelPair channel_pair(const KrausChannel& ch, const DensityOperator& psi,
                                const std::vector<std::string>& inputs,
                                const std::vector<std::string>& purifier,
                                std::size_t max_dim = default_max_dim()) {
  std::vector<std::string> keep = inputs;
  keep.insert(keep.end(), purifier.begin(), purifier.end());
  auto out = apply_channel(ch, partial_trace_keep(psi, keep), inputs, max_dim);
  return pair_from_state(out, ch.output_layout().labels(), purifier);
}

inline double alpha_from_eps(double eps) {
  require(eps >= 0 && eps < 1, ErrorKind::BadParam, "eps must lie in [0, 1)");
  return 1.0 - eps * eps;
}

/** Registers of `psi` that are not channel inputs. */
inline std::vector<std::string> purifier_labels(const RegisterLayout& psi,
                                                const KrausChannel& ch) {
  auto rest = psi.complement(ch.input_layout().labels()).labels();
  require(!rest.empty(), ErrorKind::BadPartition, "psi has no purifier registers");
  return rest;
}

struct P2PConfig {
  KrausChannel channel;
  PureState psi;             // on the channel inputs and the purifier A'
  std::size_t messages = 2;  // 2^R
  double epsilon = 0;
  double delta = 0.5;
  std::size_t max_dim = default_max_dim();
};

/** D_H^eps(N(psi_AA') || N(psi_A) (x) psi_A') - 2 log2(1/delta). */
inline double p2p_rate_bound(const KrausChannel& ch, const PureState& psi, double eps,
                             double delta) {
  require(delta > 0 && delta < 1, ErrorKind::BadParam, "delta must lie in (0, 1)");
  auto cp = channel_pair(ch, psi.density(), ch.input_layout().labels(),
                         purifier_labels(psi.layout(), ch));
  auto dh = hypothesis_testing_divergence(cp.joint, cp.reference, alpha_from_eps(eps));
  return dh.value_bits - 2 * std::log2(1 / delta);
}

inline ProtocolReport simulate_p2p(const P2PConfig& cfg) {
  require(cfg.messages >= 1, ErrorKind::BadParam, "need at least one message");
  require(cfg.delta > 0 && cfg.delta < 1, ErrorKind::BadParam, "delta must lie in (0, 1)");
  auto cp = channel_pair(cfg.channel, cfg.psi.density(), cfg.channel.input_layout().labels(),
                         purifier_labels(cfg.psi.layout(), cfg.channel), cfg.max_dim);
  const double alpha = alpha_from_eps(cfg.epsilon);
  auto dh = hypothesis_testing_divergence(cp.joint, cp.reference, alpha);

  BandedDecoder dec(*dh.test, cp.d_out, cp.d_pur, cfg.messages, 1, "B", "A'", cfg.max_dim);
  ProtocolReport rep;
  rep.protocol = "p2p";
  for (std::size_t m = 0; m < cfg.messages; ++m)
    rep.per_message_error.push_back(
        dec.error(dec.place(cp.joint, m, cp.purifier_marginal), m));

  const double R = std::log2(double(cfg.messages));
  rep.dh_bits = dh.value_bits;
  rep.theory_bound = 2 * cfg.epsilon * cfg.epsilon +
                     (std::isfinite(dh.value_bits) ? 4 * std::exp2(R - dh.value_bits) : 0.0);
  rep.relaxed_bound = 4 * std::pow(cfg.epsilon + cfg.delta, 2);
  const double rate_bound = dh.value_bits - 2 * std::log2(1 / cfg.delta);
  rep.hypotheses_met = R <= rate_bound;
  rep.achieved_rate_bits = R;
  rep.resources.ebit_copies = double(cfg.messages);
  rep.summarize();
  rep.diagnostics = {{"alpha_min", alpha},
                     {"alpha", dh.alpha},
                     {"beta", dh.beta},
                     {"duality_gap", dh.gap},
                     {"rate_bound_bits", rate_bound}};
  return rep;
}

/** Asymptotic benchmarks: I(B:A') of N(psi) and S(psi_A). */
struct AsymptoticRates {
  double rate_bits = 0;
  double ebit_rate = 0;
};

inline AsymptoticRates asymptotic_rates(const PureState& psi, const KrausChannel& ch) {
  auto cp = channel_pair(ch, psi.density(), ch.input_layout().labels(),
                         purifier_labels(psi.layout(), ch));
  AsymptoticRates r;
  r.rate_bits = entropy(cp.out_marginal) + entropy(cp.purifier_marginal) - entropy(cp.joint);
  r.ebit_rate = entropy(reduced(psi, ch.input_layout().labels()));
  return r;
}

}  // namespace oneshot
