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

// Command-line front end: divergences, convex split, protocol simulations,
// sweeps and the property self-test.
//
// Exit codes: 0 ok, 1 self-test failure, 2 validation error, 3 non-convergence.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oneshot/convex_split/convex_split.hpp"
#include "oneshot/divergences/info_spectrum.hpp"
#include "oneshot/divergences/second_order.hpp"
#include "oneshot/divergences/smoothing.hpp"
#include "oneshot/divergences/typical.hpp"
#include "oneshot/io/json.hpp"
#include "oneshot/selftest.hpp"

namespace {

using namespace oneshot;
using io::Json;

struct Common {
  std::string out;
  std::string format = "json";
  std::size_t max_dim = default_max_dim();
  double tolerance = 1e-8;
  std::uint64_t seed = 1;
  bool timing = false;
};

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) fail(ErrorKind::Parse, "cannot write '" + c.out + "'");
  f << text;
}

io::RunManifest manifest(const Common& c, const std::string& command, const std::string& config,
                         std::chrono::steady_clock::time_point t0) {
  io::RunManifest m;
  m.command = command;
  m.config_path = config;
  m.seed = c.seed;
  m.tolerances = {{"bound_slack", c.tolerance}, {"max_dim", double(c.max_dim)}};
  m.output_path = c.out;
  m.format = c.format;
  if (c.timing)
    m.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

void emit_json(const Common& c, const std::string& command, const std::string& config,
               std::chrono::steady_clock::time_point t0, const Json& result) {
  Json doc = {{"manifest", manifest(c, command, config, t0).to_json()}, {"result", result}};
  emit(c, io::dump(doc) + "\n");
}

Json spectrum_json(const InfoSpectrumResult& r) {
  return {{"value_bits", r.value_bits},
          {"witness_bits", r.witness_bits},
          {"non_monotone", r.non_monotone},
          {"bracket", {r.bracket_lo, r.bracket_hi}}};
}

Json certificate_json(const SmoothingCertificate& c) {
  return {{"distance", c.distance},
          {"declared_distance", c.declared_distance},
          {"certified_dmax_bits", c.certified_dmax_bits},
          {"achieved_dmax_bits", c.achieved_dmax_bits},
          {"inflation_a", c.inflation_a},
          {"inflation_b", c.inflation_b},
          {"holds", c.holds()}};
}

Json convex_split_json(const ConvexSplitState& s) {
  return {{"n", s.n},
          {"m", s.m},
          {"k_bits", s.k_bits},
          {"exact_distance", s.exact_distance},
          {"declared_bound", s.declared_bound},
          {"bound_applicable", s.bound_applicable},
          {"method", to_string(s.method)}};
}

Json report_json(const ProtocolReport& r, double slack) {
  Json j = io::to_json(r);
  j["bound_check"] = {{"slack", slack},
                      {"holds", !r.bound_applicable || r.max_error <= r.theory_bound + slack}};
  return j;
}

ProtocolReport run_protocol(const std::string& kind, const Json& cfg, const Common& c) {
  if (kind == "p2p") return simulate_p2p(io::parse_p2p(cfg, c.max_dim));
  if (kind == "iid") return simulate_iid_subset(io::parse_iid(cfg, c.max_dim, c.seed));
  if (kind == "gp") return simulate_gelfand_pinsker(io::parse_gp(cfg, c.max_dim));
  if (kind == "broadcast") return simulate_broadcast(io::parse_broadcast(cfg, c.max_dim));
  fail(ErrorKind::BadParam, "unknown protocol '" + kind + "'");
}

void add_common(CLI::App* app, Common& c, bool with_seed) {
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--max-dim", c.max_dim,
                  "Largest dense dimension (default 4096 or $ONESHOT_MAX_DIM)");
  app->add_option("--tolerance", c.tolerance, "Slack for reported bound checks");
  app->add_flag("--timing", c.timing, "Record wall-clock duration in the manifest");
  if (with_seed) app->add_option("--seed", c.seed, "Seed for randomized steps");
}

int run(int argc, char** argv) {
  CLI::App app{"oneshot: one-shot entanglement-assisted coding toolkit"};
  app.require_subcommand(1);
  Common c;
  const auto t0 = std::chrono::steady_clock::now();

  // divergence
  auto* div = app.add_subcommand("divergence", "Evaluate a divergence");
  std::string kind, rho_path, sigma_path, cut, variant = "standard";
  double alpha_min = -1, eps = -1;
  std::size_t n = 1;
  div->add_option("kind", kind, "Divergence kind")
      ->required()
      ->check(CLI::IsMember({"rel-entropy", "variance", "dmax", "dh", "ds", "imax",
                             "second-order", "smooth-upper", "restricted-pipeline"}));
  div->add_option("--rho", rho_path, "State file")->required();
  div->add_option("--sigma", sigma_path, "Reference state file");
  div->add_option("--alpha-min", alpha_min, "Detection threshold for dh");
  div->add_option("--epsilon", eps, "Smoothing / error parameter");
  div->add_option("--cut", cut, "Comma-separated labels of the first party");
  div->add_option("--n", n, "Number of copies");
  div->add_option("--variant", variant, "Information-spectrum variant")
      ->check(CLI::IsMember({"standard", "alternate"}));
  add_common(div, c, false);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a coding protocol");
  std::string protocol, config;
  sim->add_option("protocol", protocol, "Protocol")
      ->required()
      ->check(CLI::IsMember({"p2p", "gp", "broadcast", "iid"}));
  sim->add_option("--config", config, "Protocol configuration")->required();
  add_common(sim, c, true);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Vary one parameter and write CSV rows");
  std::string param, values;
  sweep->add_option("protocol", protocol, "Protocol")
      ->required()
      ->check(CLI::IsMember({"p2p", "gp", "broadcast", "iid"}));
  sweep->add_option("--config", config, "Base configuration")->required();
  sweep->add_option("--param", param, "Configuration key to vary (e.g. epsilon, delta)")
      ->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  add_common(sweep, c, true);

  // convex-split
  auto* cs = app.add_subcommand("convex-split", "Exact convex-split distance");
  std::string q_labels;
  std::size_t m = 0;
  std::string method = "auto";
  cs->add_option("--rho", rho_path, "Joint state rho_PQ")->required();
  cs->add_option("--q", q_labels, "Comma-separated labels of Q")->required();
  cs->add_option("--sigma", sigma_path, "sigma_Q (default rho_Q)");
  cs->add_option("--n", n, "Copies of Q")->required();
  cs->add_option("--m", m, "Copies of P (bipartite form)");
  cs->add_option("--method", method, "Evaluation route")
      ->check(CLI::IsMember({"auto", "dense", "symmetric", "classical"}));
  add_common(cs, c, false);

  // rates
  auto* rates = app.add_subcommand("rates", "Asymptotic rate pair I(B:A'), S(A)");
  rates->add_option("--config", config, "File with channel and psi")->required();
  add_common(rates, c, false);

  // selftest
  auto* st = app.add_subcommand("selftest", "Run the property suites");
  std::size_t count = 200;
  st->add_option("--count", count, "Instances per property");
  add_common(st, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*div) {
    auto rho = io::parse_density(io::read_file(rho_path));
    auto need_sigma = [&] {
      require(!sigma_path.empty(), ErrorKind::BadParam, "--sigma is required for " + kind);
      return io::parse_density(io::read_file(sigma_path));
    };
    auto need_eps = [&] {
      require(eps >= 0, ErrorKind::BadParam, "--epsilon is required for " + kind);
      return eps;
    };
    auto need_cut = [&] {
      require(!cut.empty(), ErrorKind::BadParam, "--cut is required for " + kind);
      return split_labels(cut);
    };
    Json result;
    if (kind == "rel-entropy") {
      result = {{"value_bits", relative_entropy(rho, need_sigma())}};
    } else if (kind == "variance") {
      result = {{"value", relative_entropy_variance(rho, need_sigma())}};
    } else if (kind == "dmax") {
      result = {{"value_bits", d_max(rho, need_sigma())}};
    } else if (kind == "dh") {
      const double a = alpha_min >= 0 ? alpha_min : alpha_from_eps(need_eps());
      auto r = hypothesis_testing_divergence(rho, need_sigma(), a);
      result = {{"value_bits", r.value_bits}, {"alpha_min", r.alpha_min},
                {"alpha", r.alpha},           {"beta", r.beta},
                {"dual_value", r.dual_value}, {"duality_gap", r.gap},
                {"multiplier", r.multiplier}};
    } else if (kind == "ds") {
      result = spectrum_json(info_spectrum(
          rho, need_sigma(), need_eps(),
          variant == "standard" ? SpectrumVariant::Standard : SpectrumVariant::Alternate));
    } else if (kind == "imax") {
      result = {{"value_bits", i_max(rho, need_cut())}};
    } else if (kind == "second-order") {
      auto r = second_order_estimate(rho, need_sigma(), n, need_eps());
      result = {{"relative_entropy_bits", r.relative_entropy},
                {"variance", r.variance},
                {"quantile", r.quantile},
                {"value_bits", r.value_bits}};
    } else if (kind == "smooth-upper") {
      auto labels = need_cut();
      auto sigma_a = sigma_path.empty() ? partial_trace_keep(rho, labels) : need_sigma();
      result = certificate_json(smooth_dmax_upper(rho, labels, sigma_a, need_eps()));
    } else {
      auto r = restricted_smooth_pipeline(rho, need_cut(), n, need_eps(), c.max_dim);
      result = {{"delta", r.delta},
                {"n", r.n},
                {"capture_a", r.typical_a.capture},
                {"capture_b", r.typical_b.capture},
                {"projected_fidelity_sq", r.projected_fidelity_sq},
                {"r_prime_bits", r.r_prime_bits},
                {"clip_weight", r.clip_weight},
                {"certificate", certificate_json(r.certificate)},
                {"inflation_limit", r.inflation_limit},
                {"distance_ok", r.distance_ok},
                {"inflation_ok", r.inflation_ok},
                {"dmax_finite", r.dmax_finite}};
    }
    emit_json(c, "divergence " + kind, rho_path, t0, result);
    return 0;
  }

  if (*sim) {
    auto cfg = io::read_file(config);
    auto rep = run_protocol(protocol, cfg, c);
    if (c.format == "csv") {
      std::ostringstream os;
      os << "# " << io::dump(manifest(c, "simulate " + protocol, config, t0).to_json(), 0) << "\n";
      os << "message,error\n";
      for (std::size_t i = 0; i < rep.per_message_error.size(); ++i)
        os << i + 1 << ',' << io::format_number(rep.per_message_error[i]) << "\n";
      emit(c, os.str());
    } else {
      emit_json(c, "simulate " + protocol, config, t0, report_json(rep, c.tolerance));
    }
    return 0;
  }

  if (*sweep) {
    auto base = io::read_file(config);
    std::ostringstream os;
    c.format = "csv";
    os << "# " << io::dump(manifest(c, "sweep " + protocol, config, t0).to_json(), 0) << "\n";
    os << param << ",max_error,theory_bound,applicable\n";
    for (const auto& v : split_labels(values)) {
      double x;
      try {
        x = std::stod(v);
      } catch (const std::exception&) {
        fail(ErrorKind::Parse, "--values: '" + v + "' is not a number");
      }
      Json cfg = base;
      if (param == "rate_bits") cfg.erase("messages");
      if (param == "messages") cfg.erase("rate_bits");
      if (param == "messages" || param == "n" || param == "w" || param == "samples" ||
          param == "band")
        cfg[param] = std::size_t(std::llround(x));
      else
        cfg[param] = x;
      auto rep = run_protocol(protocol, cfg, c);
      os << io::format_number(x) << ',' << io::format_number(rep.max_error) << ','
         << io::format_number(rep.theory_bound) << ',' << (rep.bound_applicable ? 1 : 0) << "\n";
    }
    emit(c, os.str());
    return 0;
  }

  if (*cs) {
    auto rho = io::parse_density(io::read_file(rho_path));
    ConvexSplitOptions opt;
    opt.max_dim = c.max_dim;
    opt.materialize = false;
    opt.method = method == "dense"       ? ConvexSplitMethod::Dense
                 : method == "symmetric" ? ConvexSplitMethod::Symmetric
                 : method == "classical" ? ConvexSplitMethod::Classical
                                         : ConvexSplitMethod::Auto;
    auto q = split_labels(q_labels);
    ConvexSplitState s;
    if (m > 0) {
      s = build_bipartite_convex_split(rho, q, m, n, std::nullopt, opt);
    } else {
      auto sigma = sigma_path.empty() ? partial_trace_keep(rho, q).reordered(q)
                                      : io::parse_density(io::read_file(sigma_path));
      s = build_convex_split(rho, q, sigma, n, opt);
    }
    emit_json(c, "convex-split", rho_path, t0, convex_split_json(s));
    return 0;
  }

  if (*rates) {
    auto cfg = io::read_file(config);
    auto ch = io::parse_channel(io::detail::field(cfg, "channel", ""), "/channel");
    auto psi = io::parse_pure(io::detail::field(cfg, "psi", ""), "/psi");
    auto r = asymptotic_rates(psi, ch);
    emit_json(c, "rates", config, t0, {{"rate_bits", r.rate_bits}, {"ebit_rate", r.ebit_rate}});
    return 0;
  }

  // selftest
  auto results = selftest::all(c.seed, count);
  std::size_t passed = 0;
  Json rows = Json::array();
  for (const auto& r : results) {
    passed += r.passed();
    std::fprintf(stderr, "%-5s %-14s %-38s n=%-4zu worst=%.3e tol=%.0e\n",
                 r.passed() ? "PASS" : "FAIL", r.suite.c_str(), r.name.c_str(), r.instances,
                 r.worst, r.tolerance);
    rows.push_back({{"suite", r.suite},
                    {"name", r.name},
                    {"instances", r.instances},
                    {"worst_violation", r.worst},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed()}});
  }
  emit_json(c, "selftest", "", t0,
            {{"passed", passed}, {"failed", results.size() - passed}, {"properties", rows}});
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const oneshot::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == oneshot::ErrorKind::NoConverge ? 3 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
