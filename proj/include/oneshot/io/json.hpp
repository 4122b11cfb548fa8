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
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oneshot/channels/builtin.hpp"
#include "oneshot/protocols/broadcast.hpp"
#include "oneshot/protocols/gelfand_pinsker.hpp"
#include "oneshot/protocols/iid.hpp"
#include "oneshot/protocols/p2p.hpp"

namespace oneshot::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- writing

/** Lossless number text: 17 significant digits, +-inf as strings, NaN as null. */
inline std::string format_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string close(std::size_t(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return !x.is_structured(); });
      os << '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) os << ',';
        if (!flat) os << nl << pad;
        else if (!first && indent > 0) os << ' ';
        first = false;
        write(os, x, indent, depth + 1);
      }
      if (!flat) os << nl << close;
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline std::string dump(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::write(os, j, indent, 0);
  return os.str();
}

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json layout_json(const RegisterLayout& l) {
  Json a = Json::array();
  for (const auto& r : l.registers()) a.push_back({{"label", r.label}, {"dim", r.dim}});
  return a;
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const DensityOperator& rho) {
  return {{"layout", layout_json(rho.layout())}, {"matrix", matrix_json(rho.matrix())}};
}

inline Json to_json(const PureState& psi) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i)
    amps.push_back(complex_json(psi.amplitudes()(i)));
  return {{"layout", layout_json(psi.layout())}, {"amplitudes", amps}};
}

inline Json to_json(const KrausChannel& ch) {
  Json ks = Json::array();
  for (const auto& k : ch.kraus()) ks.push_back(matrix_json(k));
  return {{"input", layout_json(ch.input_layout())},
          {"output", layout_json(ch.output_layout())},
          {"kraus", ks}};
}

inline Json to_json(const ProtocolReport& r) {
  Json j = {{"protocol", r.protocol},
            {"per_message_error", r.per_message_error},
            {"max_error", r.max_error},
            {"mean_error", r.mean_error},
            {"theory_bound", r.theory_bound},
            {"relaxed_bound", r.relaxed_bound},
            {"bound_applicable", r.bound_applicable},
            {"hypotheses_met", r.hypotheses_met},
            {"achieved_rate_bits", r.achieved_rate_bits},
            {"dh_bits", r.dh_bits},
            {"resources",
             {{"ebit_copies", r.resources.ebit_copies},
              {"shared_randomness_bits", r.resources.shared_randomness_bits},
              {"channel_uses", r.resources.channel_uses}}}};
  Json d = Json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  j["diagnostics"] = d;
  Json s = Json::object();
  for (const auto& [k, v] : r.series) s[k] = v;
  j["series"] = s;
  return j;
}

/** Provenance of one CLI run. Wall-clock time is recorded only on request so
 *  that identical runs produce identical bytes. */
struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> tolerances;
  std::string output_path;
  std::string format = "json";
  std::optional<double> duration_s;

  Json to_json() const {
    Json t = Json::object();
    for (const auto& [k, v] : tolerances) t[k] = v;
    Json j = {{"command", command},     {"config", config_path}, {"seed", seed},
              {"tolerances", t},        {"output", output_path}, {"format", format},
              {"version", kVersion}};
    if (duration_s) j["duration_s"] = *duration_s;
    return j;
  }
};

// ---------------------------------------------------------------- reading

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorKind::Parse, (path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(path + "/" + key, "missing field");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  parse_fail(path, "expected a number");
}

inline std::size_t count(const Json& j, const std::string& path) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0))
    return j.get<std::size_t>();
  parse_fail(path, "expected a non-negative integer");
}

inline std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) parse_fail(path, "expected a string");
  return j.get<std::string>();
}

template <class T, class F>
T get_or(const Json& j, const std::string& key, const std::string& path, T fallback, F conv) {
  auto it = j.find(key);
  return it == j.end() ? fallback : conv(*it, path + "/" + key);
}

inline cplx complex(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) parse_fail(path, "complex entries are [re, im]");
    return {number(j[0], path + "/0"), number(j[1], path + "/1")};
  }
  return {number(j, path), 0.0};
}

inline RegisterLayout layout(const Json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array of registers");
  std::vector<Register> regs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    regs.push_back({text(field(j[i], "label", p), p + "/label"),
                    count(field(j[i], "dim", p), p + "/dim")});
  }
  return RegisterLayout(regs);
}

inline Matrix matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[std::size_t(i)];
    const auto p = path + "/" + std::to_string(i);
    if (!row.is_array()) parse_fail(p, "expected a row array");
    if (i == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) parse_fail(p, "ragged matrix");
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      m(i, k) = complex(row[std::size_t(k)], p + "/" + std::to_string(k));
  }
  return m;
}

inline Vector vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex(j[i], path + "/" + std::to_string(i));
  return v;
}

}  // namespace detail

/** Pure state from {"layout", "amplitudes"} or a builtin:
 *  {"builtin": "maximally_entangled", "labels": [a, b], "dim": d},
 *  {"builtin": "basis", "layout": ..., "index": k},
 *  {"tensor": [state, ...]}. */
inline PureState parse_pure(const Json& j, const std::string& path = "") {
  using namespace detail;
  if (j.contains("tensor")) {
    const auto& parts = field(j, "tensor", path);
    if (!parts.is_array() || parts.empty()) parse_fail(path + "/tensor", "expected states");
    PureState acc = parse_pure(parts[0], path + "/tensor/0");
    for (std::size_t i = 1; i < parts.size(); ++i)
      acc = tensor(acc, parse_pure(parts[i], path + "/tensor/" + std::to_string(i)));
    return acc;
  }
  if (j.contains("builtin")) {
    const auto kind = text(field(j, "builtin", path), path + "/builtin");
    if (kind == "maximally_entangled") {
      const auto& ls = field(j, "labels", path);
      if (!ls.is_array() || ls.size() != 2) parse_fail(path + "/labels", "expected two labels");
      return PureState::maximally_entangled(text(ls[0], path + "/labels/0"),
                                            text(ls[1], path + "/labels/1"),
                                            count(field(j, "dim", path), path + "/dim"));
    }
    if (kind == "basis")
      return PureState::basis(layout(field(j, "layout", path), path + "/layout"),
                              count(field(j, "index", path), path + "/index"));
    parse_fail(path + "/builtin", "unknown pure state '" + kind + "'");
  }
  auto l = layout(field(j, "layout", path), path + "/layout");
  return PureState(l, vector(field(j, "amplitudes", path), path + "/amplitudes"));
}

/** Density operator from {"layout", "matrix"}, {"layout", "diagonal"}, or a
 *  pure state description. */
inline DensityOperator parse_density(const Json& j, const std::string& path = "") {
  using namespace detail;
  if (j.contains("matrix"))
    return DensityOperator(layout(field(j, "layout", path), path + "/layout"),
                           matrix(field(j, "matrix", path), path + "/matrix"));
  if (j.contains("diagonal")) {
    auto l = layout(field(j, "layout", path), path + "/layout");
    const auto& d = field(j, "diagonal", path);
    if (!d.is_array()) parse_fail(path + "/diagonal", "expected an array");
    std::vector<double> p;
    for (std::size_t i = 0; i < d.size(); ++i)
      p.push_back(number(d[i], path + "/diagonal/" + std::to_string(i)));
    return DensityOperator::diagonal(l, p);
  }
  return parse_pure(j, path).density();
}

/** Channel from {"input", "output", "kraus"}, {"product": [a, b, ...]} or
 *  {"builtin": name, ...} with names identity, depolarizing, dephasing,
 *  amplitude_damping, classical, erasure. */
inline KrausChannel parse_channel(const Json& j, const std::string& path = "") {
  using namespace detail;
  if (j.contains("product")) {
    const auto& parts = field(j, "product", path);
    if (!parts.is_array() || parts.empty()) parse_fail(path + "/product", "expected channels");
    KrausChannel acc = parse_channel(parts[0], path + "/product/0");
    for (std::size_t i = 1; i < parts.size(); ++i)
      acc = product_channel(acc, parse_channel(parts[i], path + "/product/" + std::to_string(i)));
    return acc;
  }
  if (j.contains("builtin")) {
    const auto kind = text(field(j, "builtin", path), path + "/builtin");
    const auto in = get_or<std::string>(j, "in", path, "A", text);
    const auto out = get_or<std::string>(j, "out", path, "B", text);
    auto prob = [&](const char* key) { return number(field(j, key, path), path + "/" + key); };
    auto dim = [&] { return count(field(j, "dim", path), path + "/dim"); };
    if (kind == "identity") return channels::identity(dim(), in, out);
    if (kind == "depolarizing") return channels::depolarizing(dim(), prob("p"), in, out);
    if (kind == "dephasing") return channels::dephasing(dim(), prob("p"), in, out);
    if (kind == "amplitude_damping") return channels::amplitude_damping(prob("gamma"), in, out);
    if (kind == "erasure") return channels::erasure(prob("p"), in, out);
    if (kind == "classical") {
      const auto& w = field(j, "matrix", path);
      if (!w.is_array()) parse_fail(path + "/matrix", "expected rows");
      std::vector<std::vector<double>> rows;
      for (std::size_t y = 0; y < w.size(); ++y) {
        rows.emplace_back();
        if (!w[y].is_array()) parse_fail(path + "/matrix/" + std::to_string(y), "expected a row");
        for (std::size_t x = 0; x < w[y].size(); ++x)
          rows.back().push_back(
              number(w[y][x], path + "/matrix/" + std::to_string(y) + "/" + std::to_string(x)));
      }
      return channels::classical(rows, in, out);
    }
    parse_fail(path + "/builtin", "unknown channel '" + kind + "'");
  }
  const auto& ks = field(j, "kraus", path);
  if (!ks.is_array() || ks.empty()) parse_fail(path + "/kraus", "expected Kraus operators");
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < ks.size(); ++i)
    kraus.push_back(matrix(ks[i], path + "/kraus/" + std::to_string(i)));
  return KrausChannel(layout(field(j, "input", path), path + "/input"),
                      layout(field(j, "output", path), path + "/output"), std::move(kraus));
}

/** Message count from "messages" or "rate_bits" (2^rate must be integral). */
inline std::size_t parse_messages(const Json& j, const std::string& key_messages,
                                  const std::string& key_rate, const std::string& path,
                                  std::size_t fallback, double scale = 1.0) {
  using namespace detail;
  if (j.contains(key_messages)) return count(j[key_messages], path + "/" + key_messages);
  if (j.contains(key_rate)) {
    const double bits = number(j[key_rate], path + "/" + key_rate) * scale;
    const double m = std::exp2(bits);
    if (std::abs(m - std::round(m)) > 1e-9 || m < 1)
      parse_fail(path + "/" + key_rate, "2^rate must be a positive integer");
    return std::size_t(std::llround(m));
  }
  return fallback;
}

inline P2PConfig parse_p2p(const Json& j, std::size_t max_dim) {
  using namespace detail;
  P2PConfig c{parse_channel(field(j, "channel", ""), "/channel"), parse_pure(field(j, "psi", ""), "/psi")};
  c.messages = parse_messages(j, "messages", "rate_bits", "", 2);
  c.epsilon = get_or<double>(j, "epsilon", "", 0.0, number);
  c.delta = get_or<double>(j, "delta", "", 0.5, number);
  c.max_dim = max_dim;
  return c;
}

inline SubsetCodeConfig parse_iid(const Json& j, std::size_t max_dim, std::uint64_t seed) {
  using namespace detail;
  SubsetCodeConfig c{parse_channel(field(j, "channel", ""), "/channel"),
                     parse_pure(field(j, "psi", ""), "/psi")};
  c.n = get_or<std::size_t>(j, "n", "", 1, count);
  c.w = get_or<std::size_t>(j, "w", "", 4, count);
  c.messages = parse_messages(j, "messages", "rate_bits", "", 2, double(c.n));
  c.epsilon = get_or<double>(j, "epsilon", "", 0.05, number);
  c.samples = get_or<std::size_t>(j, "samples", "", 500, count);
  c.seed = seed;
  c.max_dim = max_dim;
  return c;
}

inline GelfandPinskerConfig parse_gp(const Json& j, std::size_t max_dim) {
  using namespace detail;
  GelfandPinskerConfig c{parse_channel(field(j, "channel", ""), "/channel"),
                         parse_pure(field(j, "psi", ""), "/psi")};
  if (j.contains("phi")) c.phi = parse_pure(j["phi"], "/phi");
  c.jammer = get_or<std::string>(j, "jammer", "", "S", text);
  c.purifier = get_or<std::string>(j, "purifier", "", "A'", text);
  c.jammer_purifier = get_or<std::string>(j, "jammer_purifier", "", "S'", text);
  c.messages = parse_messages(j, "messages", "rate_bits", "", 2);
  c.band = parse_messages(j, "band", "band_bits", "", 1);
  c.epsilon = get_or<double>(j, "epsilon", "", 0.0, number);
  c.delta = get_or<double>(j, "delta", "", 0.5, number);
  if (j.contains("imax_certificate"))
    c.imax_certificate = number(j["imax_certificate"], "/imax_certificate");
  c.max_dim = max_dim;
  return c;
}

inline BroadcastConfig parse_broadcast(const Json& j, std::size_t max_dim) {
  using namespace detail;
  BroadcastConfig c{parse_channel(field(j, "channel", ""), "/channel"),
                    parse_pure(field(j, "psi", ""), "/psi")};
  c.bob_output = get_or<std::string>(j, "bob_output", "", "B", text);
  c.charlie_output = get_or<std::string>(j, "charlie_output", "", "C", text);
  c.bob_share = get_or<std::string>(j, "bob_share", "", "A1", text);
  c.charlie_share = get_or<std::string>(j, "charlie_share", "", "A2", text);
  c.messages_bob = parse_messages(j, "messages_bob", "rate_bob_bits", "", 2);
  c.messages_charlie = parse_messages(j, "messages_charlie", "rate_charlie_bits", "", 2);
  c.band_bob = parse_messages(j, "band_bob", "band_bob_bits", "", 1);
  c.band_charlie = parse_messages(j, "band_charlie", "band_charlie_bits", "", 1);
  c.epsilon = get_or<double>(j, "epsilon", "", 0.0, number);
  c.delta = get_or<double>(j, "delta", "", 0.5, number);
  c.imax_certificate = get_or<double>(j, "imax_certificate", "", 0.0, number);
  c.enforce_region = get_or<bool>(j, "enforce_region", "", true, [](const Json& x, const std::string& p) {
    if (!x.is_boolean()) parse_fail(p, "expected a boolean");
    return x.get<bool>();
  });
  c.max_dim = max_dim;
  return c;
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Parse, path + ": " + e.what());
  }
}

}  // namespace oneshot::io
