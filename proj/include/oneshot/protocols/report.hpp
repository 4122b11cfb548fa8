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
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace oneshot {

struct Resources {
  double ebit_copies = 0;  // pre-shared copies of the resource state
  double shared_randomness_bits = 0;
  std::size_t channel_uses = 1;
};

/** Exact outcome of simulating a protocol. */
struct ProtocolReport {
  std::string protocol;
  std::vector<double> per_message_error;
  double max_error = 0;
  double mean_error = 0;
  double theory_bound = 0;
  double relaxed_bound = std::numeric_limits<double>::quiet_NaN();
  bool bound_applicable = false;  // theory_bound < 1
  bool hypotheses_met = false;    // rate conditions behind the bound hold
  double achieved_rate_bits = 0;
  double dh_bits = 0;
  Resources resources;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::pair<std::string, std::vector<double>>> series;

  void summarize() {
    max_error = 0;
    mean_error = 0;
    for (double e : per_message_error) {
      max_error = std::max(max_error, e);
      mean_error += e;
    }
    if (!per_message_error.empty()) mean_error /= double(per_message_error.size());
    bound_applicable = theory_bound < 1;
  }

  double diagnostic(const std::string& key) const {
    for (const auto& [k, v] : diagnostics)
      if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace oneshot
