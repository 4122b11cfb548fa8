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

#include <cstddef>
#include <cstdlib>
#include <limits>
#include <string>

namespace oneshot {

namespace tol {
inline constexpr double herm = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double trace = 1e-9;
/** Eigenvalues below support_cutoff * (largest eigenvalue) count as zero. */
inline constexpr double support_cutoff = 1e-10;
/** Relative width of the boundary cluster in spectral tests. */
inline constexpr double cluster = 1e-10;
}  // namespace tol

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline constexpr std::size_t kDefaultMaxDim = 4096;

/** Default dimension guard; ONESHOT_MAX_DIM overrides the built-in 4096. */
inline std::size_t default_max_dim() {
  if (const char* env = std::getenv("ONESHOT_MAX_DIM")) {
    try {
      long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return kDefaultMaxDim;
}

}  // namespace oneshot
