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
#include <cstddef>
#include <string>
#include <vector>

#include "oneshot/core/error.hpp"
#include "oneshot/core/tolerances.hpp"

namespace oneshot {

struct Register {
  std::string label;
  std::size_t dim = 1;

  bool operator==(const Register&) const = default;
};

/** Ordered list of labelled tensor factors. The first register is the most
 *  significant index of the flattened basis. */
class RegisterLayout {
 public:
  RegisterLayout() = default;

  explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    for (std::size_t i = 0; i < regs_.size(); ++i) {
      require(!regs_[i].label.empty(), ErrorKind::BadParam, "empty label");
      require(regs_[i].dim >= 1, ErrorKind::BadParam,
              "register '" + regs_[i].label + "' has dimension 0");
      for (std::size_t j = 0; j < i; ++j)
        require(regs_[j].label != regs_[i].label, ErrorKind::LabelCollision,
                "duplicate label '" + regs_[i].label + "'");
    }
  }

  RegisterLayout(std::initializer_list<Register> regs)
      : RegisterLayout(std::vector<Register>(regs)) {}

  std::size_t size() const { return regs_.size(); }
  bool empty() const { return regs_.empty(); }
  const Register& operator[](std::size_t i) const { return regs_[i]; }
  const std::vector<Register>& registers() const { return regs_; }

  std::size_t total_dim() const {
    std::size_t d = 1;
    for (const auto& r : regs_) d *= r.dim;
    return d;
  }

  bool contains(const std::string& label) const {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register& r) { return r.label == label; });
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
      if (regs_[i].label == label) return i;
    fail(ErrorKind::UnknownLabel, "no register labelled '" + label + "'");
  }

  std::size_t dim_of(const std::string& label) const {
    return regs_[index_of(label)].dim;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& r : regs_) out.push_back(r.label);
    return out;
  }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> out;
    for (const auto& r : regs_) out.push_back(r.dim);
    return out;
  }

  /** Registers named in `labels`, in that order. */
  RegisterLayout select(const std::vector<std::string>& labels) const {
    std::vector<Register> out;
    for (const auto& l : labels) out.push_back(regs_[index_of(l)]);
    return RegisterLayout(std::move(out));
  }

  /** Registers not named in `labels`, in layout order. */
  RegisterLayout complement(const std::vector<std::string>& labels) const {
    for (const auto& l : labels) (void)index_of(l);
    std::vector<Register> out;
    for (const auto& r : regs_)
      if (std::find(labels.begin(), labels.end(), r.label) == labels.end())
        out.push_back(r);
    return RegisterLayout(std::move(out));
  }

  RegisterLayout concat(const RegisterLayout& other) const {
    std::vector<Register> out = regs_;
    out.insert(out.end(), other.regs_.begin(), other.regs_.end());
    return RegisterLayout(std::move(out));
  }

  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Register> regs_;
};

/** Label of the j-th copy of a register, e.g. indexed("A'", 3) == "A'_3". */
inline std::string indexed(const std::string& label, std::size_t j) {
  return label + "_" + std::to_string(j);
}

inline void check_dim_guard(std::size_t dim, std::size_t max_dim,
                            const std::string& what) {
  require(dim <= max_dim, ErrorKind::DimGuard,
          what + " needs dimension " + std::to_string(dim) +
              " which exceeds the guard " + std::to_string(max_dim));
}

}  // namespace oneshot
