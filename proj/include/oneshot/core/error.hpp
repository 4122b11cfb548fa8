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

#include <stdexcept>
#include <string>

namespace oneshot {

enum class ErrorKind {
  LabelCollision,
  UnknownLabel,
  NotNormalized,
  ShapeMismatch,
  BadPartition,
  NotHermitian,
  NotPSD,
  NotCPTP,
  BadParam,
  DimGuard,
  SupportViolation,
  NoConverge,
  TypicalityFail,
  MarginalMismatch,
  RegionViolation,
  Parse
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::LabelCollision: return "LabelCollision";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotCPTP: return "NotCPTP";
    case ErrorKind::BadParam: return "BadParam";
    case ErrorKind::DimGuard: return "DimGuard";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::NoConverge: return "NoConverge";
    case ErrorKind::TypicalityFail: return "TypicalityFail";
    case ErrorKind::MarginalMismatch: return "MarginalMismatch";
    case ErrorKind::RegionViolation: return "RegionViolation";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/** Every failure raised by the library carries one of the kinds above. */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace oneshot
