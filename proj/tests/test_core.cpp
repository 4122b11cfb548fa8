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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "oneshot/channels/builtin.hpp"
#include "oneshot/core/metrics.hpp"
#include "oneshot/core/random.hpp"
#include "oneshot/core/state.hpp"

using namespace oneshot;
using Catch::Matchers::WithinAbs;

namespace {

DensityOperator qubit(const std::string& label, double p0) {
  return DensityOperator::diagonal(RegisterLayout{{label, 2}}, {p0, 1 - p0});
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("layout rejects duplicate labels and unknown lookups", "[layout]") {
  CHECK(kind_of([] { RegisterLayout l{{"A", 2}, {"A", 3}}; }) == ErrorKind::LabelCollision);
  RegisterLayout l{{"A", 2}, {"B", 3}};
  CHECK(l.total_dim() == 6);
  CHECK(l.dim_of("B") == 3);
  CHECK(kind_of([&] { (void)l.dim_of("C"); }) == ErrorKind::UnknownLabel);
  CHECK(l.complement({"A"}).labels() == std::vector<std::string>{"B"});
}

TEST_CASE("density operators are validated", "[state]") {
  RegisterLayout l{{"A", 2}};
  Matrix m = Matrix::Identity(2, 2);
  CHECK(kind_of([&] { DensityOperator(l, m); }) == ErrorKind::NotNormalized);
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 0) = 0.5;
  nh(1, 1) = 0.5;
  nh(0, 1) = 0.3;
  CHECK(kind_of([&] { DensityOperator(l, nh); }) == ErrorKind::NotHermitian);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK(kind_of([&] { DensityOperator(l, neg); }) == ErrorKind::NotPSD);
  CHECK(kind_of([&] { DensityOperator(RegisterLayout{{"A", 3}}, Matrix::Identity(2, 2) / 2); }) ==
        ErrorKind::ShapeMismatch);
}

TEST_CASE("tensor products", "[state]") {
  auto mm = tensor(qubit("A", 0.5), qubit("B", 0.5));
  CHECK((mm.matrix() - Matrix::Identity(4, 4) / 4).norm() < 1e-12);

  auto t = tensor(qubit("A", 0.9), qubit("B", 0.5));
  const double want[] = {0.45, 0.45, 0.05, 0.05};
  for (int i = 0; i < 4; ++i) CHECK_THAT(t.matrix()(i, i).real(), WithinAbs(want[i], 1e-15));

  auto scalar = DensityOperator::diagonal(RegisterLayout{{"S", 1}}, {1.0});
  auto r = tensor(qubit("A", 0.7), scalar);
  CHECK((r.matrix() - qubit("A", 0.7).matrix()).norm() < 1e-15);
  CHECK(kind_of([] { tensor(qubit("A", 0.5), qubit("A", 0.5)); }) == ErrorKind::LabelCollision);
}

TEST_CASE("partial traces", "[state]") {
  auto bell = PureState::maximally_entangled("A", "B", 2).density();
  auto a = partial_trace_keep(bell, {"A"});
  CHECK((a.matrix() - Matrix::Identity(2, 2) / 2).norm() < 1e-15);
  auto same = partial_trace(bell, {});
  CHECK((same.matrix() - bell.matrix()).norm() < 1e-15);
  auto prod = tensor(qubit("A", 0.8), qubit("B", 0.3));
  CHECK((partial_trace(prod, {"A"}).matrix() - qubit("B", 0.3).matrix()).norm() < 1e-15);

  random::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto x = random::state(rng, RegisterLayout{{"A", 2}});
    auto y = random::state(rng, RegisterLayout{{"B", 3}});
    auto z = random::state(rng, RegisterLayout{{"C", 2}});
    auto xyz = tensor(tensor(x, y), z);
    CHECK((partial_trace_keep(xyz, {"C", "A"}).matrix() - tensor(z, x).matrix()).norm() < 1e-12);
  }
}

TEST_CASE("purification and Schmidt decomposition", "[state]") {
  auto p = purify(qubit("A", 0.9), "R");
  auto sd = schmidt(p, {"A"});
  CHECK_THAT(sd.coefficients(0), WithinAbs(std::sqrt(0.9), 1e-12));
  CHECK_THAT(sd.coefficients(1), WithinAbs(std::sqrt(0.1), 1e-12));

  auto pure = purify(qubit("A", 1.0), "R");
  CHECK_THAT(std::abs(pure.amplitudes()(0)), WithinAbs(1.0, 1e-12));

  auto mixed = purify(qubit("A", 0.5), "R");
  CHECK((reduced(mixed, {"R"}).matrix() - Matrix::Identity(2, 2) / 2).norm() < 1e-12);

  auto bell = schmidt(PureState::maximally_entangled("A", "B", 2), {"A"});
  CHECK_THAT(bell.coefficients(0), WithinAbs(1 / std::sqrt(2.0), 1e-12));
  CHECK_THAT(bell.coefficients(1), WithinAbs(1 / std::sqrt(2.0), 1e-12));

  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(0.9);
  v(3) = std::sqrt(0.1);
  auto s = schmidt(PureState(RegisterLayout{{"A", 2}, {"B", 2}}, v), {"A"});
  CHECK_THAT(s.coefficients(1), WithinAbs(std::sqrt(0.1), 1e-12));
}

TEST_CASE("fidelity, purified distance and entropy", "[metrics]") {
  auto zero = qubit("A", 1.0), one = qubit("A", 0.0), half = qubit("A", 0.5);
  CHECK_THAT(fidelity(half, half), WithinAbs(1.0, 1e-12));
  CHECK_THAT(purified_distance(half, half), WithinAbs(0.0, 1e-6));
  CHECK_THAT(fidelity(zero, one), WithinAbs(0.0, 1e-12));
  CHECK_THAT(purified_distance(zero, one), WithinAbs(1.0, 1e-12));
  CHECK_THAT(fidelity(zero, half), WithinAbs(1 / std::sqrt(2.0), 1e-12));

  CHECK_THAT(entropy(zero), WithinAbs(0.0, 1e-12));
  CHECK_THAT(entropy(DensityOperator::maximally_mixed(RegisterLayout{{"A", 5}})),
             WithinAbs(std::log2(5.0), 1e-12));
  auto bell = PureState::maximally_entangled("A", "B", 2).density();
  CHECK_THAT(mutual_information(bell, {"A"}), WithinAbs(2.0, 1e-12));
}

TEST_CASE("positive part", "[linalg]") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.3;
  m(1, 1) = -0.2;
  auto pp = positive_part(m);
  CHECK_THAT(pp.projector(0, 0).real(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(pp.projector(1, 1).real(), WithinAbs(0.0, 1e-12));
  CHECK_THAT(pp.clipped(0, 0).real(), WithinAbs(0.3, 1e-12));
  CHECK(positive_part(-Matrix::Identity(3, 3)).projector.norm() < 1e-12);
  random::Rng rng(3);
  Matrix psd = random::density_matrix(rng, 3);
  CHECK((positive_part(psd).clipped - psd).norm() < 1e-12);
}

TEST_CASE("built-in channels act as expected", "[channels]") {
  random::Rng rng(11);
  auto rho = random::state(rng, RegisterLayout{{"A", 2}});
  auto id = channels::identity(2, "A", "A");
  CHECK((apply_channel(id, rho, {"A"}).matrix() - rho.matrix()).norm() < 1e-12);
  auto dep = channels::depolarizing(2, 1.0, "A", "A");
  CHECK((apply_channel(dep, rho, {"A"}).matrix() - Matrix::Identity(2, 2) / 2).norm() < 1e-12);
  auto dep0 = channels::depolarizing(2, 0.0, "A", "A");
  CHECK((apply_channel(dep0, rho, {"A"}).matrix() - rho.matrix()).norm() < 1e-12);
  auto ad = channels::amplitude_damping(1.0, "A", "A");
  CHECK_THAT(apply_channel(ad, rho, {"A"}).matrix()(0, 0).real(), WithinAbs(1.0, 1e-12));

  auto bell = PureState::maximally_entangled("A", "B", 2).density();
  auto deph = apply_channel(channels::dephasing(2, 1.0, "A", "A"), bell, {"A"});
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  CHECK((deph.reordered({"A", "B"}).matrix() - want).norm() < 1e-12);

  auto cl = channels::classical({{0.9, 0.2}, {0.1, 0.8}}, "X", "Y");
  auto out = apply_channel(cl, qubit("X", 1.0), {"X"});
  CHECK_THAT(out.matrix()(0, 0).real(), WithinAbs(0.9, 1e-12));
  CHECK_THAT(out.matrix()(1, 1).real(), WithinAbs(0.1, 1e-12));

  CHECK(kind_of([] { channels::depolarizing(2, 1.5); }) == ErrorKind::BadParam);
}

TEST_CASE("Kraus validation and Choi round trip", "[channels]") {
  Matrix k = Matrix::Identity(2, 2) * 0.5;
  CHECK(kind_of([&] { KrausChannel(RegisterLayout{{"A", 2}}, RegisterLayout{{"B", 2}}, {k}); }) ==
        ErrorKind::NotCPTP);

  auto choi = choi_from_kraus(channels::identity(2, "A", "B"));
  auto phi = PureState::maximally_entangled("A", "B", 2).density();
  CHECK((choi.matrix - 2 * phi.matrix()).norm() < 1e-12);

  auto cl = choi_from_kraus(channels::classical({{0.7, 0.4}, {0.3, 0.6}}, "X", "Y"));
  CHECK(is_diagonal(cl.matrix));

  random::Rng rng(5);
  auto ch = channels::amplitude_damping(0.3, "A", "B");
  auto back = kraus_from_choi(choi_from_kraus(ch));
  for (int i = 0; i < 10; ++i) {
    auto rho = random::state(rng, RegisterLayout{{"A", 2}});
    CHECK((apply_channel(ch, rho, {"A"}).matrix() - apply_channel(back, rho, {"A"}).matrix())
              .norm() < 1e-10);
  }
}

TEST_CASE("dimension guard", "[state]") {
  auto q = qubit("A", 0.5);
  CHECK(kind_of([&] { tensor_power(q, 10, 512); }) == ErrorKind::DimGuard);
  CHECK(tensor_power(q, 9, 512).dim() == 512);
}
