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

#include "oneshot/convex_split/convex_split.hpp"
#include "oneshot/convex_split/uhlmann.hpp"
#include "oneshot/core/random.hpp"

using namespace oneshot;
using Catch::Matchers::WithinAbs;

namespace {

DensityOperator half(const std::string& label) {
  return DensityOperator::maximally_mixed(RegisterLayout{{label, 2}});
}

ConvexSplitOptions with(ConvexSplitMethod m) {
  ConvexSplitOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST_CASE("convex split of a product state is exact", "[convex_split]") {
  auto rho = DensityOperator::diagonal(RegisterLayout{{"P", 2}, {"Q", 2}}, {0.35, 0.35, 0.15, 0.15});
  for (std::size_t n : {1u, 3u, 6u}) {
    auto s = build_convex_split(rho, {"Q"}, half("Q"), n, with(ConvexSplitMethod::Dense));
    CHECK_THAT(s.k_bits, WithinAbs(0.0, 1e-9));
    CHECK(s.exact_distance <= 1e-6);
  }
}

TEST_CASE("convex split bound on small instances", "[convex_split]") {
  auto cc = DensityOperator::diagonal(RegisterLayout{{"P", 2}, {"Q", 2}}, {0.5, 0, 0, 0.5});
  auto c = build_convex_split(cc, {"Q"}, half("Q"), 8, with(ConvexSplitMethod::Dense));
  CHECK_THAT(c.k_bits, WithinAbs(1.0, 1e-9));
  CHECK(c.exact_distance <= 0.5);

  auto bell = PureState::maximally_entangled("P", "Q", 2).density();
  auto b = build_convex_split(bell, {"Q"}, half("Q"), 8, with(ConvexSplitMethod::Dense));
  CHECK_THAT(b.k_bits, WithinAbs(2.0, 1e-9));
  CHECK(b.exact_distance <= std::sqrt(0.5));
  REQUIRE(b.state);
  CHECK(b.state->dim() == 512);
}

TEST_CASE("evaluation routes agree", "[convex_split]") {
  random::Rng rng(9);
  for (int i = 0; i < 5; ++i) {
    auto rho = random::state(rng, RegisterLayout{{"P", 2}, {"Q", 2}});
    auto sigma = random::state(rng, RegisterLayout{{"Q", 2}});
    for (std::size_t n : {2u, 4u}) {
      auto d = build_convex_split(rho, {"Q"}, sigma, n, with(ConvexSplitMethod::Dense));
      auto s = build_convex_split(rho, {"Q"}, sigma, n, with(ConvexSplitMethod::Symmetric));
      CHECK_THAT(d.exact_distance, WithinAbs(s.exact_distance, 1e-9));
      CHECK(d.holds());
    }
  }
  auto cc = DensityOperator::diagonal(RegisterLayout{{"P", 2}, {"Q", 2}}, {0.4, 0.1, 0.2, 0.3});
  auto sq = DensityOperator::diagonal(RegisterLayout{{"Q", 2}}, {0.6, 0.4});
  for (std::size_t n : {1u, 5u}) {
    auto d = build_convex_split(cc, {"Q"}, sq, n, with(ConvexSplitMethod::Dense));
    auto c = build_convex_split(cc, {"Q"}, sq, n, with(ConvexSplitMethod::Classical));
    CHECK_THAT(d.exact_distance, WithinAbs(c.exact_distance, 1e-9));
  }
}

TEST_CASE("bipartite convex split", "[convex_split]") {
  auto prod = DensityOperator::diagonal(RegisterLayout{{"P", 2}, {"Q", 2}}, {0.28, 0.12, 0.42, 0.18});
  auto p = build_bipartite_convex_split(prod, {"Q"}, 2, 2);
  CHECK(p.exact_distance <= 1e-6);

  auto cc = DensityOperator::diagonal(RegisterLayout{{"P", 2}, {"Q", 2}}, {0.5, 0, 0, 0.5});
  auto c = build_bipartite_convex_split(cc, {"Q"}, 4, 4);
  CHECK_THAT(c.k_bits, WithinAbs(1.0, 1e-9));
  CHECK(c.exact_distance <= std::sqrt(2.0 / 16) + 1e-8);

  auto bell = PureState::maximally_entangled("P", "Q", 2).density();
  auto b = build_bipartite_convex_split(bell, {"Q"}, 2, 2);
  CHECK(b.bound_applicable);
  CHECK(b.exact_distance <= 1.0);
}

TEST_CASE("Uhlmann isometry", "[uhlmann]") {
  random::Rng rng(12);
  auto psi = random::pure_state(rng, RegisterLayout{{"A", 2}, {"R", 2}});
  SECTION("identical states") {
    auto u = uhlmann_isometry(psi, psi, {"A"});
    CHECK_THAT(u.overlap, WithinAbs(1.0, 1e-12));
    Matrix id = Matrix::Identity(2, 2);
    const cplx phase = u.isometry(0, 0);
    CHECK((u.isometry - phase * id).norm() < 1e-9);
  }
  SECTION("rotated purifier") {
    Matrix w = random::unitary(rng, 2);
    Vector v = psi.amplitudes();
    Vector rotated = Vector::Zero(4);
    for (int a = 0; a < 2; ++a)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) rotated(a * 2 + r) += w(r, s) * v(a * 2 + s);
    auto u = uhlmann_isometry(psi, PureState(psi.layout(), rotated), {"A"});
    CHECK_THAT(u.overlap, WithinAbs(1.0, 1e-12));
    CHECK((u.isometry.adjoint() * u.isometry - Matrix::Identity(2, 2)).norm() < 1e-9);
  }
  SECTION("marginals |0> and I/2") {
    auto target = PureState::basis(RegisterLayout{{"A", 2}, {"R", 2}}, 0);
    auto source = PureState::maximally_entangled("A", "R", 2);
    auto u = uhlmann_isometry(target, source, {"A"});
    CHECK_THAT(u.overlap, WithinAbs(1 / std::sqrt(2.0), 1e-12));
  }
}

TEST_CASE("convex-split purification reproduces tau", "[uhlmann]") {
  auto psi = PureState::maximally_entangled("P", "Q", 2);
  auto sigma = PureState::maximally_entangled("Q", "Q''", 2);
  auto pur = convex_split_purification(psi, "Q", sigma, "Q''", {1, 2, 3});
  std::vector<std::string> keep{"P"};
  for (int j = 1; j <= 3; ++j) keep.push_back(indexed("Q", std::size_t(j)));
  auto tau = reduced(pur, keep);
  auto rho = psi.density();
  auto direct = build_convex_split(rho, {"Q"}, half("Q"), 3, with(ConvexSplitMethod::Dense));
  REQUIRE(direct.state);
  CHECK((tau.reordered(direct.state->layout().labels()).matrix() - direct.state->matrix()).norm() <
        1e-10);
}
