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

#include "oneshot/core/random.hpp"
#include "oneshot/divergences/info_spectrum.hpp"
#include "oneshot/divergences/second_order.hpp"
#include "oneshot/divergences/smoothing.hpp"
#include "oneshot/divergences/typical.hpp"

using namespace oneshot;
using Catch::Matchers::WithinAbs;

namespace {

DensityOperator diag2(double a, double b) {
  return DensityOperator::diagonal(RegisterLayout{{"A", 2}}, {a, b});
}

DensityOperator bell() { return PureState::maximally_entangled("A", "B", 2).density(); }

}  // namespace

TEST_CASE("relative entropy and variance", "[divergence]") {
  auto r = diag2(0.5, 0.5), s = diag2(0.9, 0.1);
  CHECK_THAT(relative_entropy(r, r), WithinAbs(0.0, 1e-12));
  CHECK_THAT(relative_entropy_variance(r, r), WithinAbs(0.0, 1e-12));
  CHECK_THAT(relative_entropy(r, s), WithinAbs(std::log2(5.0 / 3.0), 1e-12));
  // V = sum p (log2 p/q)^2 - D^2
  const double l0 = std::log2(0.5 / 0.9), l1 = std::log2(0.5 / 0.1);
  const double v = 0.5 * l0 * l0 + 0.5 * l1 * l1 - std::pow(std::log2(5.0 / 3.0), 2);
  CHECK_THAT(relative_entropy_variance(r, s), WithinAbs(v, 1e-12));
  CHECK_THAT(v, WithinAbs(2.51211, 1e-5));

  try {
    relative_entropy(r, diag2(1.0, 0.0));
    FAIL("expected a support violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportViolation);
  }
}

TEST_CASE("max-relative entropy", "[divergence]") {
  auto b = bell();
  CHECK_THAT(d_max(b, b), WithinAbs(0.0, 1e-9));
  CHECK_THAT(d_max(b, DensityOperator::maximally_mixed(b.layout())), WithinAbs(2.0, 1e-9));
  CHECK_THAT(d_max(diag2(0.9, 0.1), diag2(0.5, 0.5)), WithinAbs(std::log2(1.8), 1e-12));
  try {
    d_max(diag2(0.5, 0.5), diag2(1.0, 0.0));
    FAIL("expected a support violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportViolation);
  }
}

TEST_CASE("hypothesis testing divergence", "[divergence]") {
  SECTION("closed forms") {
    random::Rng rng(1);
    for (double eps : {0.1, 0.4, 0.9}) {
      Matrix rho = random::density_matrix(rng, 4);
      auto r = hypothesis_testing_divergence(rho, rho, 1 - eps * eps);
      CHECK_THAT(r.value_bits, WithinAbs(std::log2(1 / (1 - eps * eps)), 1e-9));
    }
    auto r = hypothesis_testing_divergence(diag2(0.5, 0.5), diag2(0.9, 0.1), 0.5);
    CHECK_THAT(r.beta, WithinAbs(0.1, 1e-12));
    CHECK_THAT(r.value_bits, WithinAbs(std::log2(10.0), 1e-9));

    auto b = bell();
    auto z = hypothesis_testing_divergence(b, DensityOperator::maximally_mixed(b.layout()), 1.0);
    CHECK_THAT(z.beta, WithinAbs(0.25, 1e-12));
    CHECK_THAT(z.value_bits, WithinAbs(2.0, 1e-9));
  }
  SECTION("weight outside the support of sigma gives infinity") {
    random::Rng rng(9);
    Matrix u = random::unitary(rng, 3);
    Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
    a(0, 0) = 0.6;
    a(1, 1) = 0.4;
    b(1, 1) = 0.3;
    b(2, 2) = 0.7;
    Matrix rho = u * a * u.adjoint(), sigma = u * b * u.adjoint();
    auto r = hypothesis_testing_divergence(rho, sigma, 0.5);
    CHECK(r.beta == 0.0);
    CHECK(std::isinf(r.value_bits));
    CHECK(std::isfinite(hypothesis_testing_divergence(rho, sigma, 0.7).value_bits));
  }
  SECTION("primal feasibility and duality") {
    random::Rng rng(2);
    for (int i = 0; i < 50; ++i) {
      const auto d = Eigen::Index(2 + i % 4);
      Matrix rho = random::density_matrix(rng, d), sigma = random::density_matrix(rng, d);
      const double a = 0.1 + 0.8 * (i % 9) / 8.0;
      auto r = hypothesis_testing_divergence(rho, sigma, a);
      REQUIRE(r.test);
      const Matrix& t = *r.test;
      auto e = hermitian_eigen(t);
      CHECK(e.values.minCoeff() > -1e-9);
      CHECK(e.values.maxCoeff() < 1 + 1e-9);
      CHECK(trace_product(t, rho).real() >= a - 1e-9);
      CHECK_THAT(trace_product(t, sigma).real(), WithinAbs(r.beta, 1e-9));
      CHECK(r.gap <= 1e-7);
    }
  }
  SECTION("classical form agrees with the matrix form") {
    random::Rng rng(3);
    for (int i = 0; i < 30; ++i) {
      auto p = random::probability_vector(rng, 5), q = random::probability_vector(rng, 5);
      Matrix rho = Matrix::Zero(5, 5), sigma = Matrix::Zero(5, 5);
      for (int k = 0; k < 5; ++k) {
        rho(k, k) = p[std::size_t(k)];
        sigma(k, k) = q[std::size_t(k)];
      }
      CHECK_THAT(hypothesis_testing_divergence_classical(p, q, 0.7).value_bits,
                 WithinAbs(hypothesis_testing_divergence(rho, sigma, 0.7).value_bits, 1e-9));
    }
  }
  SECTION("bad threshold") {
    auto r = diag2(0.5, 0.5);
    CHECK_THROWS_AS(hypothesis_testing_divergence(r, r, 0.0), Error);
    CHECK_THROWS_AS(hypothesis_testing_divergence(r, r, 1.2), Error);
  }
}

TEST_CASE("information spectrum", "[divergence]") {
  auto r = diag2(0.5, 0.5), s = diag2(0.9, 0.1);
  auto same = info_spectrum(r, r, 0.1, SpectrumVariant::Standard);
  CHECK(std::abs(same.value_bits) <= 1e-3);
  random::Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    Matrix a = random::density_matrix(rng, 3), b = random::density_matrix(rng, 3);
    auto v = info_spectrum(a, b, 0.3, SpectrumVariant::Standard);
    CHECK(v.value_bits <= d_max(a, b) + 1e-9);
  }
  // With eps = 0.6 the condition keeps only the outcome with ratio 5.
  auto v = info_spectrum(r, s, 0.6, SpectrumVariant::Standard);
  CHECK_THAT(v.value_bits, WithinAbs(std::log2(5.0), 2e-3));
}

TEST_CASE("max-information", "[divergence]") {
  auto prod = DensityOperator::diagonal(RegisterLayout{{"A", 2}, {"B", 2}}, {0.12, 0.28, 0.18, 0.42});
  CHECK_THAT(i_max(prod, {"A"}), WithinAbs(0.0, 1e-9));
  CHECK_THAT(i_max(bell(), {"A"}), WithinAbs(2.0, 1e-9));
  auto cc = DensityOperator::diagonal(RegisterLayout{{"A", 2}, {"B", 2}}, {0.5, 0, 0, 0.5});
  CHECK_THAT(i_max(cc, {"A"}), WithinAbs(1.0, 1e-9));
}

TEST_CASE("smoothing certificate", "[divergence]") {
  auto prod = tensor(diag2(0.7, 0.3),
                     DensityOperator::diagonal(RegisterLayout{{"B", 2}}, {0.4, 0.6}));
  auto c0 = smooth_dmax_upper(prod, {"A"}, partial_trace_keep(prod, {"A"}), 0.3);
  CHECK(c0.distance <= 1e-6);
  CHECK(c0.certified_dmax_bits <= std::log2(3 / 0.09) + 1e-9);

  auto b = bell();
  auto half = DensityOperator::maximally_mixed(RegisterLayout{{"A", 2}});
  auto c = smooth_dmax_upper(b, {"A"}, half, 0.3);
  CHECK(c.certified_dmax_bits <= 2 + std::log2(3 / 0.09) + 1e-9);
  CHECK(c.distance <= 0.6 + 1e-9);
  CHECK(c.achieved_dmax_bits <= c.certified_dmax_bits + 1e-9);
  CHECK(c.holds());
}

TEST_CASE("typical projection and restricted pipeline", "[divergence]") {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;
  auto t = typical_projection(rho, 6, 0.5, TypicalWindow::Exponent);
  CHECK(t.capture > 0);
  CHECK(t.capture <= 1 + 1e-12);
  CHECK((t.projector * t.projector - t.projector).norm() < 1e-9);

  auto cc = DensityOperator::diagonal(RegisterLayout{{"A", 2}, {"B", 2}}, {0.45, 0.05, 0.05, 0.45});
  auto r = restricted_smooth_pipeline(cc, {"A"}, 2, 0.1);
  CHECK(r.distance_ok);
  CHECK(r.inflation_ok);
  CHECK(r.dmax_finite);
  CHECK_THROWS_AS(restricted_smooth_pipeline(cc, {"A"}, 2, 0.6), Error);
}

TEST_CASE("second-order expansion", "[divergence]") {
  CHECK_THAT(inverse_gaussian_cdf(0.5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(inverse_gaussian_cdf(0.841344746068543), WithinAbs(1.0, 1e-9));
  for (double p : {1e-10, 1e-4, 0.02, 0.3, 0.97, 1 - 1e-8})
    CHECK_THAT(gaussian_cdf(inverse_gaussian_cdf(p)), WithinAbs(p, 1e-12 * std::max(p, 1e-3)));
  auto r = diag2(0.8, 0.2), s = diag2(0.4, 0.6);
  CHECK_THAT(second_order_estimate(r, s, 1, 0.5).value_bits, WithinAbs(relative_entropy(r, s), 1e-12));
}
