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
#include <map>
#include <set>

#include "oneshot/channels/builtin.hpp"
#include "oneshot/protocols/broadcast.hpp"
#include "oneshot/protocols/gelfand_pinsker.hpp"
#include "oneshot/protocols/iid.hpp"
#include "oneshot/protocols/p2p.hpp"

using namespace oneshot;
using Catch::Matchers::WithinAbs;

namespace {

PureState phi(std::size_t d, const std::string& a = "A", const std::string& b = "A'") {
  return PureState::maximally_entangled(a, b, d);
}

}  // namespace

TEST_CASE("position decoder is a POVM", "[decoder]") {
  random::Rng rng(21);
  std::vector<Matrix> ls;
  for (int k = 0; k < 4; ++k) ls.push_back(random::effect(rng, 3));
  PositionDecoder dec(ls);
  Matrix sum = dec.abort_effect();
  for (std::size_t k = 0; k < dec.positions(); ++k) sum += dec.omega(k);
  CHECK((sum - Matrix::Identity(3, 3)).norm() < 1e-9);
  CHECK(hermitian_eigen(dec.abort_effect()).values.minCoeff() > -1e-9);
}

TEST_CASE("point-to-point rate bound and simulation", "[p2p]") {
  auto id4 = channels::identity(4, "A", "B");
  CHECK_THAT(p2p_rate_bound(id4, phi(4), 0.0, 0.5), WithinAbs(2.0, 1e-8));

  P2PConfig c{id4, phi(4), 2, 0.0, 0.5};
  auto r = simulate_p2p(c);
  CHECK_THAT(r.dh_bits, WithinAbs(4.0, 1e-8));
  CHECK(r.max_error < 0.5);
  CHECK(r.bound_applicable);
  CHECK(r.hypotheses_met);

  P2PConfig dep{channels::depolarizing(4, 1.0, "A", "B"), phi(4), 4, 0.0, 0.5};
  auto rd = simulate_p2p(dep);
  for (double e : rd.per_message_error) CHECK_THAT(e, WithinAbs(0.75, 1e-9));
  CHECK_FALSE(rd.bound_applicable);

  P2PConfig one{id4, phi(4), 1, 0.0, 0.5};
  CHECK(simulate_p2p(one).max_error == 0.0);
}

TEST_CASE("asymptotic rate pairs", "[p2p]") {
  auto r = asymptotic_rates(phi(2), channels::identity(2, "A", "B"));
  CHECK_THAT(r.rate_bits, WithinAbs(2.0, 1e-12));
  CHECK_THAT(r.ebit_rate, WithinAbs(1.0, 1e-12));
  auto z = asymptotic_rates(phi(2), channels::depolarizing(2, 1.0, "A", "B"));
  CHECK_THAT(z.rate_bits, WithinAbs(0.0, 1e-12));
  CHECK_THAT(z.ebit_rate, WithinAbs(1.0, 1e-12));
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  PureState cl(RegisterLayout{{"A", 2}, {"A'", 2}}, v);
  auto c = asymptotic_rates(cl, channels::dephasing(2, 1.0, "A", "B"));
  CHECK_THAT(c.rate_bits, WithinAbs(1.0, 1e-12));
  CHECK_THAT(c.ebit_rate, WithinAbs(1.0, 1e-12));
}

TEST_CASE("pairwise-independent subset family", "[iid]") {
  SECTION("w = 4 pair frequencies are uniform over 16 pairs") {
    PairwiseIndependentFamily fam(4, 1, 2);
    REQUIRE(fam.exact());
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> freq;
    for (std::uint64_t p = 0; p < fam.parameter_count(); ++p)
      ++freq[{fam.index(p, 0), fam.index(p, 1)}];
    CHECK(freq.size() == 16);
    for (const auto& [k, v] : freq) CHECK(v == fam.parameter_count() / 16);
  }
  for (auto [w, n] : std::vector<std::pair<std::size_t, std::size_t>>{{6, 1}, {7, 3}, {9, 2}}) {
    PairwiseIndependentFamily fam(w, n, 2);
    CHECK(fam.exact());
    CHECK(fam.pairwise_uniform());
  }
  PairwiseIndependentFamily fam(5, 2, 2);
  REQUIRE(fam.subset_count() == 10);
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t r = 0; r < 10; ++r) {
    auto s = fam.unrank(r);
    REQUIRE(s.size() == 2);
    CHECK(s[0] < s[1]);
    CHECK(s[1] < 5);
    seen.insert(s);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("iid subset coding", "[iid]") {
  SubsetCodeConfig c{channels::identity(4, "A", "B"), phi(4), 1, 4, 2, 0.05, 200, 3};
  auto r = simulate_iid_subset(c);
  CHECK(r.mean_error >= 0);
  CHECK(r.mean_error <= 1);
  CHECK(r.diagnostic("family_exact") == 1.0);
  auto again = simulate_iid_subset(c);
  CHECK(again.mean_error == r.mean_error);

  SubsetCodeConfig bad = c;
  bad.w = 2;
  try {
    simulate_iid_subset(bad);
    FAIL("expected BadParam");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadParam);
    CHECK(std::string(e.what()).find("w > 2n") != std::string::npos);
  }
}

TEST_CASE("Gelfand-Pinsker reduces to point-to-point", "[gp]") {
  auto trivial = PureState::basis(RegisterLayout{{"S", 1}}, 0);
  GelfandPinskerConfig g{
      product_channel(channels::identity(4, "A", "B"), channels::identity(1, "S", "X")),
      tensor(phi(4), trivial)};
  g.messages = 2;
  auto rg = simulate_gelfand_pinsker(g);
  P2PConfig c{channels::identity(4, "A", "B"), phi(4), 2, 0.0, 0.5};
  auto rp = simulate_p2p(c);
  REQUIRE(rg.per_message_error.size() == rp.per_message_error.size());
  for (std::size_t i = 0; i < rp.per_message_error.size(); ++i)
    CHECK_THAT(rg.per_message_error[i], WithinAbs(rp.per_message_error[i], 1e-9));
  CHECK_THAT(rg.theory_bound, WithinAbs(std::pow(4 * 0.5, 2), 1e-12));
}

TEST_CASE("Gelfand-Pinsker rejects inconsistent jammer states", "[gp]") {
  PureState s0 = PureState::basis(RegisterLayout{{"S", 2}}, 0);
  GelfandPinskerConfig g{
      product_channel(channels::identity(2, "A", "B"), channels::identity(2, "S", "X")),
      tensor(phi(2), s0)};
  g.phi = PureState::maximally_entangled("S", "S'", 2);
  try {
    simulate_gelfand_pinsker(g);
    FAIL("expected MarginalMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MarginalMismatch);
  }
}

TEST_CASE("broadcast factorizes over product instances", "[broadcast]") {
  auto psi = tensor(phi(2, "F1", "A1"), phi(2, "F2", "A2"));
  BroadcastConfig b{product_channel(channels::identity(2, "F1", "B"),
                                    channels::depolarizing(2, 0.2, "F2", "C")),
                    psi};
  b.enforce_region = false;
  b.messages_charlie = 1;
  auto r = simulate_broadcast(b);
  CHECK(r.diagnostic("max_charlie_error") == 0.0);
  P2PConfig pb{channels::identity(2, "F1", "B"), phi(2, "F1", "A'"), 2, 0.0, 0.5};
  CHECK_THAT(r.diagnostic("max_bob_error"), WithinAbs(simulate_p2p(pb).max_error, 1e-9));

  b.enforce_region = true;
  b.messages_charlie = 2;
  try {
    simulate_broadcast(b);
    FAIL("expected RegionViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RegionViolation);
  }
}

TEST_CASE("broadcast region slacks", "[broadcast]") {
  auto rc = broadcast_region(1, 1, 2, 2, 20, 20, 0, 0.5);
  CHECK(rc.holds());
  auto bad = broadcast_region(1, 1, 0, 0, 20, 20, 0, 0.5);
  CHECK_FALSE(bad.holds());
  CHECK(bad.slack[bad.binding] < 0);
}
