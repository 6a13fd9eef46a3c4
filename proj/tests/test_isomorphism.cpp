#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "ffsym/evaluate.hpp"
#include "ffsym/rewrite.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace ffsym;
using testutil::NetBuilder;

namespace {

void expect_witness_valid(const Network& a, const Network& b, const SignWitness& w) {
  for (const auto& [v, bias] : a.bias) {
    ASSERT_TRUE(w.mapping.count(v)) << v;
    const NodeId& img = w.mapping.at(v);
    int s = w.sign.at(v);
    EXPECT_NEAR(b.bias.at(img), s * bias, 1e-9);
    const auto& pb = parents_of(b, img);
    for (const auto& [p, wt] : parents_of(a, v)) {
      ASSERT_TRUE(pb.count(w.mapping.at(p)));
      EXPECT_NEAR(pb.at(w.mapping.at(p)), w.sign.at(p) * wt * s, 1e-9);
    }
    auto oa = a.outputs.find(v);
    if (oa != a.outputs.end()) {
      const auto& ob = b.outputs.at(img);
      for (int r = 0; r < a.dim_out; ++r) EXPECT_NEAR(ob[r], s * oa->second[r], 1e-9);
    }
  }
}

}  // namespace

TEST(SignIso, IdentityOnFixture) {
  auto net = testutil::load_fixture("crelu_chain_a.json");
  auto res = sign_isomorphic(net, net);
  ASSERT_EQ(res.status, SearchStatus::Found);
  ASSERT_TRUE(res.witness.has_value());
  for (const auto& [v, _] : net.bias) {
    EXPECT_EQ(res.witness->mapping.at(v), v);
    EXPECT_EQ(res.witness->sign.at(v), 1);
  }
}

TEST(SignIso, FindsScrambledCopies) {
  for (uint32_t seed : {1u, 2u, 3u, 4u, 5u}) {
    std::mt19937 rng(seed);
    auto net = testutil::random_net(rng, tanh_rho(), 2, 4);
    auto scrambled = testutil::scramble_signs(net, rng);
    EXPECT_LT(map_deviation(net, scrambled, 40, seed), 1e-9);

    auto res = sign_isomorphic(net, scrambled);
    ASSERT_EQ(res.status, SearchStatus::Found) << "seed " << seed;
    expect_witness_valid(net, scrambled, *res.witness);
    EXPECT_TRUE(oracle::sign_iso_exhaustive(net, scrambled).has_value());
  }
}

TEST(SignIso, RejectsPerturbedBias) {
  std::mt19937 rng(11);
  auto net = testutil::random_net(rng, tanh_rho(), 2, 4);
  auto scrambled = testutil::scramble_signs(net, rng);
  scrambled.bias.begin()->second += 0.1;
  EXPECT_EQ(sign_isomorphic(net, scrambled).status, SearchStatus::None);
  EXPECT_FALSE(oracle::sign_iso_exhaustive(net, scrambled).has_value());
}

TEST(SignIso, NodeBudget) {
  NetBuilder b(tanh_rho());
  b.input("t");
  NodeId prev = "t";
  for (int i = 0; i < 65; ++i) {
    NodeId id = "h" + std::to_string(i);
    b.node(id, 0.1 * i).edge(prev, id, 1.0);
    prev = id;
  }
  b.output(prev, {1.0});
  auto net = b.build();
  EXPECT_EQ(sign_isomorphic(net, net).status, SearchStatus::OverBudget);
}

TEST(SignIso, StructuralPrefilters) {
  auto a = testutil::load_fixture("crelu_chain_a.json");
  auto b = testutil::load_fixture("crelu_chain_b.json");
  EXPECT_EQ(sign_isomorphic(a, b).status, SearchStatus::None);

  auto tanh_copy = a;
  tanh_copy.rho = tanh_rho();
  EXPECT_EQ(sign_isomorphic(a, tanh_copy).status, SearchStatus::None);

  auto shifted = a;
  shifted.constants[0] += 0.5;
  EXPECT_EQ(sign_isomorphic(a, shifted).status, SearchStatus::None);

  auto renamed_input = a;
  renamed_input.inputs = {"t1", "t9"};
  EXPECT_EQ(sign_isomorphic(a, renamed_input).status, SearchStatus::None);
}

TEST(RhoIso, TanhPairsJoinAtSignIsomorphism) {
  std::mt19937 rng(3);
  auto net = testutil::random_net(rng, tanh_rho(), 2, 3);
  ASSERT_TRUE(regularity_report(net).regular);
  auto scrambled = testutil::scramble_signs(net, rng);

  auto res = rho_isomorphic_bounded(net, scrambled, 4);
  ASSERT_EQ(res.status, SearchStatus::Found);
  EXPECT_TRUE(res.chain.empty());
  EXPECT_EQ(res.detail, "sign-isomorphic");
  ASSERT_TRUE(res.join.has_value());
  expect_witness_valid(net, scrambled, *res.join);
}

TEST(RhoIso, TanhHasNothingBeyondSignIsomorphism) {
  std::mt19937 rng(3);
  auto net = testutil::random_net(rng, tanh_rho(), 2, 3);
  auto other = testutil::scramble_signs(net, rng);
  other.bias.begin()->second += 0.1;
  ASSERT_TRUE(regularity_report(other).regular);

  auto res = rho_isomorphic_bounded(net, other, 4);
  EXPECT_EQ(res.status, SearchStatus::None);
  EXPECT_EQ(res.detail, "tanh isomorphism coincides with sign-isomorphism");
}

TEST(RhoIso, HalvingChainFoundBothWays) {
  auto r0 = testutil::load_fixture("crelu_refine_0.json");
  auto r1 = testutil::load_fixture("crelu_refine_1.json");

  for (const auto& [from, to] : {std::pair{r0, r1}, std::pair{r1, r0}}) {
    auto res = rho_isomorphic_bounded(from, to, 3);
    ASSERT_EQ(res.status, SearchStatus::Found);
    ASSERT_FALSE(res.chain.empty());
    Network cur = from;
    for (const auto& step : res.chain) {
      cur = apply_modification(cur, step.plan);
      EXPECT_EQ(network_hash(cur), step.result_hash);
    }
    ASSERT_TRUE(res.join.has_value());
    expect_witness_valid(cur, to, *res.join);
    for (const auto& [v, s] : res.join->sign) EXPECT_EQ(s, 1) << v;
    EXPECT_LT(map_deviation(from, cur, 60, 5), 1e-9);
  }
}

TEST(RhoIso, TwoLevelRefinementNeedsThreeMoves) {
  auto r0 = testutil::load_fixture("crelu_refine_0.json");
  auto r2 = testutil::load_fixture("crelu_refine_2.json");

  auto res = rho_isomorphic_bounded(r0, r2, 3);
  ASSERT_EQ(res.status, SearchStatus::Found);
  EXPECT_EQ(res.chain.size(), 3u);
  Network cur = r0;
  for (const auto& step : res.chain) {
    cur = apply_modification(cur, step.plan);
    EXPECT_TRUE(regularity_report(cur).regular);
    EXPECT_EQ(network_hash(cur), step.result_hash);
  }
  EXPECT_EQ(sign_isomorphic(cur, r2).status, SearchStatus::Found);
  EXPECT_LT(map_deviation(r0, cur, 60, 9), 1e-9);

  EXPECT_NE(rho_isomorphic_bounded(r0, r2, 2).status, SearchStatus::Found);
}

TEST(RhoIso, DistinctMapsStayApart) {
  auto r0 = testutil::load_fixture("crelu_refine_0.json");
  NetBuilder b(crelu_rho());
  b.input("t").node("u", 0.0).edge("t", "u", 2.0).output("u", {1.0});
  auto other = b.build();
  ASSERT_TRUE(regularity_report(other).regular);

  auto res = rho_isomorphic_bounded(r0, other, 2);
  EXPECT_EQ(res.status, SearchStatus::None);
}

TEST(RhoIso, SeriesHostsStopAtSignIsomorphism) {
  ZabSeries sigma;
  sigma.a = 1.0;
  sigma.b = kPi;
  sigma.constant = 0.0;
  sigma.coeffs[0] = 1.0;

  NetBuilder b(zab_rho(sigma));
  b.input("t").node("u", 0.2).edge("t", "u", 1.0).output("u", {1.0});
  auto net = b.build();

  NetBuilder r(zab_rho(sigma));
  r.input("t").node("m0", 0.2).edge("t", "m0", 1.0).output("m0", {1.0});
  auto relabeled = r.build();

  auto found = rho_isomorphic_bounded(net, relabeled, 2);
  EXPECT_EQ(found.status, SearchStatus::Found);
  EXPECT_EQ(found.detail, "sign-isomorphic");

  NetBuilder c(zab_rho(sigma));
  c.input("t").node("u", 0.2).edge("t", "u", 2.0).output("u", {1.0});
  auto different = c.build();
  auto res = rho_isomorphic_bounded(net, different, 2);
  EXPECT_EQ(res.status, SearchStatus::OverBudget);
  EXPECT_EQ(res.detail, "series rewrites beyond sign-isomorphism are not searched");
}

TEST(RhoIso, RequiresRegularInputs) {
  auto zero = testutil::load_fixture("crelu_zero_map.json");
  auto r0 = testutil::load_fixture("crelu_refine_0.json");
  EXPECT_THROW(rho_isomorphic_bounded(zero, zero, 1), std::invalid_argument);
  EXPECT_THROW(rho_isomorphic_bounded(r0, zero, 1), std::invalid_argument);
}

TEST(RhoIso, TrivialNetworks) {
  Network triv;
  triv.inputs = {"x"};
  triv.constants = {0.0};
  triv.rho = crelu_rho();
  ASSERT_TRUE(regularity_report(triv).trivial);

  auto same = rho_isomorphic_bounded(triv, triv, 1);
  EXPECT_EQ(same.status, SearchStatus::Found);
  EXPECT_TRUE(same.chain.empty());

  auto r0 = testutil::load_fixture("crelu_refine_0.json");
  r0.inputs = {"x"};
  r0.in_edges["u1"] = {{"x", 1.0}};
  auto res = rho_isomorphic_bounded(triv, r0, 2);
  EXPECT_EQ(res.status, SearchStatus::None);
}
