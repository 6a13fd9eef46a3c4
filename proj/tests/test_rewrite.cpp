#include <gtest/gtest.h>

#include <cmath>

#include "ffsym/evaluate.hpp"
#include "ffsym/rewrite.hpp"
#include "ffsym/serialization.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace ffsym;
using testutil::NetBuilder;

namespace {

ModificationPlan load_plan(const std::string& name) {
  return plan_from_json(load_json_file(testutil::fixture_path(name)));
}

const SiblingGroup* group_containing(const std::vector<SiblingGroup>& groups, const NodeId& v) {
  for (const auto& g : groups)
    for (const auto& m : g.members)
      if (m == v) return &g;
  return nullptr;
}

}  // namespace

TEST(SiblingGroups, ChainFixturePartitions) {
  auto net = testutil::load_fixture("crelu_chain_a.json");
  auto groups = sibling_groups(net);
  ASSERT_EQ(groups.size(), 2u);

  const auto* low = group_containing(groups, "u1");
  ASSERT_NE(low, nullptr);
  EXPECT_EQ(low->members, (std::vector<NodeId>{"u1", "u2"}));
  EXPECT_EQ(low->parents, (std::set<NodeId>{"t1", "t2"}));
  EXPECT_DOUBLE_EQ(low->kappa.at("t1"), 1.0);
  EXPECT_DOUBLE_EQ(low->kappa.at("t2"), -1.0);
  EXPECT_DOUBLE_EQ(low->betas[0], 1.0);
  EXPECT_DOUBLE_EQ(low->betas[1], 2.0);

  const auto* high = group_containing(groups, "a");
  ASSERT_NE(high, nullptr);
  EXPECT_EQ(high->members, (std::vector<NodeId>{"a", "b"}));
  EXPECT_DOUBLE_EQ(high->kappa.at("u1"), 1.0);
  EXPECT_DOUBLE_EQ(high->kappa.at("u2"), 4.0);
}

TEST(SiblingGroups, NonProportionalSiblingsSplit) {
  NetBuilder b(tanh_rho());
  b.input("x").input("y");
  b.node("u", 0.0).edge("x", "u", 1.0).edge("y", "u", 2.0);
  b.node("w", 0.0).edge("x", "w", 1.0).edge("y", "w", 3.0);
  b.output("u", {1.0}).output("w", {1.0});
  auto groups = sibling_groups(b.build());
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].members.size(), 1u);
  EXPECT_EQ(groups[1].members.size(), 1u);
}

TEST(Reduction, MirroredPairWitness) {
  auto net = testutil::load_fixture("tanh_mirrored_pair.json");
  auto witness = find_reduction(net);
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(witness->group, (std::vector<NodeId>{"u1", "u2"}));
  EXPECT_EQ(witness->removed, "u1");
  ASSERT_EQ(witness->sym.terms.size(), 2u);
  auto report = verify_symmetry(net.rho, witness->sym);
  EXPECT_TRUE(report.holds);
  EXPECT_TRUE(report.minimal);

  auto reduced = apply_reduction(net, *witness);
  auto want = testutil::load_fixture("tanh_mirrored_pair_reduced.json");
  EXPECT_TRUE(structural_equal(reduced, want, 1e-12));
  EXPECT_LT(map_deviation(net, reduced, 100, 42), 1e-12);
}

TEST(Reduction, ConstantFoldsParentlessInterior) {
  auto net = testutil::load_fixture("tanh_constant_fold.json");
  auto witness = find_reduction(net);
  ASSERT_TRUE(witness.has_value());
  auto reduced = apply_reduction(net, *witness);

  EXPECT_EQ(all_nodes(reduced), (std::set<NodeId>{"t", "w"}));
  EXPECT_NEAR(reduced.bias.at("w"), 7.0 + std::tanh(3.0), 1e-12);
  EXPECT_EQ(parents_of(reduced, "w"), (std::map<NodeId, double>{{"t", 2.0}}));

  for (double t : {-2.0, -0.3, 0.0, 1.1, 4.0}) {
    auto out = eval_map(reduced, {{"t", t}});
    EXPECT_NEAR(out[0], oracle::constant_fold_map(t), 1e-12);
  }
}

TEST(Reduction, DuplicatePairMerges) {
  NetBuilder b(tanh_rho());
  b.input("t");
  b.node("u1", 0.4).edge("t", "u1", 2.0);
  b.node("u2", 0.4).edge("t", "u2", 2.0);
  b.node("w", 0.0).edge("u1", "w", 1.0).edge("u2", "w", 3.0);
  b.output("w", {1.0});
  auto net = b.build();

  auto witness = find_reduction(net);
  ASSERT_TRUE(witness.has_value());
  auto reduced = apply_reduction(net, *witness);
  EXPECT_EQ(all_nodes(reduced), (std::set<NodeId>{"t", "u2", "w"}));
  EXPECT_NEAR(parents_of(reduced, "w").at("u2"), 4.0, 1e-12);
  EXPECT_LT(map_deviation(net, reduced, 50, 7), 1e-12);
}

TEST(Reduction, ZeroMapCollapsesToTrivial) {
  auto net = testutil::load_fixture("crelu_zero_map.json");
  auto res = reduce_to_regular(net);
  EXPECT_TRUE(is_trivial(res.net));
  ASSERT_EQ(res.log.size(), 1u);
  EXPECT_EQ(res.log[0].op, "reduce");
  EXPECT_EQ(res.log[0].result_hash, network_hash(res.net));
}

TEST(Reduction, IrreducibleFixturesAreFixedPoints) {
  for (const char* name : {"crelu_chain_a.json", "crelu_chain_d.json", "crelu_refine_0.json"}) {
    auto net = testutil::load_fixture(name);
    EXPECT_FALSE(find_reduction(net).has_value()) << name;
    auto res = reduce_to_regular(net);
    EXPECT_TRUE(res.log.empty()) << name;
    EXPECT_TRUE(structural_equal(res.net, net, 0.0)) << name;
  }
}

TEST(Reduction, RejectsTamperedWitness) {
  auto net = testutil::load_fixture("tanh_mirrored_pair.json");
  auto witness = find_reduction(net);
  ASSERT_TRUE(witness.has_value());

  auto wrong_beta = *witness;
  wrong_beta.sym.terms[0].beta += 0.5;
  EXPECT_THROW(apply_reduction(net, wrong_beta), std::invalid_argument);

  auto wrong_member = *witness;
  wrong_member.group[1] = "w";
  EXPECT_THROW(apply_reduction(net, wrong_member), std::invalid_argument);
}

TEST(Regularity, ReportFlags) {
  auto chain = regularity_report(testutil::load_fixture("crelu_chain_a.json"));
  EXPECT_TRUE(chain.valid);
  EXPECT_TRUE(chain.non_degenerate);
  EXPECT_TRUE(chain.strongly_non_degenerate);
  EXPECT_TRUE(chain.irreducible);
  EXPECT_TRUE(chain.regular);
  EXPECT_FALSE(chain.trivial);

  auto zero = regularity_report(testutil::load_fixture("crelu_zero_map.json"));
  EXPECT_TRUE(zero.valid);
  EXPECT_FALSE(zero.irreducible);
  EXPECT_FALSE(zero.regular);

  Network t;
  t.inputs = {"x"};
  t.constants = {0.0};
  auto trivial = regularity_report(t);
  EXPECT_TRUE(trivial.trivial);
  EXPECT_TRUE(trivial.regular);

  NetBuilder b(tanh_rho());
  b.input("x").node("u", 0.0).edge("x", "u", 1.0).node("z", 0.0).edge("x", "z", 1.0);
  b.output("u", {1.0});
  auto orphan = regularity_report(b.build());
  EXPECT_TRUE(orphan.valid);
  EXPECT_FALSE(orphan.non_degenerate);
  EXPECT_FALSE(orphan.regular);
}

TEST(Modification, ChainStepsReproduceFixtures) {
  struct Step {
    const char* host;
    const char* plan;
    const char* want;
  } steps[] = {
      {"crelu_chain_a.json", "crelu_chain_ab_plan.json", "crelu_chain_b.json"},
      {"crelu_chain_b.json", "crelu_chain_bc_plan.json", "crelu_chain_c.json"},
      {"crelu_chain_c.json", "crelu_chain_cd_plan.json", "crelu_chain_d.json"},
  };
  for (const auto& s : steps) {
    auto host = testutil::load_fixture(s.host);
    auto want = testutil::load_fixture(s.want);
    auto got = apply_modification(host, load_plan(s.plan));
    EXPECT_TRUE(structural_equal(got, want, 1e-12)) << s.plan;
    EXPECT_LT(map_deviation(host, got, 100, 42), 1e-9) << s.plan;
  }
}

TEST(Modification, ChainMapsAgreeWithClosedForm) {
  for (const char* name :
       {"crelu_chain_a.json", "crelu_chain_b.json", "crelu_chain_c.json", "crelu_chain_d.json"}) {
    auto net = testutil::load_fixture(name);
    for (double t1 : {-1.0, 0.0, 0.4, 1.0, 2.5})
      for (double t2 : {-0.7, 0.0, 0.8}) {
        auto out = eval_map(net, {{"t1", t1}, {"t2", t2}});
        EXPECT_NEAR(out[0], oracle::crelu_chain_map(t1, t2), 1e-12) << name;
      }
  }
}

TEST(Modification, InvertRoundTripsACrossChain) {
  auto a = testutil::load_fixture("crelu_chain_a.json");
  auto b = testutil::load_fixture("crelu_chain_b.json");
  auto plan = load_plan("crelu_chain_ab_plan.json");
  auto inv = invert_modification(a, plan, b);
  EXPECT_EQ(inv.a_nodes, (std::vector<NodeId>{"u3", "u4"}));
  ASSERT_EQ(inv.c_terms.size(), 1u);
  EXPECT_EQ(inv.c_terms[0].id, "u1");
  auto back = apply_modification(b, inv);
  EXPECT_TRUE(structural_equal(back, a, 1e-12));

  auto c = testutil::load_fixture("crelu_chain_c.json");
  EXPECT_THROW(invert_modification(a, plan, c), std::invalid_argument);
}

TEST(Modification, InvertRoundTripsOutputBranch) {
  auto b = testutil::load_fixture("crelu_chain_b.json");
  auto c = testutil::load_fixture("crelu_chain_c.json");
  auto plan = load_plan("crelu_chain_bc_plan.json");
  auto inv = invert_modification(b, plan, c);
  auto back = apply_modification(c, inv);
  EXPECT_TRUE(structural_equal(back, b, 1e-12));
}

TEST(Modification, RejectsBadPlans) {
  auto a = testutil::load_fixture("crelu_chain_a.json");
  auto plan = load_plan("crelu_chain_ab_plan.json");

  auto zero_alpha = plan;
  zero_alpha.a_alphas[0] = 0.0;
  EXPECT_THROW(apply_modification(a, zero_alpha), std::invalid_argument);

  auto clash = plan;
  clash.c_terms[0].id = "u2";
  EXPECT_THROW(apply_modification(a, clash), std::invalid_argument);

  auto broken = plan;
  broken.c_terms[0].gamma = 0.7;
  EXPECT_THROW(apply_modification(a, broken), std::invalid_argument);

  auto missing = plan;
  missing.a_nodes[0] = "zz";
  EXPECT_THROW(apply_modification(a, missing), std::invalid_argument);

  auto reducible_host = testutil::load_fixture("crelu_zero_map.json");
  EXPECT_THROW(apply_modification(reducible_host, plan), std::invalid_argument);
}

TEST(Planning, ExistingRegularPlanKeptUpToScale) {
  auto c = testutil::load_fixture("crelu_chain_c.json");
  auto candidate = load_plan("crelu_chain_cd_plan.json");
  auto res = plan_regular_modification(c, candidate);
  ASSERT_TRUE(res.plan.has_value()) << res.detail;
  EXPECT_EQ(res.plan->a_nodes, candidate.a_nodes);
  EXPECT_EQ(res.plan->b_nodes, candidate.b_nodes);
  ASSERT_EQ(res.plan->c_terms.size(), 1u);
  EXPECT_EQ(res.plan->c_terms[0].id, "u6");
  // Alphas may be rescaled jointly; ratios are pinned.
  double scale = res.plan->a_alphas[0] / candidate.a_alphas[0];
  ASSERT_NE(scale, 0.0);
  EXPECT_NEAR(res.plan->b_alphas[0], scale * candidate.b_alphas[0], 1e-9);
  EXPECT_NEAR(res.plan->c_terms[0].alpha, scale * candidate.c_terms[0].alpha, 1e-9);

  auto applied = apply_modification(c, *res.plan);
  auto want = testutil::load_fixture("crelu_chain_d.json");
  EXPECT_TRUE(structural_equal(applied, want, 1e-9));
  EXPECT_TRUE(regularity_report(applied).regular);
}

TEST(Planning, MinimalCSubsetWins) {
  auto a = testutil::load_fixture("crelu_chain_a.json");
  auto candidate = load_plan("crelu_chain_ab_plan.json");
  candidate.c_terms.push_back({"x9", 0.3, 3.0, 0.4});
  auto res = plan_regular_modification(a, candidate);
  ASSERT_TRUE(res.plan.has_value()) << res.detail;
  ASSERT_EQ(res.plan->c_terms.size(), 2u);
  EXPECT_EQ(res.plan->c_terms[0].id, "u3");
  EXPECT_EQ(res.plan->c_terms[1].id, "u4");

  auto applied = apply_modification(a, *res.plan);
  EXPECT_TRUE(structural_equal(applied, testutil::load_fixture("crelu_chain_b.json"), 1e-9));
  EXPECT_LT(map_deviation(a, applied, 100, 42), 1e-9);
}

TEST(Planning, StarvedBMemberJoinsA) {
  auto net = testutil::load_fixture("crelu_refine_1.json");
  ModificationPlan candidate;
  candidate.a_nodes = {"h0"};
  candidate.a_alphas = {-0.5};
  candidate.b_nodes = {"h1"};
  candidate.b_alphas = {-0.5};
  candidate.c_terms = {{"c0", 1.0, 1.0, 0.0}};
  candidate.zeta = 0.0;

  auto res = plan_regular_modification(net, candidate);
  ASSERT_TRUE(res.plan.has_value()) << res.detail;
  EXPECT_EQ(res.plan->a_nodes, (std::vector<NodeId>{"h0", "h1"}));
  EXPECT_TRUE(res.plan->b_nodes.empty());

  auto applied = apply_modification(net, *res.plan);
  EXPECT_TRUE(regularity_report(applied).regular);
  auto want = testutil::load_fixture("crelu_refine_0.json");
  EXPECT_EQ(sign_isomorphic(applied, want).status, SearchStatus::Found);
  EXPECT_LT(map_deviation(net, applied, 100, 42), 1e-9);
}

TEST(Planning, RejectsHopelessCandidates) {
  auto zero = testutil::load_fixture("crelu_zero_map.json");
  auto candidate = load_plan("crelu_chain_ab_plan.json");
  auto res = plan_regular_modification(zero, candidate);
  EXPECT_FALSE(res.plan.has_value());
  EXPECT_NE(res.detail.find("not regular"), std::string::npos);

  auto a = testutil::load_fixture("crelu_chain_a.json");
  ModificationPlan split;
  split.a_nodes = {"u1"};
  split.a_alphas = {1.0};
  split.b_nodes = {"a"};
  split.b_alphas = {1.0};
  split.c_terms = {{"x0", -0.5, 2.0, 0.0}};
  auto mixed = plan_regular_modification(a, split);
  EXPECT_FALSE(mixed.plan.has_value());
  EXPECT_NE(mixed.detail.find("parent set"), std::string::npos);
}

TEST(Hashing, CanonicalAndContentSensitive) {
  auto a = testutil::load_fixture("crelu_chain_a.json");
  auto again = testutil::load_fixture("crelu_chain_a.json");
  EXPECT_EQ(network_hash(a), network_hash(again));
  EXPECT_EQ(network_hash(a).size(), 16u);
  EXPECT_NE(network_hash(a), network_hash(testutil::load_fixture("crelu_chain_b.json")));
}
