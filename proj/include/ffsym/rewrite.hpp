#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ffsym/network.hpp"
#include "ffsym/symmetry.hpp"

namespace ffsym {

// Relative tolerance for weight/scalar proportionality tests.
inline constexpr double kProportionalTol = 1e-10;

// Maximal set of interior nodes sharing a parent set with proportional
// weight vectors: weights into u are beta_u * kappa, kappa normalized so the
// lexicographically first parent's entry is 1.
struct SiblingGroup {
  std::set<NodeId> parents;
  std::map<NodeId, double> kappa;
  std::vector<NodeId> members;  // lex sorted
  std::vector<double> betas;    // parallel to members
};

std::vector<SiblingGroup> sibling_groups(const Network& net);

// A sibling group carrying a symmetry: members share a parent set, their
// weight vectors are beta_u * kappa with kappa normalized so the entry of the
// lexicographically first parent is 1, and sym's terms run parallel to
// `group` as (alpha_u, beta_u, bias_u).
struct ReductionWitness {
  std::vector<NodeId> group;
  NodeId removed;  // lexicographically first member with nonzero alpha
  AffineSymmetry sym;
  std::map<NodeId, double> kappa;
};

std::optional<ReductionWitness> find_reduction(const Network& net, double tol = 1e-8);

// Removes witness.removed, redistributing its edges and output scalars over
// the rest of the group, folding any node that loses all parents into its
// children as a constant, then pruning to non-degeneracy.
// Throws std::invalid_argument when the witness does not match the network.
Network apply_reduction(const Network& net, const ReductionWitness& witness);

struct RewriteLogEntry {
  std::string op;
  std::vector<std::string> inputs;
  std::string result_hash;
};

struct ReduceResult {
  Network net;
  std::vector<RewriteLogEntry> log;
};

// Applies reductions until none is found. Terminates because each step
// removes at least one node.
ReduceResult reduce_to_regular(const Network& net);

struct RegularityReport {
  bool valid = false;
  std::vector<std::string> violations;
  bool non_degenerate = false;
  bool strongly_non_degenerate = false;
  bool irreducible = false;
  bool regular = false;  // non-degenerate and irreducible
  bool trivial = false;
};

RegularityReport regularity_report(const Network& net);

// Plan for replacing node set A by fresh nodes C, adjusting siblings B.
// Alphas pair with ids; the symmetry over the (alpha, beta, bias) data of
// A u B plus the C terms must hold and be minimal.
struct PlanCTerm {
  NodeId id;  // fresh id
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
};

struct ModificationPlan {
  std::vector<NodeId> a_nodes;
  std::vector<double> a_alphas;
  std::vector<NodeId> b_nodes;
  std::vector<double> b_alphas;
  std::vector<PlanCTerm> c_terms;
  double zeta = 0.0;
};

// Validates the plan against the network (irreducible host, common parent
// set, proportional weights into A u B and out of A, output-scalar branch,
// minimal symmetry, fresh C ids) and applies the rewrite. The result is the
// raw construction: it is always a valid network but may be degenerate.
// Throws std::invalid_argument with a reason when a precondition fails.
Network apply_modification(const Network& net, const ModificationPlan& plan);

// Plan that undoes `plan` on `result`: swaps A and C (recreating A's ids,
// betas and biases from `net`), keeps B and zeta. Throws std::invalid_argument
// when `result` does not match `plan` applied to `net`.
ModificationPlan invert_modification(const Network& net, const ModificationPlan& plan,
                                     const Network& result);

struct PlanningResult {
  std::optional<ModificationPlan> plan;
  std::string detail;
};

// Refines a candidate plan on a regular host into a regularity-preserving
// one: picks the smallest C subset (ties by id list) whose symmetry with the
// A u B terms is minimal with full support, then absorbs into A every B
// member whose edges and scalars would vanish under the rewrite.
PlanningResult plan_regular_modification(const Network& net, const ModificationPlan& candidate);

struct SignWitness {
  std::map<NodeId, NodeId> mapping;  // nodes of the first net -> second
  std::map<NodeId, int> sign;        // +1/-1 per node of the first net
};

enum class SearchStatus { Found, None, OverBudget };

struct SignIsoResult {
  SearchStatus status = SearchStatus::None;
  std::optional<SignWitness> witness;
};

inline constexpr double kSignIsoTol = 1e-10;
inline constexpr int kSignIsoNodeBudget = 64;

// Bijection fixing inputs pointwise with per-node signs flipping weights,
// biases and output scalars coherently. Definitive None when the search
// space is exhausted; OverBudget above kSignIsoNodeBudget nodes.
SignIsoResult sign_isomorphic(const Network& a, const Network& b, double tol = kSignIsoTol);

struct ChainStep {
  ModificationPlan plan;
  std::string result_hash;
};

struct RhoIsoResult {
  SearchStatus status = SearchStatus::None;
  std::vector<ChainStep> chain;          // plans applied from the first net
  std::optional<SignWitness> join;       // sign-isomorphism at the join
  std::string detail;
};

// Searches for a chain of at most `budget` modifications from a to b, up to
// sign-isomorphism at the join. Both nets must be regular. For tanh the
// relation coincides with sign-isomorphism and is decided directly.
RhoIsoResult rho_isomorphic_bounded(const Network& a, const Network& b, int budget);

struct AnchorResult {
  Network net;
  std::set<NodeId> dropped;              // nodes removed (anchored input included)
  std::map<NodeId, double> dropped_values;
  std::vector<std::string> warnings;
};

// Partial evaluation: fixes input v to the value a, folds every node whose
// input ancestry is only v into downstream biases and constants.
// Throws std::invalid_argument if v is not an input or the only input.
AnchorResult anchor_input(const Network& net, const NodeId& v, double a);

struct AnchorSearchResult {
  bool found = false;   // false reports exhaustion of the sample list
  double a_star = 0.0;  // first sample anchoring to a regular network
  bool regular = false;
  int samples_tried = 0;
  std::vector<std::string> warnings;
};

// Tries anchor values in order and returns the first whose anchored network
// passes regularity_report; reports exhaustion otherwise.
AnchorSearchResult anchor_search(const Network& net, const NodeId& v,
                                 const std::vector<double>& samples);

// Canonical serialization hash for rewrite logs and dedup buckets.
std::string network_hash(const Network& net);

}  // namespace ffsym
