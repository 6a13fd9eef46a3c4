#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ffsym/nonlinearity.hpp"

namespace ffsym {

using NodeId = std::string;

// Feed-forward network as a weighted DAG. Inputs are exactly the parentless
// nodes; every other node carries a bias and at least one incoming edge.
// The map it computes is, per output coordinate r,
//   constants[r] + sum over output nodes w of outputs[w][r] * O_w,
// where O_v = value fed in at v for inputs and rho(sum_u w_vu O_u + bias_v)
// otherwise. Treated as an immutable value: operations return new networks.
struct Network {
  int dim_out = 1;
  Nonlinearity rho;
  std::set<NodeId> inputs;
  std::map<NodeId, double> bias;                        // non-input nodes only
  std::map<NodeId, std::map<NodeId, double>> in_edges;  // child -> (parent -> weight)
  std::map<NodeId, std::vector<double>> outputs;        // output node -> dim_out scalars
  std::vector<double> constants;                        // dim_out entries
};

// Threshold below which a computed weight or output scalar counts as exactly
// zero, deleting the edge or the output membership.
inline constexpr double kExactZeroTol = 1e-12;

std::set<NodeId> all_nodes(const Network& net);
bool has_node(const Network& net, const NodeId& v);
bool is_input(const Network& net, const NodeId& v);
const std::map<NodeId, double>& parents_of(const Network& net, const NodeId& v);
std::map<NodeId, std::set<NodeId>> children_map(const Network& net);

// Structural well-formedness; empty result means valid.
std::vector<std::string> validate(const Network& net);

// Longest directed path from any parentless node; inputs sit at level 0.
int level(const Network& net, const NodeId& v);
std::map<NodeId, int> levels(const Network& net);

// Reflexive ancestor closure of the given set.
std::set<NodeId> ancestors(const Network& net, const std::set<NodeId>& seeds);

// True when every edge raises the level by exactly one.
bool is_layered(const Network& net);

// No non-input nodes, no outputs, all constants (exactly) zero.
bool is_trivial(const Network& net);

// Every non-input node is an ancestor of an output node and every output
// node has a nonzero scalar somewhere.
bool non_degenerate(const Network& net, std::vector<std::string>* reasons = nullptr);

// Non-degenerate and every input is an ancestor of an output node.
bool strongly_non_degenerate(const Network& net, std::vector<std::string>* reasons = nullptr);

// Restriction to the ancestor closure of seeds, with fresh output data.
// Throws std::invalid_argument if the output data does not fit the closure.
Network subnetwork(const Network& net, const std::set<NodeId>& seeds,
                   const std::map<NodeId, std::vector<double>>& new_outputs,
                   const std::vector<double>& new_constants);

// Same ids, edges, output membership; numeric fields within tol.
bool structural_equal(const Network& a, const Network& b, double tol);

// Drop non-input nodes outside the ancestor closure of the outputs and
// output memberships whose scalars are all below kExactZeroTol; repeat to a
// fixed point. Inputs are never dropped.
Network prune_to_non_degenerate(const Network& net);

}  // namespace ffsym
