#include "ffsym/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ffsym/util.hpp"

namespace ffsym {

namespace {

const std::map<NodeId, double> kNoParents;

void append(std::vector<std::string>* reasons, std::string msg) {
  if (reasons) reasons->push_back(std::move(msg));
}

}  // namespace

std::set<NodeId> all_nodes(const Network& net) {
  std::set<NodeId> out(net.inputs);
  for (const auto& [v, _] : net.bias) out.insert(v);
  return out;
}

bool has_node(const Network& net, const NodeId& v) {
  return net.inputs.count(v) > 0 || net.bias.count(v) > 0;
}

bool is_input(const Network& net, const NodeId& v) { return net.inputs.count(v) > 0; }

const std::map<NodeId, double>& parents_of(const Network& net, const NodeId& v) {
  auto it = net.in_edges.find(v);
  return it == net.in_edges.end() ? kNoParents : it->second;
}

std::map<NodeId, std::set<NodeId>> children_map(const Network& net) {
  std::map<NodeId, std::set<NodeId>> out;
  for (const auto& v : all_nodes(net)) out[v];
  for (const auto& [u, ps] : net.in_edges)
    for (const auto& [p, _] : ps) out[p].insert(u);
  return out;
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> v;
  if (net.dim_out < 1) v.push_back("dim_out must be at least 1");
  if (int(net.constants.size()) != net.dim_out)
    v.push_back("constants must have dim_out entries");
  if (net.inputs.empty()) v.push_back("network must have at least one input");
  for (const auto& id : net.inputs)
    if (id.empty()) v.push_back("empty input id");
  for (const auto& [id, _] : net.bias) {
    if (id.empty()) v.push_back("empty node id");
    if (net.inputs.count(id)) v.push_back("node '" + id + "' is both input and biased");
  }
  for (const auto& [u, ps] : net.in_edges) {
    if (!net.bias.count(u)) v.push_back("edges into non-interior node '" + u + "'");
    for (const auto& [p, w] : ps) {
      if (!has_node(net, p)) v.push_back("edge into '" + u + "' from unknown node '" + p + "'");
      if (w == 0.0) v.push_back("zero weight on edge " + p + " -> " + u);
      if (!std::isfinite(w)) v.push_back("non-finite weight on edge " + p + " -> " + u);
    }
  }
  for (const auto& [u, b] : net.bias) {
    if (!std::isfinite(b)) v.push_back("non-finite bias on node '" + u + "'");
    if (parents_of(net, u).empty())
      v.push_back("parentless non-input node '" + u + "'");
  }
  for (const auto& [w, scal] : net.outputs) {
    if (!has_node(net, w)) v.push_back("unknown output node '" + w + "'");
    else if (net.inputs.count(w)) v.push_back("input node '" + w + "' cannot be an output");
    if (int(scal.size()) != net.dim_out)
      v.push_back("output scalars of '" + w + "' must have dim_out entries");
    for (double s : scal)
      if (!std::isfinite(s)) v.push_back("non-finite output scalar on '" + w + "'");
  }
  for (double c : net.constants)
    if (!std::isfinite(c)) v.push_back("non-finite constant");

  // Cycle check via Kahn's algorithm over interior nodes.
  std::map<NodeId, int> pending;
  for (const auto& [u, ps] : net.in_edges) {
    int count = 0;
    for (const auto& [p, _] : ps)
      if (net.bias.count(p)) ++count;
    pending[u] = count;
  }
  std::vector<NodeId> ready;
  for (const auto& [u, _] : net.bias)
    if (!pending.count(u) || pending[u] == 0) ready.push_back(u);
  auto children = children_map(net);
  std::size_t seen = 0;
  while (!ready.empty()) {
    NodeId u = ready.back();
    ready.pop_back();
    ++seen;
    auto it = children.find(u);
    if (it != children.end())
      for (const auto& c : it->second)
        if (net.bias.count(c) && --pending[c] == 0) ready.push_back(c);
  }
  if (seen != net.bias.size()) v.push_back("cycle among interior nodes");
  return v;
}

std::map<NodeId, int> levels(const Network& net) {
  std::map<NodeId, int> lv;
  std::function<int(const NodeId&)> go = [&](const NodeId& u) -> int {
    auto it = lv.find(u);
    if (it != lv.end()) return it->second;
    int best = 0;
    for (const auto& [p, _] : parents_of(net, u)) best = std::max(best, go(p) + 1);
    lv[u] = best;
    return best;
  };
  for (const auto& u : all_nodes(net)) go(u);
  return lv;
}

int level(const Network& net, const NodeId& v) {
  if (!has_node(net, v)) throw std::invalid_argument("unknown node '" + v + "'");
  return levels(net).at(v);
}

std::set<NodeId> ancestors(const Network& net, const std::set<NodeId>& seeds) {
  std::set<NodeId> out;
  std::vector<NodeId> stack(seeds.begin(), seeds.end());
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (!out.insert(u).second) continue;
    for (const auto& [p, _] : parents_of(net, u)) stack.push_back(p);
  }
  return out;
}

bool is_layered(const Network& net) {
  auto lv = levels(net);
  for (const auto& [u, ps] : net.in_edges)
    for (const auto& [p, _] : ps)
      if (lv.at(u) != lv.at(p) + 1) return false;
  return true;
}

bool is_trivial(const Network& net) {
  if (!net.bias.empty() || !net.outputs.empty()) return false;
  for (double c : net.constants)
    if (std::fabs(c) >= kExactZeroTol) return false;
  return true;
}

bool non_degenerate(const Network& net, std::vector<std::string>* reasons) {
  bool ok = true;
  std::set<NodeId> outs;
  for (const auto& [w, _] : net.outputs) outs.insert(w);
  auto anc = ancestors(net, outs);
  for (const auto& [u, _] : net.bias)
    if (!anc.count(u)) {
      append(reasons, "interior node '" + u + "' is not an ancestor of any output");
      ok = false;
    }
  for (const auto& [w, scal] : net.outputs) {
    bool nonzero = false;
    for (double s : scal)
      if (std::fabs(s) >= kExactZeroTol) nonzero = true;
    if (!nonzero) {
      append(reasons, "output node '" + w + "' has all-zero scalars");
      ok = false;
    }
  }
  return ok;
}

bool strongly_non_degenerate(const Network& net, std::vector<std::string>* reasons) {
  bool ok = non_degenerate(net, reasons);
  std::set<NodeId> outs;
  for (const auto& [w, _] : net.outputs) outs.insert(w);
  auto anc = ancestors(net, outs);
  for (const auto& v : net.inputs)
    if (!anc.count(v)) {
      append(reasons, "input '" + v + "' is not an ancestor of any output");
      ok = false;
    }
  return ok;
}

Network subnetwork(const Network& net, const std::set<NodeId>& seeds,
                   const std::map<NodeId, std::vector<double>>& new_outputs,
                   const std::vector<double>& new_constants) {
  for (const auto& s : seeds)
    if (!has_node(net, s)) throw std::invalid_argument("unknown seed node '" + s + "'");
  auto keep = ancestors(net, seeds);
  Network out;
  out.dim_out = int(new_constants.size());
  out.rho = net.rho;
  out.constants = new_constants;
  for (const auto& v : net.inputs)
    if (keep.count(v)) out.inputs.insert(v);
  for (const auto& [u, b] : net.bias)
    if (keep.count(u)) {
      out.bias[u] = b;
      out.in_edges[u] = net.in_edges.at(u);
    }
  for (const auto& [w, scal] : new_outputs) {
    if (!keep.count(w) || net.inputs.count(w))
      throw std::invalid_argument("output node '" + w + "' is not an interior node of the closure");
    if (scal.size() != new_constants.size())
      throw std::invalid_argument("output scalars of '" + w + "' do not match dim_out");
    out.outputs[w] = scal;
  }
  auto violations = validate(out);
  if (!violations.empty()) throw std::invalid_argument("subnetwork invalid: " + violations[0]);
  return out;
}

bool structural_equal(const Network& a, const Network& b, double tol) {
  if (a.dim_out != b.dim_out || !(a.rho == b.rho)) return false;
  if (a.inputs != b.inputs) return false;
  if (a.bias.size() != b.bias.size() || a.outputs.size() != b.outputs.size()) return false;
  for (const auto& [u, bias_a] : a.bias) {
    auto it = b.bias.find(u);
    if (it == b.bias.end() || !approx_eq(bias_a, it->second, tol)) return false;
    const auto& pa = parents_of(a, u);
    const auto& pb = parents_of(b, u);
    if (pa.size() != pb.size()) return false;
    for (const auto& [p, w] : pa) {
      auto jt = pb.find(p);
      if (jt == pb.end() || !approx_eq(w, jt->second, tol)) return false;
    }
  }
  for (const auto& [w, scal_a] : a.outputs) {
    auto it = b.outputs.find(w);
    if (it == b.outputs.end()) return false;
    for (int r = 0; r < a.dim_out; ++r)
      if (!approx_eq(scal_a[r], it->second[r], tol)) return false;
  }
  for (int r = 0; r < a.dim_out; ++r)
    if (!approx_eq(a.constants[r], b.constants[r], tol)) return false;
  return true;
}

Network prune_to_non_degenerate(const Network& net) {
  Network out = net;
  for (;;) {
    bool changed = false;
    for (auto it = out.outputs.begin(); it != out.outputs.end();) {
      bool nonzero = false;
      for (double s : it->second)
        if (std::fabs(s) >= kExactZeroTol) nonzero = true;
      if (!nonzero) {
        it = out.outputs.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    std::set<NodeId> outs;
    for (const auto& [w, _] : out.outputs) outs.insert(w);
    auto anc = ancestors(out, outs);
    std::vector<NodeId> drop;
    for (const auto& [u, _] : out.bias)
      if (!anc.count(u)) drop.push_back(u);
    for (const auto& u : drop) {
      out.bias.erase(u);
      out.in_edges.erase(u);
      changed = true;
    }
    if (!drop.empty())
      for (auto& [u, ps] : out.in_edges)
        for (const auto& d : drop) ps.erase(d);
    if (!changed) return out;
  }
}

}  // namespace ffsym
