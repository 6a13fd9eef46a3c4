#include <cmath>
#include <stdexcept>

#include "ffsym/evaluate.hpp"
#include "ffsym/rewrite.hpp"
#include "ffsym/util.hpp"

namespace ffsym {

AnchorResult anchor_input(const Network& net, const NodeId& v, double a) {
  if (!is_input(net, v)) throw std::invalid_argument("'" + v + "' is not an input");
  if (net.inputs.size() < 2)
    throw std::invalid_argument("cannot anchor the only input");
  auto violations = validate(net);
  if (!violations.empty())
    throw std::invalid_argument("invalid network: " + violations.front());

  // Input ancestry per node; dropped nodes see no input besides v.
  std::map<NodeId, std::set<NodeId>> input_anc;
  for (const auto& id : net.inputs) input_anc[id] = {id};
  std::vector<NodeId> topo;
  {
    auto lv = levels(net);
    for (const auto& [u, _] : net.bias) topo.push_back(u);
    std::sort(topo.begin(), topo.end(), [&](const NodeId& x, const NodeId& y) {
      if (lv.at(x) != lv.at(y)) return lv.at(x) < lv.at(y);
      return x < y;
    });
  }
  for (const auto& u : topo) {
    auto& anc = input_anc[u];
    for (const auto& [p, _] : parents_of(net, u))
      anc.insert(input_anc.at(p).begin(), input_anc.at(p).end());
  }

  AnchorResult res;
  auto report = regularity_report(net);
  if (!(report.strongly_non_degenerate && report.irreducible))
    res.warnings.push_back("network is not strongly regular");
  if (!zero_map_probe(net, 100, 42).zero_on_grid)
    res.warnings.push_back("output map is not zero on the probe grid");
  res.dropped.insert(v);
  for (const auto& u : topo) {
    const auto& anc = input_anc.at(u);
    bool sees_other_input = false;
    for (const auto& id : anc)
      if (id != v) sees_other_input = true;
    if (!sees_other_input) res.dropped.insert(u);
  }

  res.dropped_values[v] = a;
  for (const auto& u : topo) {
    if (!res.dropped.count(u)) continue;
    double s = net.bias.at(u);
    for (const auto& [p, w] : parents_of(net, u)) s += w * res.dropped_values.at(p);
    res.dropped_values[u] = eval_real(net.rho, s);
  }

  Network out = net;
  out.inputs.erase(v);
  for (const auto& u : res.dropped) {
    out.bias.erase(u);
    out.in_edges.erase(u);
  }
  for (auto& [u, ps] : out.in_edges) {
    for (const auto& d : res.dropped) {
      auto it = ps.find(d);
      if (it == ps.end()) continue;
      out.bias.at(u) += it->second * res.dropped_values.at(d);
      ps.erase(it);
    }
  }
  for (const auto& d : res.dropped) {
    auto it = out.outputs.find(d);
    if (it == out.outputs.end()) continue;
    for (int r = 0; r < out.dim_out; ++r)
      out.constants[r] += it->second[r] * res.dropped_values.at(d);
    out.outputs.erase(it);
  }

  if (out.outputs.empty() && !net.outputs.empty())
    res.warnings.push_back("all output nodes were anchored away");
  auto post = validate(out);
  if (!post.empty())
    res.warnings.push_back("anchored network is invalid: " + post.front());
  res.net = std::move(out);
  return res;
}

AnchorSearchResult anchor_search(const Network& net, const NodeId& v,
                                 const std::vector<double>& samples) {
  AnchorSearchResult res;
  for (double value : samples) {
    auto anchored = anchor_input(net, v, value);
    ++res.samples_tried;
    if (res.samples_tried == 1) res.warnings = anchored.warnings;
    if (regularity_report(anchored.net).regular) {
      res.found = true;
      res.a_star = value;
      res.regular = true;
      return res;
    }
  }
  return res;
}

}  // namespace ffsym
