#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "ffsym/rewrite.hpp"
#include "ffsym/util.hpp"

namespace ffsym {

namespace {

bool near_tol(double x, double y, double tol) {
  return std::fabs(x - y) <= tol * std::max({1.0, std::fabs(x), std::fabs(y)});
}

struct SignSearch {
  const Network& a;
  const Network& b;
  double tol;
  bool allow_flip;
  std::vector<NodeId> order;                   // interior of a by (level, id)
  std::map<NodeId, std::vector<NodeId>> cand;  // same-signature nodes of b
  std::map<NodeId, NodeId> pi;
  std::map<NodeId, int> sign;
  std::set<NodeId> used;

  bool feasible(const NodeId& v, const NodeId& w, int s) const {
    if (!near_tol(b.bias.at(w), s * a.bias.at(v), tol)) return false;
    const auto& pa = parents_of(a, v);
    const auto& pb = parents_of(b, w);
    if (pa.size() != pb.size()) return false;
    for (const auto& [p, wt] : pa) {
      auto it = pb.find(pi.at(p));
      if (it == pb.end()) return false;
      if (!near_tol(it->second, sign.at(p) * wt * s, tol)) return false;
    }
    auto oa = a.outputs.find(v);
    auto ob = b.outputs.find(w);
    if ((oa != a.outputs.end()) != (ob != b.outputs.end())) return false;
    if (oa != a.outputs.end())
      for (int r = 0; r < a.dim_out; ++r)
        if (!near_tol(ob->second[r], s * oa->second[r], tol)) return false;
    return true;
  }

  bool solve(std::size_t k) {
    if (k == order.size()) return true;
    const NodeId& v = order[k];
    const int n_signs = allow_flip ? 2 : 1;
    for (const NodeId& w : cand.at(v)) {
      if (used.count(w)) continue;
      for (int si = 0; si < n_signs; ++si) {
        int s = si == 0 ? 1 : -1;
        if (!feasible(v, w, s)) continue;
        pi[v] = w;
        sign[v] = s;
        used.insert(w);
        if (solve(k + 1)) return true;
        pi.erase(v);
        sign.erase(v);
        used.erase(w);
      }
    }
    return false;
  }
};

std::size_t edge_count(const Network& net) {
  std::size_t n = 0;
  for (const auto& [_, ps] : net.in_edges) n += ps.size();
  return n;
}

// Sign flips only preserve the computed map when the nonlinearity is odd, so
// callers working with other activations restrict the search to relabelings.
SignIsoResult sign_iso_search(const Network& a, const Network& b, double tol,
                              bool allow_flip) {
  SignIsoResult res;
  if (int(all_nodes(a).size()) > kSignIsoNodeBudget ||
      int(all_nodes(b).size()) > kSignIsoNodeBudget) {
    res.status = SearchStatus::OverBudget;
    return res;
  }
  res.status = SearchStatus::None;
  if (a.dim_out != b.dim_out) return res;
  if (!(a.rho == b.rho)) return res;
  if (a.inputs != b.inputs) return res;
  if (a.bias.size() != b.bias.size()) return res;
  if (a.outputs.size() != b.outputs.size()) return res;
  if (edge_count(a) != edge_count(b)) return res;
  for (int r = 0; r < a.dim_out; ++r)
    if (!near_tol(a.constants[r], b.constants[r], tol)) return res;

  auto la = levels(a);
  auto lb = levels(b);
  auto ca = children_map(a);
  auto cb = children_map(b);

  SignSearch search{a, b, tol, allow_flip, {}, {}, {}, {}, {}};
  for (const auto& v : a.inputs) {
    search.pi[v] = v;
    search.sign[v] = 1;
  }
  for (const auto& [v, _] : a.bias) search.order.push_back(v);
  std::sort(search.order.begin(), search.order.end(), [&](const NodeId& x, const NodeId& y) {
    if (la.at(x) != la.at(y)) return la.at(x) < la.at(y);
    return x < y;
  });

  for (const auto& v : search.order) {
    auto& list = search.cand[v];
    for (const auto& [w, _] : b.bias) {
      if (lb.at(w) != la.at(v)) continue;
      if (parents_of(b, w).size() != parents_of(a, v).size()) continue;
      if (cb.at(w).size() != ca.at(v).size()) continue;
      if ((b.outputs.count(w) != 0) != (a.outputs.count(v) != 0)) continue;
      list.push_back(w);
    }
    if (list.empty()) return res;
  }

  if (!search.solve(0)) return res;
  res.status = SearchStatus::Found;
  SignWitness witness;
  witness.mapping = search.pi;
  witness.sign = search.sign;
  res.witness = std::move(witness);
  return res;
}

}  // namespace

SignIsoResult sign_isomorphic(const Network& a, const Network& b, double tol) {
  return sign_iso_search(a, b, tol, true);
}

namespace {

// Halving-family rewrites available on a clipped-relu host. Replacement term
// data that already names a sibling moves to B instead of duplicating it.
std::vector<ModificationPlan> crelu_moves(const Network& net, int& fresh) {
  std::vector<ModificationPlan> moves;
  auto next_id = [&]() {
    NodeId id;
    do {
      id = "x" + std::to_string(++fresh);
    } while (has_node(net, id));
    return id;
  };

  for (const auto& grp : sibling_groups(net)) {
    auto find_member = [&](std::size_t skip, double beta, double gamma) -> std::optional<std::size_t> {
      for (std::size_t j = 0; j < grp.members.size(); ++j) {
        if (j == skip) continue;
        if (near_tol(grp.betas[j], beta, kProportionalTol) &&
            near_tol(net.bias.at(grp.members[j]), gamma, kProportionalTol))
          return j;
      }
      return std::nullopt;
    };

    for (std::size_t i = 0; i < grp.members.size(); ++i) {
      double beta = grp.betas[i];
      double theta = net.bias.at(grp.members[i]);
      struct Variant {
        double alpha_a;
        std::vector<SymTerm> cands;  // (alpha, beta, gamma) of the other slots
      };
      std::vector<Variant> variants = {
          {1.0, {{-0.5, 2 * beta, 2 * theta}, {-0.5, 2 * beta, 2 * theta - 1}}},
          {-0.5, {{1.0, beta / 2, theta / 2}, {-0.5, beta, theta - 1}}},
          {-0.5, {{1.0, beta / 2, (theta + 1) / 2}, {-0.5, beta, theta + 1}}},
      };
      for (const auto& var : variants) {
        ModificationPlan plan;
        plan.a_nodes = {grp.members[i]};
        plan.a_alphas = {var.alpha_a};
        bool skip = false;
        for (const auto& c : var.cands) {
          auto j = find_member(i, c.beta, c.gamma);
          if (j) {
            plan.b_nodes.push_back(grp.members[*j]);
            plan.b_alphas.push_back(c.alpha);
          } else {
            plan.c_terms.push_back({next_id(), c.alpha, c.beta, c.gamma});
          }
        }
        if (plan.c_terms.empty()) skip = true;
        if (!skip) moves.push_back(std::move(plan));
      }
    }

    for (std::size_t i = 0; i < grp.members.size(); ++i)
      for (std::size_t j = 0; j < grp.members.size(); ++j) {
        if (i == j) continue;
        double bi = grp.betas[i], ti = net.bias.at(grp.members[i]);
        if (!near_tol(grp.betas[j], bi, kProportionalTol)) continue;
        if (!near_tol(net.bias.at(grp.members[j]), ti - 1, kProportionalTol)) continue;
        double cb = bi / 2, cg = ti / 2;
        bool taken = false;
        for (std::size_t k = 0; k < grp.members.size(); ++k)
          if (k != i && k != j && near_tol(grp.betas[k], cb, kProportionalTol) &&
              near_tol(net.bias.at(grp.members[k]), cg, kProportionalTol))
            taken = true;
        if (taken) continue;  // merged term already present; C would be empty
        ModificationPlan plan;
        plan.a_nodes = {grp.members[i], grp.members[j]};
        plan.a_alphas = {-0.5, -0.5};
        plan.c_terms.push_back({next_id(), 1.0, cb, cg});
        moves.push_back(std::move(plan));
      }
  }
  return moves;
}

}  // namespace

RhoIsoResult rho_isomorphic_bounded(const Network& a, const Network& b, int budget) {
  if (!regularity_report(a).regular)
    throw std::invalid_argument("first network is not regular");
  if (!regularity_report(b).regular)
    throw std::invalid_argument("second network is not regular");

  RhoIsoResult res;
  if (!(a.rho == b.rho)) {
    res.status = SearchStatus::None;
    res.detail = "different nonlinearities";
    return res;
  }

  const bool flips = a.rho.kind == RhoKind::Tanh;
  auto direct = sign_iso_search(a, b, kSignIsoTol, flips);
  if (direct.status == SearchStatus::Found) {
    res.status = SearchStatus::Found;
    res.join = direct.witness;
    res.detail = "sign-isomorphic";
    return res;
  }
  if (direct.status == SearchStatus::OverBudget) {
    res.status = SearchStatus::OverBudget;
    res.detail = "node budget exceeded";
    return res;
  }
  if (a.rho.kind == RhoKind::Tanh) {
    res.status = SearchStatus::None;
    res.detail = "tanh isomorphism coincides with sign-isomorphism";
    return res;
  }
  if (a.rho.kind == RhoKind::Zab) {
    res.status = SearchStatus::OverBudget;
    res.detail = "series rewrites beyond sign-isomorphism are not searched";
    return res;
  }

  struct State {
    Network net;
    std::vector<ChainStep> chain;
  };
  const std::size_t node_cap = std::max(all_nodes(a).size(), all_nodes(b).size()) + 2;
  const int expansion_cap = 512;
  int expansions = 0;
  int fresh = 0;
  bool truncated = false;

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<Network>> seen;
  auto remember = [&](const Network& net) {
    auto key = std::make_tuple(net.bias.size(), edge_count(net), net.outputs.size());
    for (const auto& rep : seen[key])
      if (sign_iso_search(net, rep, kSignIsoTol, false).status == SearchStatus::Found)
        return false;
    seen[key].push_back(net);
    return true;
  };
  remember(a);

  std::deque<State> frontier;
  frontier.push_back({a, {}});
  for (int depth = 1; depth <= budget && !frontier.empty() && !truncated; ++depth) {
    std::deque<State> next;
    while (!frontier.empty()) {
      State state = std::move(frontier.front());
      frontier.pop_front();
      if (++expansions > expansion_cap) {
        truncated = true;
        break;
      }
      for (const auto& plan : crelu_moves(state.net, fresh)) {
        Network result;
        try {
          result = apply_modification(state.net, plan);
        } catch (const std::invalid_argument&) {
          continue;
        }
        if (all_nodes(result).size() > node_cap) {
          truncated = true;
          continue;
        }
        if (!regularity_report(result).regular) continue;
        if (!remember(result)) continue;
        std::vector<ChainStep> chain = state.chain;
        chain.push_back({plan, network_hash(result)});
        auto join = sign_iso_search(result, b, kSignIsoTol, false);
        if (join.status == SearchStatus::Found) {
          res.status = SearchStatus::Found;
          res.chain = std::move(chain);
          res.join = join.witness;
          res.detail = "found at depth " + std::to_string(depth);
          return res;
        }
        next.push_back({std::move(result), std::move(chain)});
      }
    }
    frontier = std::move(next);
  }

  res.status = truncated ? SearchStatus::OverBudget : SearchStatus::None;
  res.detail = truncated ? "search truncated by state caps"
                         : "no rewrite chain within budget";
  return res;
}

}  // namespace ffsym
