#include "ffsym/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ffsym/serialization.hpp"
#include "ffsym/util.hpp"

namespace ffsym {

namespace {

bool prop_eq(double x, double y) {
  return std::fabs(x - y) <= kProportionalTol * std::max({1.0, std::fabs(x), std::fabs(y)});
}

std::set<NodeId> parent_ids(const Network& net, const NodeId& u) {
  std::set<NodeId> out;
  for (const auto& [p, _] : parents_of(net, u)) out.insert(p);
  return out;
}

// Shared data for modification validation and application.
struct PlanContext {
  std::set<NodeId> parent_set;
  std::map<NodeId, double> kappa;
  std::set<NodeId> w_set;             // children of A
  std::map<NodeId, double> nu;        // per w
  bool a_in_outputs = false;
  std::vector<double> mu;             // per output coordinate, if a_in_outputs
};

PlanContext validate_plan(const Network& net, const ModificationPlan& plan) {
  if (plan.a_nodes.empty()) throw std::invalid_argument("plan has empty A");
  if (plan.c_terms.empty()) throw std::invalid_argument("plan has empty C");
  if (plan.a_nodes.size() != plan.a_alphas.size() ||
      plan.b_nodes.size() != plan.b_alphas.size())
    throw std::invalid_argument("plan alphas do not pair with nodes");

  std::set<NodeId> ab;
  for (const auto& u : plan.a_nodes) {
    if (!net.bias.count(u)) throw std::invalid_argument("plan node '" + u + "' is not interior");
    if (!ab.insert(u).second) throw std::invalid_argument("duplicate plan node '" + u + "'");
  }
  for (const auto& u : plan.b_nodes) {
    if (!net.bias.count(u)) throw std::invalid_argument("plan node '" + u + "' is not interior");
    if (!ab.insert(u).second) throw std::invalid_argument("duplicate plan node '" + u + "'");
  }
  std::set<NodeId> fresh;
  for (const auto& c : plan.c_terms) {
    if (c.id.empty()) throw std::invalid_argument("empty replacement id");
    if (has_node(net, c.id))
      throw std::invalid_argument("replacement id '" + c.id + "' already exists");
    if (!fresh.insert(c.id).second)
      throw std::invalid_argument("duplicate replacement id '" + c.id + "'");
    if (c.beta == 0.0) throw std::invalid_argument("replacement beta must be nonzero");
    if (c.alpha == 0.0) throw std::invalid_argument("replacement alpha must be nonzero");
  }
  for (double a : plan.a_alphas)
    if (a == 0.0) throw std::invalid_argument("plan alpha must be nonzero");
  for (double a : plan.b_alphas)
    if (a == 0.0) throw std::invalid_argument("plan alpha must be nonzero");

  PlanContext ctx;
  const NodeId& a0 = plan.a_nodes.front();
  ctx.parent_set = parent_ids(net, a0);
  for (const auto& u : plan.a_nodes)
    if (parent_ids(net, u) != ctx.parent_set)
      throw std::invalid_argument("A u B has no common parent set");
  for (const auto& u : plan.b_nodes)
    if (parent_ids(net, u) != ctx.parent_set)
      throw std::invalid_argument("A u B has no common parent set");

  // kappa from the first A node, normalized at the lex-first parent.
  const NodeId& p0 = *ctx.parent_set.begin();
  double beta_a0 = parents_of(net, a0).at(p0);
  for (const auto& [v, w] : parents_of(net, a0)) ctx.kappa[v] = w / beta_a0;
  auto check_proportional = [&](const NodeId& u) {
    double beta_u = parents_of(net, u).at(p0);
    for (const auto& [v, w] : parents_of(net, u))
      if (!prop_eq(w, beta_u * ctx.kappa.at(v)))
        throw std::invalid_argument("weights into '" + u + "' are not proportional to kappa");
  };
  for (const auto& u : plan.a_nodes) check_proportional(u);
  for (const auto& u : plan.b_nodes) check_proportional(u);

  // Symmetry over the A u B terms plus the C terms must hold and be minimal.
  AffineSymmetry sym;
  sym.zeta = plan.zeta;
  for (std::size_t i = 0; i < plan.a_nodes.size(); ++i) {
    const auto& u = plan.a_nodes[i];
    sym.terms.push_back({plan.a_alphas[i], parents_of(net, u).at(p0), net.bias.at(u)});
  }
  for (std::size_t i = 0; i < plan.b_nodes.size(); ++i) {
    const auto& u = plan.b_nodes[i];
    sym.terms.push_back({plan.b_alphas[i], parents_of(net, u).at(p0), net.bias.at(u)});
  }
  for (const auto& c : plan.c_terms) sym.terms.push_back({c.alpha, c.beta, c.gamma});
  auto rep = verify_symmetry(net.rho, sym, 1e-8);
  if (!rep.holds)
    throw std::invalid_argument("plan symmetry does not hold (residual " +
                                fmt_double(rep.max_residual) + ")");
  if (!rep.minimal)
    throw std::invalid_argument("plan symmetry is not minimal: " + rep.status);

  // Children of A: every w must see all of A with alpha-proportional weights.
  auto children = children_map(net);
  for (const auto& u : plan.a_nodes)
    for (const auto& w : children.at(u)) ctx.w_set.insert(w);
  double alpha_a0 = plan.a_alphas.front();
  for (const auto& w : ctx.w_set) {
    const auto& ps = parents_of(net, w);
    auto it = ps.find(a0);
    if (it == ps.end())
      throw std::invalid_argument("node '" + w + "' sees only part of A");
    double nu = it->second / alpha_a0;
    for (std::size_t i = 0; i < plan.a_nodes.size(); ++i) {
      auto jt = ps.find(plan.a_nodes[i]);
      if (jt == ps.end())
        throw std::invalid_argument("node '" + w + "' sees only part of A");
      if (!prop_eq(jt->second, nu * plan.a_alphas[i]))
        throw std::invalid_argument("weights out of A into '" + w +
                                    "' are not alpha-proportional");
    }
    ctx.nu[w] = nu;
  }

  // Output membership: A entirely in or entirely out.
  std::size_t in_out = 0;
  for (const auto& u : plan.a_nodes)
    if (net.outputs.count(u)) ++in_out;
  if (in_out != 0 && in_out != plan.a_nodes.size())
    throw std::invalid_argument("A must lie entirely inside or outside the output set");
  ctx.a_in_outputs = in_out == plan.a_nodes.size() && in_out > 0;
  if (ctx.a_in_outputs) {
    ctx.mu.resize(net.dim_out);
    const auto& scal0 = net.outputs.at(a0);
    for (int r = 0; r < net.dim_out; ++r) {
      ctx.mu[r] = scal0[r] / alpha_a0;
      for (std::size_t i = 0; i < plan.a_nodes.size(); ++i) {
        double expected = ctx.mu[r] * plan.a_alphas[i];
        double actual = net.outputs.at(plan.a_nodes[i])[r];
        if (!prop_eq(actual, expected))
          throw std::invalid_argument("output scalars of A are not alpha-proportional");
      }
    }
  }
  return ctx;
}

}  // namespace

std::vector<SiblingGroup> sibling_groups(const Network& net) {
  // Bucket interior nodes by parent set, then split into proportionality
  // classes. Deterministic: maps iterate lexicographically.
  std::map<std::set<NodeId>, std::vector<NodeId>> buckets;
  for (const auto& [u, _] : net.bias) buckets[parent_ids(net, u)].push_back(u);

  std::vector<SiblingGroup> out;
  for (const auto& [pset, members] : buckets) {
    if (pset.empty()) continue;
    const NodeId& p0 = *pset.begin();
    std::vector<SiblingGroup> classes;
    for (const auto& u : members) {
      double beta_u = parents_of(net, u).at(p0);
      bool placed = false;
      for (auto& cls : classes) {
        bool match = true;
        for (const auto& [v, w] : parents_of(net, u))
          if (!prop_eq(w / beta_u, cls.kappa.at(v))) {
            match = false;
            break;
          }
        if (match) {
          cls.members.push_back(u);
          cls.betas.push_back(beta_u);
          placed = true;
          break;
        }
      }
      if (!placed) {
        SiblingGroup cls;
        cls.parents = pset;
        for (const auto& [v, w] : parents_of(net, u)) cls.kappa[v] = w / beta_u;
        cls.members.push_back(u);
        cls.betas.push_back(beta_u);
        classes.push_back(std::move(cls));
      }
    }
    for (auto& cls : classes) out.push_back(std::move(cls));
  }
  return out;
}

std::optional<ReductionWitness> find_reduction(const Network& net, double tol) {
  for (const auto& group : sibling_groups(net)) {
    if (group.members.size() < 2) continue;

    if (net.rho.kind == RhoKind::Tanh) {
      // Pairwise criterion: duplicate or mirrored (beta, bias) pairs.
      for (std::size_t i = 0; i < group.members.size(); ++i) {
        for (std::size_t j = i + 1; j < group.members.size(); ++j) {
          double bi = group.betas[i], bj = group.betas[j];
          double ti = net.bias.at(group.members[i]), tj = net.bias.at(group.members[j]);
          AffineSymmetry sym;
          if (prop_eq(bi, bj) && prop_eq(ti, tj))
            sym = {0.0, {{1.0, bi, ti}, {-1.0, bj, tj}}};
          else if (prop_eq(bi, -bj) && prop_eq(ti, -tj))
            sym = {0.0, {{1.0, bi, ti}, {1.0, bj, tj}}};
          else
            continue;
          if (!verify_symmetry(net.rho, sym, tol).holds) continue;
          ReductionWitness w;
          w.group = {group.members[i], group.members[j]};
          w.removed = group.members[i];
          w.sym = sym;
          w.kappa = group.kappa;
          return w;
        }
      }
      continue;
    }

    std::vector<std::pair<double, double>> terms;
    for (std::size_t i = 0; i < group.members.size(); ++i)
      terms.emplace_back(group.betas[i], net.bias.at(group.members[i]));
    auto disc = discover_symmetry(net.rho, terms, std::nullopt, tol);
    if (disc.status != DiscoveryStatus::Found || disc.support.size() < 2) continue;
    ReductionWitness w;
    for (std::size_t k = 0; k < disc.support.size(); ++k)
      w.group.push_back(group.members[disc.support[k]]);
    w.removed = w.group.front();
    w.sym = *disc.symmetry;
    w.kappa = group.kappa;
    return w;
  }
  return std::nullopt;
}

Network apply_reduction(const Network& net, const ReductionWitness& witness) {
  if (witness.group.size() < 2 || witness.sym.terms.size() != witness.group.size())
    throw std::invalid_argument("witness group and symmetry terms do not pair");
  std::size_t removed_idx = witness.group.size();
  for (std::size_t i = 0; i < witness.group.size(); ++i) {
    const auto& u = witness.group[i];
    if (!net.bias.count(u)) throw std::invalid_argument("witness node '" + u + "' is missing");
    if (u == witness.removed) removed_idx = i;
  }
  if (removed_idx == witness.group.size())
    throw std::invalid_argument("removed node is not part of the witness group");
  std::set<NodeId> pset = parent_ids(net, witness.group.front());
  for (const auto& u : witness.group)
    if (parent_ids(net, u) != pset)
      throw std::invalid_argument("witness group has no common parent set");
  for (std::size_t i = 0; i < witness.group.size(); ++i) {
    const auto& u = witness.group[i];
    const auto& term = witness.sym.terms[i];
    if (!prop_eq(term.gamma, net.bias.at(u)))
      throw std::invalid_argument("witness bias of '" + u + "' does not match");
    for (const auto& [v, w] : parents_of(net, u)) {
      auto it = witness.kappa.find(v);
      if (it == witness.kappa.end())
        throw std::invalid_argument("witness kappa misses parent '" + v + "'");
      if (!prop_eq(w, term.beta * it->second))
        throw std::invalid_argument("weights into '" + u + "' do not match the witness");
    }
  }
  if (!verify_symmetry(net.rho, witness.sym, 1e-8).holds)
    throw std::invalid_argument("witness symmetry does not hold");

  double alpha_star = witness.sym.terms[removed_idx].alpha;
  if (alpha_star == 0.0) throw std::invalid_argument("removed node has zero alpha");
  double zeta = witness.sym.zeta;

  Network out = net;
  auto children = children_map(out);

  for (const auto& w : children.at(witness.removed)) {
    double wv = out.in_edges.at(w).at(witness.removed);
    out.in_edges.at(w).erase(witness.removed);
    out.bias.at(w) += wv * zeta / alpha_star;
    for (std::size_t i = 0; i < witness.group.size(); ++i) {
      if (i == removed_idx) continue;
      const auto& u = witness.group[i];
      double cur = 0.0;
      auto it = out.in_edges.at(w).find(u);
      if (it != out.in_edges.at(w).end()) cur = it->second;
      double next = cur - wv * witness.sym.terms[i].alpha / alpha_star;
      if (std::fabs(next) < kExactZeroTol)
        out.in_edges.at(w).erase(u);
      else
        out.in_edges.at(w)[u] = next;
    }
  }

  auto out_it = out.outputs.find(witness.removed);
  if (out_it != out.outputs.end()) {
    std::vector<double> lam = out_it->second;
    out.outputs.erase(out_it);
    for (std::size_t i = 0; i < witness.group.size(); ++i) {
      if (i == removed_idx) continue;
      const auto& u = witness.group[i];
      std::vector<double> cur(net.dim_out, 0.0);
      auto jt = out.outputs.find(u);
      if (jt != out.outputs.end()) cur = jt->second;
      bool nonzero = false;
      for (int r = 0; r < net.dim_out; ++r) {
        cur[r] -= lam[r] * witness.sym.terms[i].alpha / alpha_star;
        if (std::fabs(cur[r]) >= kExactZeroTol) nonzero = true;
      }
      if (nonzero)
        out.outputs[u] = cur;
      else
        out.outputs.erase(u);
    }
    for (int r = 0; r < net.dim_out; ++r) out.constants[r] += lam[r] * zeta / alpha_star;
  }

  out.bias.erase(witness.removed);
  out.in_edges.erase(witness.removed);

  // Fold nodes that lost all parents into their children as constants.
  for (;;) {
    NodeId lone;
    for (const auto& [u, _] : out.bias)
      if (parents_of(out, u).empty()) {
        lone = u;
        break;
      }
    if (lone.empty()) break;
    double value = eval_real(out.rho, out.bias.at(lone));
    for (auto& [u, ps] : out.in_edges) {
      auto it = ps.find(lone);
      if (it == ps.end()) continue;
      out.bias.at(u) += it->second * value;
      ps.erase(it);
    }
    auto jt = out.outputs.find(lone);
    if (jt != out.outputs.end()) {
      for (int r = 0; r < out.dim_out; ++r) out.constants[r] += jt->second[r] * value;
      out.outputs.erase(jt);
    }
    out.bias.erase(lone);
    out.in_edges.erase(lone);
  }

  return prune_to_non_degenerate(out);
}

ReduceResult reduce_to_regular(const Network& net) {
  auto violations = validate(net);
  if (!violations.empty())
    throw std::invalid_argument("invalid network: " + violations.front());
  ReduceResult res;
  res.net = net;
  for (;;) {
    auto witness = find_reduction(res.net);
    if (!witness) break;
    res.net = apply_reduction(res.net, *witness);
    RewriteLogEntry entry;
    entry.op = "reduce";
    entry.inputs = witness->group;
    entry.result_hash = network_hash(res.net);
    res.log.push_back(std::move(entry));
  }
  return res;
}

RegularityReport regularity_report(const Network& net) {
  RegularityReport rep;
  rep.violations = validate(net);
  rep.valid = rep.violations.empty();
  if (!rep.valid) return rep;
  rep.non_degenerate = non_degenerate(net);
  rep.strongly_non_degenerate = strongly_non_degenerate(net);
  rep.irreducible = !find_reduction(net).has_value();
  rep.regular = rep.non_degenerate && rep.irreducible;
  rep.trivial = is_trivial(net);
  return rep;
}

Network apply_modification(const Network& net, const ModificationPlan& plan) {
  auto violations = validate(net);
  if (!violations.empty())
    throw std::invalid_argument("invalid network: " + violations.front());
  if (find_reduction(net))
    throw std::invalid_argument("host network is reducible");
  PlanContext ctx = validate_plan(net, plan);

  Network out = net;
  for (const auto& u : plan.a_nodes) {
    out.bias.erase(u);
    out.in_edges.erase(u);
    out.outputs.erase(u);
  }
  for (const auto& w : ctx.w_set)
    for (const auto& u : plan.a_nodes) out.in_edges.at(w).erase(u);

  for (const auto& c : plan.c_terms) {
    out.bias[c.id] = c.gamma;
    for (const auto& [v, k] : ctx.kappa) out.in_edges[c.id][v] = c.beta * k;
  }

  for (const auto& w : ctx.w_set) {
    double nu = ctx.nu.at(w);
    out.bias.at(w) += plan.zeta * nu;
    for (const auto& c : plan.c_terms) {
      double weight = -c.alpha * nu;
      if (std::fabs(weight) >= kExactZeroTol) out.in_edges.at(w)[c.id] = weight;
    }
    for (std::size_t i = 0; i < plan.b_nodes.size(); ++i) {
      const auto& u = plan.b_nodes[i];
      double cur = 0.0;
      auto it = out.in_edges.at(w).find(u);
      if (it != out.in_edges.at(w).end()) cur = it->second;
      double next = cur - plan.b_alphas[i] * nu;
      if (std::fabs(next) < kExactZeroTol)
        out.in_edges.at(w).erase(u);
      else
        out.in_edges.at(w)[u] = next;
    }
  }

  if (ctx.a_in_outputs) {
    for (int r = 0; r < out.dim_out; ++r) out.constants[r] += plan.zeta * ctx.mu[r];
    for (const auto& c : plan.c_terms) {
      std::vector<double> scal(out.dim_out);
      bool nonzero = false;
      for (int r = 0; r < out.dim_out; ++r) {
        scal[r] = -c.alpha * ctx.mu[r];
        if (std::fabs(scal[r]) >= kExactZeroTol) nonzero = true;
      }
      if (nonzero) out.outputs[c.id] = scal;
    }
    for (std::size_t i = 0; i < plan.b_nodes.size(); ++i) {
      const auto& u = plan.b_nodes[i];
      std::vector<double> cur(out.dim_out, 0.0);
      auto it = out.outputs.find(u);
      if (it != out.outputs.end()) cur = it->second;
      bool nonzero = false;
      for (int r = 0; r < out.dim_out; ++r) {
        cur[r] -= plan.b_alphas[i] * ctx.mu[r];
        if (std::fabs(cur[r]) >= kExactZeroTol) nonzero = true;
      }
      if (nonzero)
        out.outputs[u] = cur;
      else
        out.outputs.erase(u);
    }
  }

  auto post = validate(out);
  if (!post.empty())
    throw std::logic_error("modification produced an invalid network: " + post.front());
  return out;
}

ModificationPlan invert_modification(const Network& net, const ModificationPlan& plan,
                                     const Network& result) {
  PlanContext ctx = validate_plan(net, plan);
  if (!structural_equal(apply_modification(net, plan), result, 1e-12))
    throw std::invalid_argument("result does not match the plan applied to the network");
  const NodeId& p0 = *ctx.parent_set.begin();
  ModificationPlan inv;
  for (const auto& c : plan.c_terms) {
    inv.a_nodes.push_back(c.id);
    inv.a_alphas.push_back(c.alpha);
  }
  inv.b_nodes = plan.b_nodes;
  inv.b_alphas = plan.b_alphas;
  for (std::size_t i = 0; i < plan.a_nodes.size(); ++i) {
    const auto& u = plan.a_nodes[i];
    inv.c_terms.push_back(
        {u, plan.a_alphas[i], parents_of(net, u).at(p0), net.bias.at(u)});
  }
  inv.zeta = plan.zeta;
  return inv;
}

PlanningResult plan_regular_modification(const Network& net, const ModificationPlan& candidate) {
  PlanningResult res;
  auto rep = regularity_report(net);
  if (!rep.regular) {
    res.detail = "host network is not regular";
    return res;
  }

  // Terms of A u B read off the network.
  if (candidate.a_nodes.empty() || candidate.c_terms.empty()) {
    res.detail = "candidate plan needs nonempty A and C";
    return res;
  }
  for (const auto& u : candidate.a_nodes)
    if (!net.bias.count(u)) {
      res.detail = "candidate node '" + u + "' is not interior";
      return res;
    }
  for (const auto& u : candidate.b_nodes)
    if (!net.bias.count(u)) {
      res.detail = "candidate node '" + u + "' is not interior";
      return res;
    }
  std::set<NodeId> pset = parent_ids(net, candidate.a_nodes.front());
  for (const auto& u : candidate.a_nodes)
    if (parent_ids(net, u) != pset) {
      res.detail = "candidate A u B has no common parent set";
      return res;
    }
  for (const auto& u : candidate.b_nodes)
    if (parent_ids(net, u) != pset) {
      res.detail = "candidate A u B has no common parent set";
      return res;
    }
  const NodeId& p0 = *pset.begin();
  std::vector<std::pair<double, double>> ab_terms;
  for (const auto& u : candidate.a_nodes)
    ab_terms.emplace_back(parents_of(net, u).at(p0), net.bias.at(u));
  for (const auto& u : candidate.b_nodes)
    ab_terms.emplace_back(parents_of(net, u).at(p0), net.bias.at(u));

  // Subsets of the candidate C terms, smallest first, ties by id list.
  int n = int(candidate.c_terms.size());
  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) subset.push_back(i);
    subsets.push_back(std::move(subset));
  }
  std::sort(subsets.begin(), subsets.end(), [&](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& ix = candidate.c_terms[x[i]].id;
      const auto& iy = candidate.c_terms[y[i]].id;
      if (ix != iy) return ix < iy;
    }
    return false;
  });

  std::string last_error = "no subset of the candidate C terms yields a minimal symmetry";
  for (const auto& subset : subsets) {
    std::vector<std::pair<double, double>> bg = ab_terms;
    for (int i : subset)
      bg.emplace_back(candidate.c_terms[i].beta, candidate.c_terms[i].gamma);
    auto disc = discover_symmetry(net.rho, bg);
    if (disc.status != DiscoveryStatus::Found || disc.support.size() != bg.size()) continue;

    ModificationPlan plan;
    plan.zeta = disc.symmetry->zeta;
    std::size_t idx = 0;
    for (const auto& u : candidate.a_nodes) {
      plan.a_nodes.push_back(u);
      plan.a_alphas.push_back(disc.symmetry->terms[idx++].alpha);
    }
    for (const auto& u : candidate.b_nodes) {
      plan.b_nodes.push_back(u);
      plan.b_alphas.push_back(disc.symmetry->terms[idx++].alpha);
    }
    for (int i : subset) {
      const auto& c = candidate.c_terms[i];
      plan.c_terms.push_back({c.id, disc.symmetry->terms[idx++].alpha, c.beta, c.gamma});
    }

    // Absorb into A every B member the rewrite would erase entirely.
    auto children = children_map(net);
    for (;;) {
      PlanContext ctx;
      try {
        ctx = validate_plan(net, plan);
      } catch (const std::invalid_argument& e) {
        last_error = e.what();
        ctx.parent_set.clear();
      }
      if (ctx.parent_set.empty()) break;
      bool moved = false;
      for (std::size_t i = 0; i < plan.b_nodes.size() && !moved; ++i) {
        const auto& u = plan.b_nodes[i];
        if (children.at(u) != ctx.w_set) continue;
        bool erases = true;
        for (const auto& w : ctx.w_set) {
          double cur = parents_of(net, w).count(u) ? parents_of(net, w).at(u) : 0.0;
          if (std::fabs(cur - plan.b_alphas[i] * ctx.nu.at(w)) >= kExactZeroTol) erases = false;
        }
        if (!erases) continue;
        bool u_out = net.outputs.count(u) > 0;
        if (ctx.a_in_outputs != u_out) continue;
        if (ctx.a_in_outputs) {
          for (int r = 0; r < net.dim_out; ++r)
            if (std::fabs(net.outputs.at(u)[r] - plan.b_alphas[i] * ctx.mu[r]) >= kExactZeroTol)
              erases = false;
          if (!erases) continue;
        }
        plan.a_nodes.push_back(u);
        plan.a_alphas.push_back(plan.b_alphas[i]);
        plan.b_nodes.erase(plan.b_nodes.begin() + i);
        plan.b_alphas.erase(plan.b_alphas.begin() + i);
        moved = true;
      }
      if (!moved) break;
    }

    try {
      Network result = apply_modification(net, plan);
      auto result_rep = regularity_report(result);
      if (!result_rep.regular) {
        last_error = "result is not regular";
        continue;
      }
      res.plan = plan;
      res.detail = "ok";
      return res;
    } catch (const std::invalid_argument& e) {
      last_error = e.what();
      continue;
    }
  }
  res.detail = last_error;
  return res;
}

std::string network_hash(const Network& net) {
  return fnv1a64_hex(network_to_json(net).dump());
}

}  // namespace ffsym
