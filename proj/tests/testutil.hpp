#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ffsym/evaluate.hpp"
#include "ffsym/network.hpp"
#include "ffsym/serialization.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(FFSYM_SOURCE_DIR) + "/data/fixtures/" + name;
}

inline ffsym::Network load_fixture(const std::string& name) {
  return ffsym::load_network_file(fixture_path(name));
}

struct NetBuilder {
  ffsym::Network net;

  explicit NetBuilder(ffsym::Nonlinearity rho, int dim_out = 1) {
    net.rho = std::move(rho);
    net.dim_out = dim_out;
    net.constants.assign(dim_out, 0.0);
  }
  NetBuilder& input(const ffsym::NodeId& id) {
    net.inputs.insert(id);
    return *this;
  }
  NetBuilder& node(const ffsym::NodeId& id, double bias) {
    net.bias[id] = bias;
    return *this;
  }
  NetBuilder& edge(const ffsym::NodeId& from, const ffsym::NodeId& to, double w) {
    net.in_edges[to][from] = w;
    return *this;
  }
  NetBuilder& output(const ffsym::NodeId& id, std::vector<double> scalars) {
    net.outputs[id] = std::move(scalars);
    return *this;
  }
  NetBuilder& constant(int r, double value) {
    net.constants[r] = value;
    return *this;
  }
  ffsym::Network build() const { return net; }
};

inline double rand_in(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rand_weight(std::mt19937& rng) {
  double w = rand_in(rng, 0.5, 2.0);
  return rng() % 2 ? w : -w;
}

// Random connected network: layered inputs -> hidden chain with skips, the
// childless hidden nodes read out. Generic parameters, so almost surely
// regular.
inline ffsym::Network random_net(std::mt19937& rng, ffsym::Nonlinearity rho, int n_inputs,
                                 int n_hidden, int dim_out = 1) {
  NetBuilder b(std::move(rho), dim_out);
  std::vector<ffsym::NodeId> pool;
  for (int i = 0; i < n_inputs; ++i) {
    ffsym::NodeId id = "t" + std::to_string(i);
    b.input(id);
    pool.push_back(id);
  }
  std::vector<ffsym::NodeId> hidden;
  for (int i = 0; i < n_hidden; ++i) {
    ffsym::NodeId id = "h" + std::to_string(i);
    b.node(id, rand_in(rng, -1.5, 1.5));
    b.edge(pool[rng() % pool.size()], id, rand_weight(rng));
    for (const auto& p : pool)
      if (rng() % 3 == 0 && !b.net.in_edges[id].count(p)) b.edge(p, id, rand_weight(rng));
    pool.push_back(id);
    hidden.push_back(id);
  }
  auto children = ffsym::children_map(b.build());
  for (const auto& h : hidden) {
    bool childless = children.at(h).empty();
    if (childless || rng() % 3 == 0) {
      std::vector<double> scal(dim_out, 0.0);
      for (int r = 0; r < dim_out; ++r) scal[r] = rand_weight(rng);
      b.output(h, scal);
    }
  }
  for (int r = 0; r < dim_out; ++r) b.constant(r, rand_in(rng, -1.0, 1.0));
  return b.build();
}

// Renames hidden nodes and flips per-node signs; the result is
// sign-isomorphic to the original by construction.
inline ffsym::Network scramble_signs(const ffsym::Network& net, std::mt19937& rng) {
  std::vector<ffsym::NodeId> hidden;
  for (const auto& [v, _] : net.bias) hidden.push_back(v);
  std::vector<int> perm(hidden.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::map<ffsym::NodeId, ffsym::NodeId> pi;
  std::map<ffsym::NodeId, int> sign;
  for (const auto& v : net.inputs) {
    pi[v] = v;
    sign[v] = 1;
  }
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    pi[hidden[i]] = "m" + std::to_string(perm[i]);
    sign[hidden[i]] = rng() % 2 ? -1 : 1;
  }

  ffsym::Network out;
  out.dim_out = net.dim_out;
  out.rho = net.rho;
  out.inputs = net.inputs;
  out.constants = net.constants;
  for (const auto& [v, bias] : net.bias) out.bias[pi.at(v)] = sign.at(v) * bias;
  for (const auto& [v, ps] : net.in_edges)
    for (const auto& [p, w] : ps)
      out.in_edges[pi.at(v)][pi.at(p)] = sign.at(p) * w * sign.at(v);
  for (const auto& [v, scal] : net.outputs) {
    std::vector<double> s(scal);
    for (auto& x : s) x *= sign.at(v);
    out.outputs[pi.at(v)] = s;
  }
  return out;
}

}  // namespace testutil
