#include "ffsym/evaluate.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace ffsym {

namespace {

template <typename Scalar, typename RhoEval>
std::map<NodeId, Scalar> eval_all(const Network& net, const std::map<NodeId, Scalar>& at,
                                  RhoEval&& apply_rho) {
  for (const auto& v : net.inputs)
    if (!at.count(v)) throw std::invalid_argument("missing input value for '" + v + "'");
  std::map<NodeId, Scalar> val;
  std::function<Scalar(const NodeId&)> go = [&](const NodeId& u) -> Scalar {
    auto it = val.find(u);
    if (it != val.end()) return it->second;
    Scalar v;
    if (net.inputs.count(u)) {
      v = at.at(u);
    } else {
      Scalar pre = Scalar(net.bias.at(u));
      for (const auto& [p, w] : parents_of(net, u)) pre += w * go(p);
      v = apply_rho(pre);
    }
    val[u] = v;
    return v;
  };
  for (const auto& u : all_nodes(net)) go(u);
  return val;
}

}  // namespace

std::map<NodeId, double> eval_nodes(const Network& net, const std::map<NodeId, double>& at) {
  return eval_all<double>(net, at, [&](double pre) { return eval_real(net.rho, pre); });
}

std::vector<double> eval_map(const Network& net, const std::map<NodeId, double>& at) {
  auto val = eval_nodes(net, at);
  std::vector<double> out(net.constants);
  for (const auto& [w, scal] : net.outputs)
    for (int r = 0; r < net.dim_out; ++r) out[r] += scal[r] * val.at(w);
  return out;
}

ComplexMapResult eval_map_complex(const Network& net,
                                  const std::map<NodeId, std::complex<double>>& at) {
  ComplexMapResult res;
  auto val = eval_all<std::complex<double>>(net, at, [&](std::complex<double> pre) {
    ComplexEval ce = eval_complex(net.rho, pre);
    if (ce.near_pole) res.near_pole = true;
    return ce.value;
  });
  res.values.assign(net.constants.begin(), net.constants.end());
  for (const auto& [w, scal] : net.outputs)
    for (int r = 0; r < net.dim_out; ++r) res.values[r] += scal[r] * val.at(w);
  return res;
}

std::vector<std::map<NodeId, double>> eval_grid(const Network& net, int grid_size,
                                                uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::vector<std::map<NodeId, double>> grid(grid_size);
  for (auto& point : grid)
    for (const auto& v : net.inputs) point[v] = dist(rng);
  return grid;
}

ZeroProbeResult zero_map_probe(const Network& net, int grid_size, uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  ZeroProbeResult res;
  res.points = grid_size;
  for (int i = 0; i < grid_size; ++i) {
    std::map<NodeId, double> at;
    for (const auto& v : net.inputs) at[v] = dist(rng);
    for (double y : eval_map(net, at)) res.max_abs = std::max(res.max_abs, std::fabs(y));
  }
  res.zero_on_grid = res.max_abs < 1e-9;
  return res;
}

double map_deviation(const Network& a, const Network& b, int grid_size, uint32_t seed) {
  if (a.inputs != b.inputs) throw std::invalid_argument("networks have different input sets");
  if (a.dim_out != b.dim_out) throw std::invalid_argument("networks have different dim_out");
  double worst = 0.0;
  for (const auto& point : eval_grid(a, grid_size, seed)) {
    auto ya = eval_map(a, point);
    auto yb = eval_map(b, point);
    for (int r = 0; r < a.dim_out; ++r) worst = std::max(worst, std::fabs(ya[r] - yb[r]));
  }
  return worst;
}

}  // namespace ffsym
