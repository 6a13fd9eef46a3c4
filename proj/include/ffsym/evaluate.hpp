#pragma once

#include <complex>
#include <map>
#include <vector>

#include "ffsym/network.hpp"

namespace ffsym {

// Output map at a real input assignment (one value per input node).
// Throws std::invalid_argument if the assignment misses an input.
std::vector<double> eval_map(const Network& net, const std::map<NodeId, double>& at);

// All node values at an assignment, keyed by node id.
std::map<NodeId, double> eval_nodes(const Network& net, const std::map<NodeId, double>& at);

struct ComplexMapResult {
  std::vector<std::complex<double>> values;
  bool near_pole = false;  // some node evaluation passed within the pole guard
};

ComplexMapResult eval_map_complex(const Network& net,
                                  const std::map<NodeId, std::complex<double>>& at);

struct ZeroProbeResult {
  double max_abs = 0.0;
  bool zero_on_grid = false;
  int points = 0;
};

// Probes the map on seeded uniform points in [-10, 10]^inputs; the map
// counts as zero on the grid when max |output| < 1e-9.
ZeroProbeResult zero_map_probe(const Network& net, int grid_size, uint32_t seed);

// Deterministic evaluation grid shared by map-preservation checks:
// grid_size seeded uniform points in [-5, 5]^inputs.
std::vector<std::map<NodeId, double>> eval_grid(const Network& net, int grid_size, uint32_t seed);

// Max output deviation between two networks over the same input ids.
// Throws std::invalid_argument if input sets or dim_out differ.
double map_deviation(const Network& a, const Network& b, int grid_size, uint32_t seed);

}  // namespace ffsym
