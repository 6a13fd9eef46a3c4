#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ffsym/complexan.hpp"
#include "ffsym/evaluate.hpp"
#include "ffsym/rewrite.hpp"

namespace ffsym {

namespace {

bool lex_less(std::complex<double> a, std::complex<double> b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double max_magnitude(const ComplexMapResult& r) {
  double mag = 0.0;
  for (const auto& v : r.values) mag = std::max(mag, std::abs(v));
  return mag;
}

double value_jump(const ComplexMapResult& a, const ComplexMapResult& b) {
  double d = 0.0;
  for (std::size_t c = 0; c < a.values.size() && c < b.values.size(); ++c)
    d = std::max(d, std::abs(a.values[c] - b.values[c]));
  return d;
}

}  // namespace

DepthScanReport empirical_cluster_vs_depth(const Network& net, double window,
                                           const std::vector<double>& schedule, int m) {
  auto violations = validate(net);
  if (!violations.empty())
    throw std::invalid_argument("invalid network: " + violations.front());
  if (net.inputs.size() != 1)
    throw std::invalid_argument("network must have a single input");
  if (!is_meromorphic(net.rho))
    throw std::invalid_argument("nonlinearity has no complex extension with poles");
  if (schedule.empty()) throw std::invalid_argument("empty epsilon schedule");
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  if (!regularity_report(net).regular) throw std::invalid_argument("network is not regular");

  auto lv = levels(net);
  int network_depth = 0;
  for (const auto& [u, _] : net.bias) network_depth = std::max(network_depth, lv.at(u));
  if (network_depth > 3) throw std::invalid_argument("depth budget exceeded");

  const NodeId& t = *net.inputs.begin();
  DepthScanReport report;
  report.network_depth = network_depth;
  auto probe = [&](std::complex<double> z) {
    ++report.grid_evals;
    return eval_map_complex(net, {{t, z}});
  };

  const double kFlagThreshold = 100.0;
  const double kResidueGate = 5e-4;
  const int kCoarse = 128;
  double h = 2.0 * window / kCoarse;

  std::vector<ComplexMapResult> grid;
  grid.reserve(std::size_t(kCoarse) * kCoarse);
  for (int i = 0; i < kCoarse; ++i) {
    double x = -window + (i + 0.5) * h;
    for (int j = 0; j < kCoarse; ++j) {
      double y = -window + (j + 0.5) * h;
      grid.push_back(probe({x, y}));
    }
  }

  // A pole makes adjacent samples differ violently long before any fixed
  // magnitude cut fires, and near the singularity accumulations of composed
  // maps the residues shrink so fast that a magnitude cut never fires at all.
  // Gate on the jump between neighbors, calibrated against its median.
  std::vector<double> jump_pool;
  jump_pool.reserve(2u * kCoarse * (kCoarse - 1));
  for (int i = 0; i < kCoarse; ++i)
    for (int j = 0; j + 1 < kCoarse; ++j) {
      jump_pool.push_back(value_jump(grid[i * kCoarse + j], grid[i * kCoarse + j + 1]));
      jump_pool.push_back(value_jump(grid[j * kCoarse + i], grid[(j + 1) * kCoarse + i]));
    }
  std::nth_element(jump_pool.begin(), jump_pool.begin() + jump_pool.size() / 2,
                   jump_pool.end());
  const double jump_gate = std::max(0.5, 8.0 * jump_pool[jump_pool.size() / 2]);

  std::vector<char> mark(grid.size(), 0);
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    if (grid[idx].near_pole || max_magnitude(grid[idx]) > kFlagThreshold) mark[idx] = 1;
  for (int i = 0; i < kCoarse; ++i)
    for (int j = 0; j < kCoarse; ++j) {
      if (j + 1 < kCoarse &&
          value_jump(grid[i * kCoarse + j], grid[i * kCoarse + j + 1]) > jump_gate) {
        mark[i * kCoarse + j] = 1;
        mark[i * kCoarse + j + 1] = 1;
      }
      if (i + 1 < kCoarse &&
          value_jump(grid[i * kCoarse + j], grid[(i + 1) * kCoarse + j]) > jump_gate) {
        mark[i * kCoarse + j] = 1;
        mark[(i + 1) * kCoarse + j] = 1;
      }
    }
  std::vector<std::complex<double>> flagged;
  for (int i = 0; i < kCoarse; ++i)
    for (int j = 0; j < kCoarse; ++j)
      if (mark[i * kCoarse + j])
        flagged.push_back({-window + (i + 0.5) * h, -window + (j + 0.5) * h});
  grid.clear();
  grid.shrink_to_fit();

  const std::size_t kLevelCap = 32768;
  for (int level = 0; level < 3; ++level) {
    h /= 4.0;
    // Near a singularity accumulation the map saturates except in a thin
    // band around the poles, so neighbor jumps stop growing with depth and
    // a fixed gate starves the fine rings while a gate proportional to the
    // spacing re-flags a whole disc around every strong pole. Gating on
    // jump * spacing instead asks whether a simple pole explaining the jump
    // would have residue at least kResidueGate; its flag radius shrinks
    // with the spacing for strong poles and still admits weak rings.
    const double level_gate = kResidueGate / h;
    if (flagged.size() > kLevelCap) {
      // Thin evenly across the sorted cloud instead of truncating, so a
      // large flagged region keeps coverage everywhere rather than only at
      // its low corner.
      std::sort(flagged.begin(), flagged.end(), lex_less);
      std::vector<std::complex<double>> thinned;
      thinned.reserve(kLevelCap);
      for (std::size_t i = 0; i < kLevelCap; ++i)
        thinned.push_back(flagged[(i * flagged.size()) / kLevelCap]);
      flagged = std::move(thinned);
    }
    std::vector<std::complex<double>> next;
    for (const auto& z : flagged) {
      ComplexMapResult cell[4][4];
      bool keep[4][4] = {};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          std::complex<double> p = z + std::complex<double>((a - 1.5) * h, (b - 1.5) * h);
          cell[a][b] = probe(p);
          if (cell[a][b].near_pole || max_magnitude(cell[a][b]) > kFlagThreshold)
            keep[a][b] = true;
        }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (a + 1 < 4 && value_jump(cell[a][b], cell[a + 1][b]) > level_gate) {
            keep[a][b] = true;
            keep[a + 1][b] = true;
          }
          if (b + 1 < 4 && value_jump(cell[a][b], cell[a][b + 1]) > level_gate) {
            keep[a][b] = true;
            keep[a][b + 1] = true;
          }
        }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (keep[a][b])
            next.push_back(z + std::complex<double>((a - 1.5) * h, (b - 1.5) * h));
    }
    flagged = std::move(next);
  }
  const double h_final = h;

  // Polish each candidate by fitting the local pole model O ~ r/(z-p) + B
  // through three samples. The fit recovers p exactly for an isolated simple
  // pole on a flat background, so it homes in from roughly half the distance
  // to the nearest neighboring pole, where Newton on 1/O stalls once the
  // background swamps the pole term.
  PointCloud sing;
  for (const auto& start : flagged) {
    std::complex<double> z = start;
    bool accepted = false;
    for (int iter = 0; iter < 24; ++iter) {
      auto r0 = probe(z);
      if (r0.near_pole || max_magnitude(r0) > kBlowupThreshold) {
        accepted = true;
        break;
      }
      int coord = 0;
      for (int c = 1; c < net.dim_out; ++c)
        if (std::abs(r0.values[c]) > std::abs(r0.values[coord])) coord = c;
      double hstep = std::max(h_final * 0.125, 1e-9);
      auto r1 = probe(z + hstep);
      if (r1.near_pole) {
        z = z + hstep;
        accepted = true;
        break;
      }
      auto r2 = probe(z + std::complex<double>(0.0, hstep));
      if (r2.near_pole) {
        z = z + std::complex<double>(0.0, hstep);
        accepted = true;
        break;
      }
      std::complex<double> d01 = r0.values[coord] - r1.values[coord];
      std::complex<double> d02 = r0.values[coord] - r2.values[coord];
      if (std::abs(d01) < 1e-12 && std::abs(d02) < 1e-12) break;
      if (std::abs(d02) < 1e-300) break;
      std::complex<double> ratio = d01 / d02;
      std::complex<double> denom =
          ratio * std::complex<double>(0.0, 1.0) - std::complex<double>(1.0, 0.0);
      if (std::abs(denom) < 1e-300) break;
      std::complex<double> step =
          std::complex<double>(0.0, hstep) * (std::complex<double>(1.0, 0.0) - ratio) / denom;
      if (std::abs(step) > 8.0 * h_final) break;
      z -= step;
      if (std::fabs(z.real()) > window + 1.0 || std::fabs(z.imag()) > window + 1.0) break;
    }
    if (accepted) sing.push_back(z);
  }

  std::sort(sing.begin(), sing.end(), lex_less);
  PointCloud kept;
  for (const auto& p : sing) {
    bool close = false;
    for (const auto& q : kept)
      if (std::abs(p - q) <= h_final / 2.0) close = true;
    if (!close) kept.push_back(p);
  }
  report.singularities = kept;

  for (double eps : schedule)
    if (eps >= 16.0 * h_final) report.effective_schedule.push_back(eps);
  if (report.effective_schedule.empty())
    report.effective_schedule.push_back(*std::max_element(schedule.begin(), schedule.end()));

  auto cluster = cluster_depth(kept, report.effective_schedule, m);
  report.depths = cluster.depths;
  report.stabilized = cluster.stabilized;
  report.cluster_value = cluster.value;

  report.matches_depth = report.cluster_value == report.network_depth;
  return report;
}

}  // namespace ffsym
