#include "ffsym/complexan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ffsym/evaluate.hpp"
#include "ffsym/rewrite.hpp"

namespace ffsym {

namespace {

bool lex_less(std::complex<double> a, std::complex<double> b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Vertical pole columns of rho (real parts) and their row spacing.
std::vector<double> rho_columns(const Nonlinearity& rho) {
  if (rho.kind == RhoKind::Tanh) return {0.0};
  std::vector<double> cols;
  for (const auto& [k, c] : rho.zab.coeffs)
    if (c != 0.0) cols.push_back(rho.zab.a * k);
  return cols;
}

double rho_band(const Nonlinearity& rho) {
  return rho.kind == RhoKind::Tanh ? kPi : rho.zab.b;
}

std::vector<Pole> gather_term_poles(const Nonlinearity& rho, const std::vector<SymTerm>& terms,
                                    double window) {
  std::vector<Pole> raw;
  for (const auto& term : terms) {
    if (term.beta == 0.0) continue;
    double cover = std::fabs(term.beta) * window + std::fabs(term.gamma) + 1.0;
    for (const auto& p : pole_lattice(rho, cover)) {
      std::complex<double> z = (p.position - term.gamma) / term.beta;
      if (std::fabs(z.real()) > window + 1e-9 || std::fabs(z.imag()) > window + 1e-9) continue;
      raw.push_back({z, term.alpha * p.residue / term.beta});
    }
  }
  return raw;
}

std::vector<Pole> merge_by_position(std::vector<Pole> raw, double pos_tol) {
  std::sort(raw.begin(), raw.end(),
            [](const Pole& a, const Pole& b) { return lex_less(a.position, b.position); });
  std::vector<Pole> merged;
  for (const auto& p : raw) {
    // Coincident poles from different terms can straddle entries with other
    // imaginary parts in (Re, Im) order, so scan the whole Re window.
    bool absorbed = false;
    for (std::size_t k = merged.size(); k-- > 0;) {
      if (merged[k].position.real() < p.position.real() - pos_tol) break;
      if (std::abs(p.position - merged[k].position) <= pos_tol) {
        merged[k].residue += p.residue;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(p);
  }
  return merged;
}

}  // namespace

std::vector<Pole> poles_in_window(const Nonlinearity& rho, const std::vector<SymTerm>& terms,
                                  double window) {
  if (!is_meromorphic(rho)) return {};
  auto merged = merge_by_position(gather_term_poles(rho, terms, window), 1e-9);
  std::vector<Pole> out;
  for (const auto& p : merged)
    if (std::abs(p.residue) >= 1e-12) out.push_back(p);
  return out;
}

double density_along(const PointCloud& cloud, const LineSpec& line, double eps, double window) {
  double norm = std::abs(line.direction);
  if (norm == 0.0) throw std::invalid_argument("line direction must be nonzero");
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  std::complex<double> d = line.direction / norm;
  int count = 0;
  for (const auto& p : cloud) {
    if (std::abs(p) > window) continue;
    double dist = std::fabs(std::imag((p - line.point) * std::conj(d)));
    if (dist <= eps) ++count;
  }
  return count / (2.0 * window);
}

double density_along(const PointCloud& cloud, const PointCloud& reference, double eps,
                     double window) {
  if (window <= 0.0) throw std::invalid_argument("window must be positive");
  int count = 0;
  for (const auto& p : cloud) {
    if (std::abs(p) > window) continue;
    for (const auto& f : reference)
      if (std::abs(p - f) <= eps) {
        ++count;
        break;
      }
  }
  return count / (2.0 * window);
}

PointCloud cluster_level(const PointCloud& cloud, double eps, int m) {
  PointCloud occ;
  for (const auto& p : cloud) {
    int count = 0;
    for (const auto& q : cloud)
      if (std::abs(q - p) <= eps) ++count;
    if (count >= m) occ.push_back(p);
  }

  std::vector<int> comp(occ.size(), -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = ncomp;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < occ.size(); ++j)
        if (comp[j] < 0 && std::abs(occ[j] - occ[cur]) <= eps) {
          comp[j] = ncomp;
          stack.push_back(j);
        }
    }
    ++ncomp;
  }

  PointCloud reps(ncomp, {1e308, 1e308});
  for (std::size_t i = 0; i < occ.size(); ++i)
    if (lex_less(occ[i], reps[comp[i]])) reps[comp[i]] = occ[i];
  std::sort(reps.begin(), reps.end(), lex_less);
  return reps;
}

int cluster_depth_eps(const PointCloud& cloud, double eps, int m) {
  PointCloud pts(cloud);
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  int depth = 0;
  while (!pts.empty()) {
    ++depth;
    PointCloud next = cluster_level(pts, eps, m);
    if (next == pts) break;  // stationary; only possible for m below 2
    pts = std::move(next);
  }
  return depth;
}

std::vector<double> default_eps_schedule() {
  std::vector<double> schedule;
  for (int j = 0; j <= 6; ++j) schedule.push_back(0.5 * std::pow(2.0, -j));
  return schedule;
}

ClusterReport cluster_depth(const PointCloud& cloud, const std::vector<double>& schedule,
                            int m) {
  if (schedule.empty()) throw std::invalid_argument("empty epsilon schedule");
  ClusterReport report;
  report.schedule = schedule;
  for (double eps : schedule) report.depths.push_back(cluster_depth_eps(cloud, eps, m));
  std::size_t n = report.depths.size();
  report.stabilized = n >= 2 && report.depths[n - 1] == report.depths[n - 2];
  report.value = report.depths.back();
  return report;
}

std::optional<std::pair<long long, long long>> rational_approx(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  double target = std::fabs(x);
  long long sign = x < 0 ? -1 : 1;
  if (target > 1e12) return std::nullopt;

  long long p_prev = 1, q_prev = 0;
  long long p_prev2 = 0, q_prev2 = 1;
  double t = target;
  for (int iter = 0; iter < 64; ++iter) {
    double fa = std::floor(t);
    long long a = (long long)fa;
    long long p = a * p_prev + p_prev2;
    long long q = a * q_prev + q_prev2;
    if (q > 1000000 || p > (long long)4e15 || p < 0 || q < 0) return std::nullopt;
    double frac = t - fa;
    // Accept only a terminating expansion (the next partial quotient blows
    // up); steadily continuing fractions are irrational within the cap, even
    // though deep convergents would pass a bare residual test.
    if (frac < 1e-4) {
      if (std::fabs(target - double(p) / double(q)) < 1e-9)
        return std::make_pair(sign * p, q);
      return std::nullopt;
    }
    t = 1.0 / frac;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
  }
  return std::nullopt;
}

PartitionReport alignment_partition(const Nonlinearity& rho, const std::vector<SymTerm>& terms) {
  if (!is_meromorphic(rho))
    throw std::invalid_argument("nonlinearity has no poles to align");

  int n = int(terms.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  auto unite = [&](int i, int j) { parent[find(i)] = find(j); };

  auto cols = rho_columns(rho);
  std::vector<std::vector<double>> lines(n);
  for (int i = 0; i < n; ++i) {
    if (terms[i].beta == 0.0) continue;
    for (double c : cols) lines[i].push_back((c - terms[i].gamma) / terms[i].beta);
  }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (terms[i].beta == 0.0 || terms[j].beta == 0.0) continue;
      if (!rational_approx(terms[i].beta / terms[j].beta)) continue;
      bool shared = false;
      for (double xi : lines[i])
        for (double xj : lines[j])
          if (std::fabs(xi - xj) <= 1e-9) shared = true;
      if (shared) unite(i, j);
    }

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> parts;
  for (auto& [_, g] : groups) parts.push_back(g);
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  double band = rho_band(rho);
  auto part_window = [&](const std::vector<int>& idx) {
    double w = 1.0;
    double spacing = 0.0;
    for (int i : idx) {
      if (terms[i].beta == 0.0) continue;
      double far = 0.0;
      for (double x : lines[i]) far = std::max(far, std::fabs(x));
      spacing = std::max(spacing, band / std::fabs(terms[i].beta));
      w = std::max(w, far + 3.0 * band / std::fabs(terms[i].beta) + 1.0);
    }
    return std::max(w, 10.0 * spacing);
  };

  PartitionReport report;
  for (const auto& g : parts) {
    PartitionPart part;
    part.term_indices = g;
    std::vector<SymTerm> sub;
    for (int i : g)
      if (terms[i].beta != 0.0) sub.push_back(terms[i]);
    part.residues_cancel =
        sub.empty() || poles_in_window(rho, sub, part_window(g)).empty();
    report.parts.push_back(std::move(part));
  }
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  report.combination_entire = poles_in_window(rho, terms, part_window(all)).empty();
  return report;
}

SingleLayerPoleReport single_layer_pole_check(const Network& net, double window,
                                              int out_coord) {
  auto violations = validate(net);
  if (!violations.empty())
    throw std::invalid_argument("invalid network: " + violations.front());
  if (net.inputs.size() != 1)
    throw std::invalid_argument("network must have a single input");
  if (!is_meromorphic(net.rho))
    throw std::invalid_argument("nonlinearity has no complex extension with poles");
  if (out_coord < 0 || out_coord >= net.dim_out)
    throw std::invalid_argument("output coordinate out of range");
  for (const auto& [u, _] : net.bias)
    for (const auto& [p, __] : parents_of(net, u))
      if (!is_input(net, p))
        throw std::invalid_argument("network is not layered at depth one");
  if (!regularity_report(net).regular)
    throw std::invalid_argument("network is not regular");

  const NodeId& t = *net.inputs.begin();
  std::vector<SymTerm> terms;
  for (const auto& [w, scal] : net.outputs) {
    if (scal[out_coord] == 0.0) continue;
    terms.push_back({scal[out_coord], parents_of(net, w).at(t), net.bias.at(w)});
  }

  SingleLayerPoleReport report;
  auto merged = merge_by_position(gather_term_poles(net.rho, terms, window), 1e-9);
  for (const auto& p : merged) {
    double mag = std::abs(p.residue);
    if (mag < 1e-10)
      ++report.pruned;
    else if (mag < 1e-8)
      report.ambiguous.push_back(p);
    else
      report.confirmed.push_back(p);
  }

  const std::complex<double> dir(0.7071067811865476, 0.7071067811865476);
  report.all_confirmed = true;
  for (const auto& pole : report.confirmed) {
    bool blew_up = false;
    for (double delta = 1e-2; delta > 4e-10; delta *= 0.1) {
      auto r = eval_map_complex(net, {{t, pole.position + delta * dir}});
      if (r.near_pole || std::abs(r.values[out_coord]) > kBlowupThreshold) {
        blew_up = true;
        break;
      }
    }
    report.all_confirmed = report.all_confirmed && blew_up;
  }
  return report;
}

}  // namespace ffsym
