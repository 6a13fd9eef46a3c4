#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ffsym/network.hpp"
#include "ffsym/symmetry.hpp"

namespace ffsym {

// Blow-up acceptance threshold for numerically confirmed singularities.
inline constexpr double kBlowupThreshold = 1e6;

// Poles of sum_s alpha_s rho(beta_s z + gamma_s) inside the square window
// |Re|, |Im| <= window. Coincident positions (within 1e-9) merge their
// residues; merged residues below 1e-12 drop out. Sorted by (Re, Im).
std::vector<Pole> poles_in_window(const Nonlinearity& rho, const std::vector<SymTerm>& terms,
                                  double window);

struct LineSpec {
  std::complex<double> point;
  std::complex<double> direction;  // normalized internally
};

// Fraction (1/2 window) of cloud points with |p| <= window lying within eps
// of the line.
double density_along(const PointCloud& cloud, const LineSpec& line, double eps, double window);

// Same count against a reference point set instead of a line.
double density_along(const PointCloud& cloud, const PointCloud& reference, double eps,
                     double window);

// One clustering level: keep points with at least m cloud neighbors within
// eps (self included), then collapse each eps-connected component to its
// (Re, Im)-lexicographically smallest member.
PointCloud cluster_level(const PointCloud& cloud, double eps, int m = 3);

// Number of levels until the cloud empties.
int cluster_depth_eps(const PointCloud& cloud, double eps, int m = 3);

// Halving schedule 0.5 * 2^-j, j = 0..6.
std::vector<double> default_eps_schedule();

struct ClusterReport {
  std::vector<double> schedule;
  std::vector<int> depths;
  bool stabilized = false;  // last two schedule entries agree
  int value = 0;            // depth at the finest epsilon
};

ClusterReport cluster_depth(const PointCloud& cloud, const std::vector<double>& schedule,
                            int m = 3);

struct PartitionPart {
  std::vector<int> term_indices;
  bool residues_cancel = false;  // sampled pole residues of the subsum vanish
};

struct PartitionReport {
  std::vector<PartitionPart> parts;
  bool combination_entire = false;  // every sampled pole residue cancels
};

// Groups terms whose pole lattices align: rational beta ratio (continued
// fractions, denominator <= 1e6, residual < 1e-9) and a shared vertical
// line, read on the lattices' translation structure.
PartitionReport alignment_partition(const Nonlinearity& rho, const std::vector<SymTerm>& terms);

struct SingleLayerPoleReport {
  std::vector<Pole> confirmed;
  std::vector<Pole> ambiguous;  // merged residue in [1e-10, 1e-8)
  int pruned = 0;               // merged residue below 1e-10
  bool all_confirmed = false;   // every kept pole blew up numerically
};

// Predicts the pole cloud of a depth-one single-input network from its
// read-out terms and confirms each kept pole by approaching it until the
// evaluation exceeds kBlowupThreshold or trips the pole guard.
// Throws std::invalid_argument unless the network is regular, layered depth
// one with a single input, and has a meromorphic rho.
SingleLayerPoleReport single_layer_pole_check(const Network& net, double window,
                                              int out_coord = 0);

struct DepthScanReport {
  PointCloud singularities;
  std::vector<double> effective_schedule;
  std::vector<int> depths;
  bool stabilized = false;
  int cluster_value = 0;
  int network_depth = 0;
  bool matches_depth = false;
  int grid_evals = 0;
};

// Scans |O| of a single-input network over the complex window on a coarse
// grid, refines around blow-ups three times, polishes candidates by Newton
// on 1/O, then clusters the surviving singularities. The epsilon schedule is
// truncated to values the final grid resolution supports.
DepthScanReport empirical_cluster_vs_depth(const Network& net, double window,
                                           const std::vector<double>& schedule, int m = 3);

// Continued-fraction rationality test: p/q with q <= 1e6 and residual < 1e-9.
std::optional<std::pair<long long, long long>> rational_approx(double x);

}  // namespace ffsym
