#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive: closed forms, brute-force searches
// and direct counts, sharing only data types with the library.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ffsym/network.hpp"
#include "ffsym/rewrite.hpp"

namespace oracle {

double clip01(double x);

// Closed forms of the worked-example fixtures.
double crelu_chain_map(double t1, double t2);       // all four chain fixtures
double mirrored_pair_map(double t);                 // before reduction
double mirrored_pair_reduced_map(double t);         // after reduction
double constant_fold_map(double t);                 // after folding
double refine_family_map(double t);                 // equals clip01(t) for every member

// Recursive no-memo evaluator straight off the defining formula.
std::vector<double> eval_naive(const ffsym::Network& net,
                               const std::map<ffsym::NodeId, double>& at);

// Eight-point circle average of (z - p) f(z) at radius r; cancels Laurent
// terms through order seven, so the error is O(r^8) plus noise.
std::complex<double> residue_circle(const std::function<std::complex<double>(std::complex<double>)>& f,
                                    std::complex<double> p, double r = 1e-3);

// Occupancy filter then eps-component collapse, quadratic all the way.
int cluster_depth_naive(const std::vector<std::complex<double>>& cloud, double eps, int m = 3);

// Direct count of cloud points within eps of the line through z0 along dir.
double density_naive(const std::vector<std::complex<double>>& cloud, std::complex<double> z0,
                     std::complex<double> dir, double eps, double window);

// Brute force over all level-preserving bijections and all sign vectors.
// Only sensible for nets with at most ~6 non-input nodes.
std::optional<ffsym::SignWitness> sign_iso_exhaustive(const ffsym::Network& a,
                                                      const ffsym::Network& b,
                                                      double tol = 1e-10);

}  // namespace oracle
