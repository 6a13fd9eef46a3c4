#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffsym/nonlinearity.hpp"

namespace ffsym {

// One term alpha * rho(beta * t + gamma) of an affine symmetry.
struct SymTerm {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
};

// sum_s alpha_s rho(beta_s t + gamma_s) = zeta identically, with no proper
// subset of the terms satisfying a relation of the same shape (minimality).
struct AffineSymmetry {
  double zeta = 0.0;
  std::vector<SymTerm> terms;
};

struct VerifyReport {
  bool holds = false;
  bool minimal = false;
  double max_residual = 0.0;
  double sv_min_ratio = 0.0;     // smallest singular value / largest
  double sv_second_ratio = 0.0;  // second smallest / largest
  std::string status;  // "ok", "residual too large", "holds but not certified minimal"
};

// Singular-value gates for the minimality certificate.
inline constexpr double kSvNullTol = 1e-8;
inline constexpr double kSvGapTol = 1e-4;
inline constexpr double kSupportTol = 1e-6;

VerifyReport verify_symmetry(const Nonlinearity& rho, const AffineSymmetry& sym,
                             double tol = 1e-8);

// The two symmetry families of a tanh term (beta, gamma): a duplicate pair
// and an odd mirror pair. Index 0 duplicates, index 1 mirrors.
AffineSymmetry tanh_duplicate_pair(double beta, double gamma);
AffineSymmetry tanh_mirror_pair(double beta, double gamma);

// Three-term clipped-relu halving identity through (beta, gamma):
// rho(s) - 1/2 rho(2s) - 1/2 rho(2s - 1) = 0 with s = beta t + gamma.
AffineSymmetry crelu_halving(double beta, double gamma);

enum class DiscoveryStatus { Found, None, Inconclusive };

struct DiscoveryResult {
  DiscoveryStatus status = DiscoveryStatus::None;
  std::optional<AffineSymmetry> symmetry;
  std::vector<int> support;  // indices into the candidate list
  std::string detail;
};

// Searches for a minimal symmetry among candidate terms (alpha free,
// beta/gamma fixed per candidate). With `required` set, only symmetries whose
// support contains that index are returned. Inconclusive when the sample
// matrix has an ambiguous singular-value gap.
DiscoveryResult discover_symmetry(const Nonlinearity& rho,
                                  const std::vector<std::pair<double, double>>& beta_gamma,
                                  std::optional<int> required = std::nullopt,
                                  double tol = 1e-8);

struct ExoticResult {
  ZabSeries sigma;
  AffineSymmetry symmetry;  // terms (alpha_l, 1, l), constant zeta
  double b = 0.0;
  int truncation = 0;            // coefficient support is |k| <= truncation
  double growth = 0.0;           // two-sided growth rate of the recurrence
  bool unit_circle_root = false;
  bool truncation_capped = false;
  double zeta = 0.0;
};

// Builds a tanh-type series sigma whose integer translates satisfy
// sum_l alphas[l] sigma(t - l) = zeta, by solving the two-sided linear
// recurrence sum_l alphas[l] r_{k-l} = 0 with the window
// r_0..r_{n-1} = alphas[n]..alphas[1], so residues cancel at every pole
// column. Throws std::invalid_argument on n < 1 or a zero end coefficient.
ExoticResult construct_exotic(const std::vector<double>& alphas);

// Residue at p of sum_s alpha_s rho(beta_s z + gamma_s).
std::complex<double> residue_of_combination(const Nonlinearity& rho,
                                            const std::vector<SymTerm>& terms,
                                            std::complex<double> p);

}  // namespace ffsym
