#include "ffsym/symmetry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ffsym/util.hpp"

namespace ffsym {

namespace {

// Sample matrix [1 | rho(beta_s t + gamma_s)] over the shared grid.
Eigen::MatrixXd sample_matrix(const Nonlinearity& rho,
                              const std::vector<std::pair<double, double>>& beta_gamma,
                              const std::vector<double>& grid) {
  Eigen::MatrixXd M(grid.size(), beta_gamma.size() + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    M(i, 0) = 1.0;
    for (std::size_t s = 0; s < beta_gamma.size(); ++s)
      M(i, s + 1) = eval_real(rho, beta_gamma[s].first * grid[i] + beta_gamma[s].second);
  }
  return M;
}

struct NullInfo {
  double sv_min_ratio = 0.0;
  double sv_second_ratio = 0.0;
  Eigen::VectorXd nullvec;  // right singular vector of the smallest singular value
};

NullInfo null_info(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  NullInfo info;
  double top = sv(0);
  int last = int(sv.size()) - 1;
  info.sv_min_ratio = top > 0 ? sv(last) / top : 0.0;
  info.sv_second_ratio = (last >= 1 && top > 0) ? sv(last - 1) / top : 1.0;
  info.nullvec = svd.matrixV().col(last);
  return info;
}

// Scale a raw null vector (constant component first) into a symmetry with
// max |alpha| = 1 and the first supported alpha positive.
AffineSymmetry normalize_symmetry(const Eigen::VectorXd& v,
                                  const std::vector<std::pair<double, double>>& beta_gamma) {
  double amax = 0.0;
  int first = -1;
  for (int s = 0; s < int(beta_gamma.size()); ++s) {
    amax = std::max(amax, std::fabs(v(s + 1)));
    if (first < 0 && v(s + 1) != 0.0) first = s;
  }
  double scale = amax;
  if (first >= 0 && v(first + 1) < 0) scale = -scale;
  AffineSymmetry sym;
  sym.zeta = -v(0) / scale;
  for (int s = 0; s < int(beta_gamma.size()); ++s)
    sym.terms.push_back({v(s + 1) / scale, beta_gamma[s].first, beta_gamma[s].second});
  return sym;
}

DiscoveryResult discover_impl(const Nonlinearity& rho,
                              const std::vector<std::pair<double, double>>& beta_gamma,
                              const std::vector<int>& indices, std::optional<int> required,
                              const std::vector<double>& grid, double tol, int depth) {
  DiscoveryResult res;
  if (indices.size() < 2 || depth > 16) {
    res.status = DiscoveryStatus::None;
    return res;
  }
  std::vector<std::pair<double, double>> sub;
  for (int i : indices) sub.push_back(beta_gamma[i]);
  auto info = null_info(sample_matrix(rho, sub, grid));

  if (info.sv_min_ratio >= kSvNullTol) {
    res.status = DiscoveryStatus::None;
    res.detail = "no linear dependency";
    return res;
  }

  if (info.sv_second_ratio > kSvGapTol) {
    // Unique null direction; restrict to its support.
    double vmax = info.nullvec.cwiseAbs().maxCoeff();
    std::vector<int> support;
    for (std::size_t s = 0; s < sub.size(); ++s)
      if (std::fabs(info.nullvec(s + 1)) > kSupportTol * vmax) support.push_back(indices[s]);
    if (required && !std::count(support.begin(), support.end(), *required)) {
      res.status = DiscoveryStatus::None;
      res.detail = "dependency does not involve the required term";
      return res;
    }
    if (support.size() == indices.size()) {
      AffineSymmetry sym = normalize_symmetry(info.nullvec, sub);
      auto check = verify_symmetry(rho, sym, tol);
      if (!check.holds) {
        res.status = DiscoveryStatus::None;
        res.detail = "candidate relation fails verification";
        return res;
      }
      res.status = DiscoveryStatus::Found;
      res.symmetry = sym;
      res.support = indices;
      return res;
    }
    return discover_impl(rho, beta_gamma, support, required, grid, tol, depth + 1);
  }

  // Null space dimension above one: peel candidates to isolate one relation.
  if (required) {
    // Least squares for the required column against the rest.
    std::vector<int> rest;
    int req_local = -1;
    for (std::size_t s = 0; s < indices.size(); ++s) {
      if (indices[s] == *required)
        req_local = int(s);
      else
        rest.push_back(indices[s]);
    }
    if (req_local < 0) {
      res.status = DiscoveryStatus::None;
      return res;
    }
    Eigen::MatrixXd M = sample_matrix(rho, sub, grid);
    Eigen::VectorXd target = M.col(req_local + 1);
    Eigen::MatrixXd basis(M.rows(), sub.size());
    basis.col(0) = M.col(0);
    int col = 1;
    for (std::size_t s = 0; s < sub.size(); ++s)
      if (int(s) != req_local) basis.col(col++) = M.col(s + 1);
    Eigen::VectorXd x = basis.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
    double resid = (basis * x - target).lpNorm<Eigen::Infinity>();
    if (resid > tol) {
      res.status = DiscoveryStatus::None;
      res.detail = "required term is not representable";
      return res;
    }
    std::vector<int> keep{*required};
    double xmax = std::max(1.0, x.tail(x.size() - 1).cwiseAbs().maxCoeff());
    for (std::size_t s = 0; s < rest.size(); ++s)
      if (std::fabs(x(s + 1)) > kSupportTol * xmax) keep.push_back(rest[s]);
    std::sort(keep.begin(), keep.end());
    if (keep.size() == indices.size()) {
      res.status = DiscoveryStatus::Inconclusive;
      res.detail = "ambiguous singular-value gap";
      return res;
    }
    return discover_impl(rho, beta_gamma, keep, required, grid, tol, depth + 1);
  }

  for (std::size_t drop = 0; drop < indices.size(); ++drop) {
    std::vector<int> rest;
    for (std::size_t s = 0; s < indices.size(); ++s)
      if (s != drop) rest.push_back(indices[s]);
    auto attempt = discover_impl(rho, beta_gamma, rest, required, grid, tol, depth + 1);
    if (attempt.status == DiscoveryStatus::Found) return attempt;
  }
  res.status = DiscoveryStatus::Inconclusive;
  res.detail = "ambiguous singular-value gap";
  return res;
}

}  // namespace

VerifyReport verify_symmetry(const Nonlinearity& rho, const AffineSymmetry& sym, double tol) {
  VerifyReport rep;
  auto grid = symmetry_sample_grid();
  for (double t : grid) {
    double acc = -sym.zeta;
    for (const auto& term : sym.terms) acc += term.alpha * eval_real(rho, term.beta * t + term.gamma);
    rep.max_residual = std::max(rep.max_residual, std::fabs(acc));
  }
  rep.holds = rep.max_residual < tol;

  std::vector<std::pair<double, double>> bg;
  for (const auto& term : sym.terms) bg.emplace_back(term.beta, term.gamma);
  auto info = null_info(sample_matrix(rho, bg, grid));
  rep.sv_min_ratio = info.sv_min_ratio;
  rep.sv_second_ratio = info.sv_second_ratio;
  double vmax = info.nullvec.cwiseAbs().maxCoeff();
  bool full_support = true;
  for (std::size_t s = 0; s < bg.size(); ++s)
    if (std::fabs(info.nullvec(s + 1)) <= kSupportTol * vmax) full_support = false;
  rep.minimal = rep.holds && info.sv_min_ratio < kSvNullTol &&
                info.sv_second_ratio > kSvGapTol && full_support;
  if (!rep.holds)
    rep.status = "residual too large";
  else if (!rep.minimal)
    rep.status = "holds but not certified minimal";
  else
    rep.status = "ok";
  return rep;
}

AffineSymmetry tanh_duplicate_pair(double beta, double gamma) {
  return {0.0, {{1.0, beta, gamma}, {-1.0, beta, gamma}}};
}

AffineSymmetry tanh_mirror_pair(double beta, double gamma) {
  return {0.0, {{1.0, beta, gamma}, {1.0, -beta, -gamma}}};
}

AffineSymmetry crelu_halving(double beta, double gamma) {
  return {0.0,
          {{1.0, beta, gamma}, {-0.5, 2 * beta, 2 * gamma}, {-0.5, 2 * beta, 2 * gamma - 1}}};
}

DiscoveryResult discover_symmetry(const Nonlinearity& rho,
                                  const std::vector<std::pair<double, double>>& beta_gamma,
                                  std::optional<int> required, double tol) {
  auto grid = symmetry_sample_grid();
  std::vector<int> all(beta_gamma.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
  return discover_impl(rho, beta_gamma, all, required, grid, tol, 0);
}

ExoticResult construct_exotic(const std::vector<double>& alphas) {
  int n = int(alphas.size()) - 1;
  if (n < 1) throw std::invalid_argument("need at least two coefficients");
  if (alphas[0] == 0.0 || alphas[n] == 0.0)
    throw std::invalid_argument("end coefficients must be nonzero");

  // Characteristic roots via the companion matrix of
  // alphas[0] x^n + ... + alphas[n].
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -alphas[j + 1] / alphas[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::VectorXcd roots = comp.eigenvalues();

  ExoticResult out;
  out.growth = 1.0;
  for (int i = 0; i < n; ++i) {
    double mod = std::abs(roots(i));
    out.growth = std::max({out.growth, mod, 1.0 / mod});
    if (std::fabs(mod - 1.0) < 1e-9) out.unit_circle_root = true;
  }
  out.b = std::max(1.0, kPi / (std::log(out.growth) + 0.1));

  // Two-sided recurrence solution with window r_0..r_{n-1} = alphas[n]..alphas[1].
  constexpr int kMaxK = 4000;
  std::vector<double> fwd, bwd;  // fwd[k] = r_k for k >= 0, bwd[j] = r_{-1-j}
  for (int k = 0; k < n; ++k) fwd.push_back(alphas[n - k]);
  auto r_at = [&](int k) { return k >= 0 ? fwd[k] : bwd[-1 - k]; };
  auto extend_fwd = [&]() {
    int k = int(fwd.size());
    double acc = 0.0;
    for (int l = 1; l <= n; ++l) acc += alphas[l] * r_at(k - l);
    fwd.push_back(-acc / alphas[0]);
  };
  auto extend_bwd = [&]() {
    int k = -1 - int(bwd.size());
    double acc = 0.0;
    for (int l = 0; l < n; ++l) acc += alphas[l] * r_at(k + n - l);
    bwd.push_back(-acc / alphas[n]);
  };

  double weighted_max = 0.0;
  int K = kMaxK;
  out.truncation_capped = true;
  for (int k = 0; k <= kMaxK; ++k) {
    while (int(fwd.size()) <= k) extend_fwd();
    while (int(bwd.size()) < k) extend_bwd();
    double wk = std::fabs(fwd[k]);
    if (k >= 1) wk = std::max(wk, std::fabs(bwd[k - 1]));
    wk *= std::exp(-kPi * k / out.b);
    weighted_max = std::max(weighted_max, wk);
    if (k >= n && wk < 1e-12 * weighted_max) {
      K = k;
      out.truncation_capped = false;
      break;
    }
  }
  out.truncation = K;

  out.sigma.a = 1.0;
  out.sigma.b = out.b;
  out.sigma.constant = 0.0;
  for (int k = -K; k <= K; ++k)
    if (r_at(k) != 0.0) out.sigma.coeffs[k] = r_at(k);

  Nonlinearity rho = zab_rho(out.sigma);
  double acc = 0.0;
  auto grid = symmetry_sample_grid();
  for (double t : grid) {
    double f = 0.0;
    for (int l = 0; l <= n; ++l) f += alphas[l] * eval_real(rho, t - l);
    acc += f;
  }
  out.zeta = acc / double(grid.size());

  out.symmetry.zeta = out.zeta;
  for (int l = 0; l <= n; ++l) out.symmetry.terms.push_back({alphas[l], 1.0, -double(l)});
  return out;
}

std::complex<double> residue_of_combination(const Nonlinearity& rho,
                                            const std::vector<SymTerm>& terms,
                                            std::complex<double> p) {
  std::complex<double> acc = 0.0;
  for (const auto& term : terms) {
    if (term.beta == 0.0) continue;  // constant term, no poles
    acc += term.alpha * residue_at(rho, term.beta * p + term.gamma) / term.beta;
  }
  return acc;
}

}  // namespace ffsym
