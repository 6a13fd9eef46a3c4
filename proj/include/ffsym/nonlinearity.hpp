#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace ffsym {

inline constexpr double kPi = 3.14159265358979323846;

// Distance below which a complex evaluation is flagged as unreliable.
inline constexpr double kPoleGuardRadius = 1e-8;

enum class RhoKind { Tanh, CRelu, Zab };

// Finite tanh-type series: sigma(z) = constant + sum_k c_k (sgn k + tanh(pi/b (z - k a))).
// Poles lie at a*k + i*b*(m + 1/2) for supported k, each simple with residue c_k * b/pi.
struct ZabSeries {
  double a = 1.0;
  double b = kPi;
  double constant = 0.0;
  std::map<int, double> coeffs;
};

struct Nonlinearity {
  RhoKind kind = RhoKind::Tanh;
  ZabSeries zab;  // meaningful only when kind == RhoKind::Zab

  bool operator==(const Nonlinearity& o) const {
    if (kind != o.kind) return false;
    if (kind != RhoKind::Zab) return true;
    return zab.a == o.zab.a && zab.b == o.zab.b && zab.constant == o.zab.constant &&
           zab.coeffs == o.zab.coeffs;
  }
};

inline Nonlinearity tanh_rho() { return Nonlinearity{RhoKind::Tanh, {}}; }
inline Nonlinearity crelu_rho() { return Nonlinearity{RhoKind::CRelu, {}}; }
inline Nonlinearity zab_rho(ZabSeries z) { return Nonlinearity{RhoKind::Zab, std::move(z)}; }

struct ComplexEval {
  std::complex<double> value;
  bool near_pole = false;  // within kPoleGuardRadius of a pole; value unreliable
};

struct Pole {
  std::complex<double> position;
  std::complex<double> residue;
};

using PointCloud = std::vector<std::complex<double>>;

double eval_real(const Nonlinearity& rho, double t);

// Throws std::domain_error for CRelu, which has no complex extension here.
ComplexEval eval_complex(const Nonlinearity& rho, std::complex<double> z);

bool is_meromorphic(const Nonlinearity& rho);

// Exact residue if p is a pole of rho (snap tolerance 1e-9), zero otherwise.
std::complex<double> residue_at(const Nonlinearity& rho, std::complex<double> p);

// All poles of rho with |Re|, |Im| <= window, sorted by (Re, Im).
std::vector<Pole> pole_lattice(const Nonlinearity& rho, double window);

// Distance from z to the pole set of rho (infinity if entire).
double pole_distance(const Nonlinearity& rho, std::complex<double> z);

std::string rho_name(const Nonlinearity& rho);

}  // namespace ffsym
