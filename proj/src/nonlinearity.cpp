#include "ffsym/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ffsym {

namespace {

double sgn_int(int k) { return k > 0 ? 1.0 : (k < 0 ? -1.0 : 0.0); }

// Distance from z to the lattice {x0 + i * period * (m + 1/2) : m integer}.
double vertical_lattice_distance(std::complex<double> z, double x0, double period) {
  double dy = z.imag() / period - 0.5;
  double m = std::round(dy);
  double best = std::hypot(z.real() - x0, (dy - m) * period);
  return best;
}

}  // namespace

double eval_real(const Nonlinearity& rho, double t) {
  switch (rho.kind) {
    case RhoKind::Tanh:
      return std::tanh(t);
    case RhoKind::CRelu:
      return std::min(1.0, std::max(0.0, t));
    case RhoKind::Zab: {
      double acc = rho.zab.constant;
      for (const auto& [k, c] : rho.zab.coeffs)
        acc += c * (sgn_int(k) + std::tanh(kPi / rho.zab.b * (t - k * rho.zab.a)));
      return acc;
    }
  }
  throw std::logic_error("unknown nonlinearity kind");
}

ComplexEval eval_complex(const Nonlinearity& rho, std::complex<double> z) {
  switch (rho.kind) {
    case RhoKind::Tanh: {
      ComplexEval out;
      out.near_pole = vertical_lattice_distance(z, 0.0, kPi) < kPoleGuardRadius;
      out.value = std::tanh(z);
      return out;
    }
    case RhoKind::CRelu:
      throw std::domain_error("clipped relu has no complex extension");
    case RhoKind::Zab: {
      ComplexEval out;
      out.near_pole = pole_distance(rho, z) < kPoleGuardRadius;
      std::complex<double> acc = rho.zab.constant;
      for (const auto& [k, c] : rho.zab.coeffs) {
        std::complex<double> arg = kPi / rho.zab.b * (z - double(k) * rho.zab.a);
        acc += c * (sgn_int(k) + std::tanh(arg));
      }
      out.value = acc;
      return out;
    }
  }
  throw std::logic_error("unknown nonlinearity kind");
}

bool is_meromorphic(const Nonlinearity& rho) { return rho.kind != RhoKind::CRelu; }

std::complex<double> residue_at(const Nonlinearity& rho, std::complex<double> p) {
  constexpr double snap = 1e-9;
  switch (rho.kind) {
    case RhoKind::Tanh: {
      double m = std::round(p.imag() / kPi - 0.5);
      if (std::fabs(p.real()) < snap && std::fabs(p.imag() - kPi * (m + 0.5)) < snap)
        return 1.0;
      return 0.0;
    }
    case RhoKind::CRelu:
      throw std::domain_error("clipped relu has no poles");
    case RhoKind::Zab: {
      const auto& zb = rho.zab;
      double ka = std::round(p.real() / zb.a);
      auto it = zb.coeffs.find(int(ka));
      if (it == zb.coeffs.end() || it->second == 0.0) return 0.0;
      double m = std::round(p.imag() / zb.b - 0.5);
      if (std::fabs(p.real() - zb.a * ka) < snap &&
          std::fabs(p.imag() - zb.b * (m + 0.5)) < snap)
        return it->second * zb.b / kPi;
      return 0.0;
    }
  }
  throw std::logic_error("unknown nonlinearity kind");
}

std::vector<Pole> pole_lattice(const Nonlinearity& rho, double window) {
  std::vector<Pole> out;
  auto emit_column = [&](double x0, double period, std::complex<double> residue) {
    if (std::fabs(x0) > window) return;
    double m_lo = std::ceil((-window / period) - 0.5);
    double m_hi = std::floor((window / period) - 0.5);
    for (double m = m_lo; m <= m_hi; ++m)
      out.push_back({{x0, period * (m + 0.5)}, residue});
  };
  switch (rho.kind) {
    case RhoKind::Tanh:
      emit_column(0.0, kPi, 1.0);
      break;
    case RhoKind::CRelu:
      throw std::domain_error("clipped relu has no poles");
    case RhoKind::Zab:
      for (const auto& [k, c] : rho.zab.coeffs)
        if (c != 0.0) emit_column(rho.zab.a * k, rho.zab.b, c * rho.zab.b / kPi);
      break;
  }
  std::sort(out.begin(), out.end(), [](const Pole& a, const Pole& b) {
    if (a.position.real() != b.position.real()) return a.position.real() < b.position.real();
    return a.position.imag() < b.position.imag();
  });
  return out;
}

double pole_distance(const Nonlinearity& rho, std::complex<double> z) {
  switch (rho.kind) {
    case RhoKind::Tanh:
      return vertical_lattice_distance(z, 0.0, kPi);
    case RhoKind::CRelu:
      return std::numeric_limits<double>::infinity();
    case RhoKind::Zab: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [k, c] : rho.zab.coeffs)
        if (c != 0.0)
          best = std::min(best, vertical_lattice_distance(z, rho.zab.a * k, rho.zab.b));
      return best;
    }
  }
  throw std::logic_error("unknown nonlinearity kind");
}

std::string rho_name(const Nonlinearity& rho) {
  switch (rho.kind) {
    case RhoKind::Tanh:
      return "tanh";
    case RhoKind::CRelu:
      return "crelu";
    case RhoKind::Zab:
      return "zab";
  }
  return "?";
}

}  // namespace ffsym
