#pragma once

#include <cstdint>
#include <cstdio>
#include <cmath>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace ffsym {

// Combined absolute/relative comparison used for all float tolerance checks.
inline bool approx_eq(double a, double b, double tol) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

// Shortest-faithful decimal form of a double for text reports.
inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 16; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(probe, "%lf", &back);
    if (back == x) return probe;
  }
  return buf;
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

inline std::vector<double> seeded_uniform(uint32_t seed, std::size_t count, double lo, double hi) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(count);
  for (auto& x : out) x = dist(rng);
  return out;
}

// Sample grid shared by symmetry verification and discovery: 256 evenly
// spaced points on [-8, 8] plus 32 seeded uniform points.
inline std::vector<double> symmetry_sample_grid(uint32_t seed = 42) {
  std::vector<double> grid;
  grid.reserve(288);
  for (int i = 0; i < 256; ++i) grid.push_back(-8.0 + 16.0 * i / 255.0);
  for (double x : seeded_uniform(seed, 32, -8.0, 8.0)) grid.push_back(x);
  return grid;
}

}  // namespace ffsym
