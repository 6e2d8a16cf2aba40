#pragma once

#include <cmath>
#include <stdexcept>

#include "hyperinfo/noise.hpp"
#include "hyperinfo/real_function.hpp"

namespace hyperinfo {

// All information quantities in this library are in bits (base-2 logs).

inline double binary_entropy(double p) {
  // tolerate boundary dust from derived probabilities, reject real overshoot
  if (p < 0.0) {
    if (p < -1e-15) throw std::domain_error("binary_entropy: p < 0");
    p = 0.0;
  } else if (p > 1.0) {
    if (p > 1.0 + 1e-15) throw std::domain_error("binary_entropy: p > 1");
    p = 1.0;
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  const double q = 1.0 - p;
  return -p * std::log2(p) - q * std::log2(q);
}

inline double capacity(double alpha) { return 1.0 - binary_entropy(alpha); }
inline double capacity(const NoiseParams& p) { return capacity(p.alpha); }

// Ent(g) = E[g log2 g] - E[g] log2 E[g] under the uniform measure,
// with 0 log 0 = 0. Requires g >= 0 (entries above -1e-15 are treated
// as exact zeros) and E[g] > 0.
inline double ent_functional(const RealFunction& g) {
  double s = 0;
  for (std::int64_t m = 0; m < g.size(); ++m) {
    double v = g.values[m];
    if (v < 0.0) {
      if (v < -1e-15) throw std::domain_error("ent_functional: negative entry");
      v = 0.0;
    }
    if (v > 0.0) s += v * std::log2(v);
  }
  const double mean = g.mean();
  if (!(mean > 0.0)) throw std::domain_error("ent_functional: zero or invalid mean");
  return s / static_cast<double>(g.size()) - mean * std::log2(mean);
}

}  // namespace hyperinfo
