#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hyperinfo/fourier.hpp"
#include "hyperinfo/real_function.hpp"

namespace hyperinfo {

// Binary symmetric channel with flip probability alpha. rho = 1 - 2*alpha is
// the per-coordinate correlation, lambda = rho^2.
struct NoiseParams {
  double alpha = 0;
  double rho = 1;
  double lambda = 1;

  static NoiseParams from_alpha(double a) {
    if (!(a >= 0.0 && a <= 0.5)) throw std::invalid_argument("alpha must lie in [0, 1/2]");
    const double r = 1.0 - 2.0 * a;
    return NoiseParams{a, r, r * r};
  }

  static NoiseParams from_rho(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    return NoiseParams{(1.0 - r) / 2.0, r, r * r};
  }

  static NoiseParams from_lambda(double l) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    return from_rho(std::sqrt(l));
  }
};

/*
 * Smoothing operator of the channel: (T f)(y) = E[f(X) | Y = y]. Acts on the
 * spectrum as multiplication by rho^|S|. Inputs with values in [0, inf) stay
 * there up to roundoff; tiny negative dust (> -1e-15) from the transform pair
 * is snapped to zero so downstream entropies never see -0-ish values.
 */
inline RealFunction apply_noise(const RealFunction& f, const NoiseParams& p) {
  FourierSpectrum s = wht(f);
  Eigen::ArrayXd rho_pow(f.n + 1);
  rho_pow[0] = 1.0;
  for (int k = 1; k <= f.n; ++k) rho_pow[k] = rho_pow[k - 1] * p.rho;
  for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask)
    s.coeffs[mask] *= rho_pow[std::popcount(static_cast<std::uint64_t>(mask))];
  RealFunction g = inverse_wht(s);
  const double floor = f.values.minCoeff();
  if (floor >= 0.0) {
    for (std::int64_t m = 0; m < g.size(); ++m)
      if (g.values[m] < 0.0 && g.values[m] > -1e-15) g.values[m] = 0.0;
  }
  return g;
}

// Literal channel average over all 4^n point pairs; oracle for apply_noise,
// keep n small. Only the n+1 distinct flip weights are precomputed.
inline RealFunction apply_noise_direct(const RealFunction& f, const NoiseParams& p) {
  Eigen::ArrayXd w(f.n + 1);
  for (int d = 0; d <= f.n; ++d)
    w[d] = std::pow(p.alpha, d) * std::pow(1.0 - p.alpha, f.n - d);
  RealFunction g = zeros(f.n);
  for (std::int64_t y = 0; y < f.size(); ++y) {
    double acc = 0;
    for (std::int64_t x = 0; x < f.size(); ++x)
      acc += f.values[x] * w[std::popcount(static_cast<std::uint64_t>(x ^ y))];
    g.values[y] = acc;
  }
  return g;
}

}  // namespace hyperinfo
