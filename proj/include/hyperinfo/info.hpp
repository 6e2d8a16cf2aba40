#pragma once

#include <stdexcept>
#include <vector>

#include "hyperinfo/boolean_function.hpp"
#include "hyperinfo/entropy.hpp"
#include "hyperinfo/fourier.hpp"
#include "hyperinfo/noise.hpp"
#include "hyperinfo/oq1.hpp"

namespace hyperinfo {

// Per-coordinate information content: mu = E[b], z[i] = degree-1 coefficient
// of coordinate i+1, coord_mi[i] = I(b(X); Y_{i+1}), total_mi = sum of
// coord_mi (the objective L(b)).
struct MIReport {
  int n = 0;
  double alpha = 0;
  double mu = 0;
  double total_mi = 0;
  std::vector<double> coord_mi;
  std::vector<double> z;
};

namespace detail {

// Posterior P(b = +1 | Y = y) for all y, via the smoothed 0/1 indicator.
inline RealFunction posterior(const BooleanFunction& b, const NoiseParams& p) {
  RealFunction f01 = zeros(b.dimension());
  for (std::int64_t m = 0; m < b.size(); ++m) f01.values[m] = b.bit(m) ? 1.0 : 0.0;
  RealFunction q = apply_noise(f01, p);
  for (std::int64_t m = 0; m < q.size(); ++m) {
    if (q.values[m] < 0.0) {
      if (q.values[m] < -1e-12) throw std::logic_error("posterior: value below 0");
      q.values[m] = 0.0;
    } else if (q.values[m] > 1.0) {
      if (q.values[m] > 1.0 + 1e-12) throw std::logic_error("posterior: value above 1");
      q.values[m] = 1.0;
    }
  }
  return q;
}

}  // namespace detail

// I(b(X); Y) = Ent(T f) + Ent(T (1-f)) with f the 0/1 indicator of b = +1.
// Constant b carries no information.
inline double mutual_information(const BooleanFunction& b, const NoiseParams& p) {
  const std::int64_t ones = b.count_ones();
  if (ones == 0 || ones == b.size()) return 0.0;
  RealFunction f01 = zeros(b.dimension());
  RealFunction f10 = zeros(b.dimension());
  for (std::int64_t m = 0; m < b.size(); ++m) {
    f01.values[m] = b.bit(m) ? 1.0 : 0.0;
    f10.values[m] = 1.0 - f01.values[m];
  }
  return ent_functional(apply_noise(f01, p)) + ent_functional(apply_noise(f10, p));
}

// Same quantity by the conditional-entropy route:
// I = H(P(b=1)) - E_Y[H(P(b=1|Y))]. Cross-check for mutual_information.
inline double mutual_information_cond(const BooleanFunction& b, const NoiseParams& p) {
  const RealFunction q = detail::posterior(b, p);
  double hcond = 0;
  for (std::int64_t m = 0; m < q.size(); ++m) hcond += binary_entropy(q.values[m]);
  hcond /= static_cast<double>(q.size());
  const double pb = static_cast<double>(b.count_ones()) / static_cast<double>(b.size());
  return binary_entropy(pb) - hcond;
}

// I(b(X); Y_i) for a single noisy coordinate: H(b) - h_mu(z_i), where the
// posterior given Y_i = y is (1 + mu + rho y z_i)/2.
inline double coordinate_mi(const BooleanFunction& b, int coord, const NoiseParams& p) {
  if (coord < 1 || coord > b.dimension()) throw std::out_of_range("coordinate_mi: coordinate out of range");
  const FourierSpectrum s = wht(to_real(b));
  const double mu = s.coeffs[0];
  const double z = s.coeffs[std::int64_t{1} << (coord - 1)];
  return binary_entropy((1.0 + mu) / 2.0) - h_mu(z, mu, p);
}

inline MIReport sum_coordinate_mi(const BooleanFunction& b, const NoiseParams& p) {
  MIReport r;
  r.n = b.dimension();
  r.alpha = p.alpha;
  const FourierSpectrum s = wht(to_real(b));
  r.mu = s.coeffs[0];
  const double hb = binary_entropy((1.0 + r.mu) / 2.0);
  r.coord_mi.resize(static_cast<std::size_t>(r.n));
  r.z.resize(static_cast<std::size_t>(r.n));
  r.total_mi = 0;
  for (int i = 0; i < r.n; ++i) {
    r.z[static_cast<std::size_t>(i)] = s.coeffs[std::int64_t{1} << i];
    r.coord_mi[static_cast<std::size_t>(i)] = hb - h_mu(r.z[static_cast<std::size_t>(i)], r.mu, p);
    r.total_mi += r.coord_mi[static_cast<std::size_t>(i)];
  }
  return r;
}

}  // namespace hyperinfo
