#pragma once

#include <Eigen/Core>
#include <bit>
#include <cstdint>
#include <stdexcept>

#include "hyperinfo/real_function.hpp"

namespace hyperinfo {

/*
 * Walsh coefficients indexed by subset mask: coeffs[S] is the coefficient of
 * the character prod_{i in S} x_{i+1}. With the point-index convention the
 * character value at point m is (-1)^popcount(S & m).
 */
struct FourierSpectrum {
  int n = 0;
  Eigen::ArrayXd coeffs;
};

// In-place Walsh-Hadamard butterfly, no normalization. Self-inverse up to
// a factor of 2^n. Length must be a power of two.
template <typename Derived>
void fwht_inplace(Eigen::ArrayBase<Derived>& a) {
  const Eigen::Index len = a.size();
  if (len == 0 || (len & (len - 1)) != 0)
    throw std::invalid_argument("fwht_inplace: length must be a power of two");
  for (Eigen::Index h = 1; h < len; h *= 2) {
    for (Eigen::Index i = 0; i < len; i += 2 * h) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const auto x = a[j];
        const auto y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

inline FourierSpectrum wht(const RealFunction& f) {
  FourierSpectrum s{f.n, f.values};
  fwht_inplace(s.coeffs);
  s.coeffs /= static_cast<double>(f.size());
  return s;
}

inline RealFunction inverse_wht(const FourierSpectrum& s) {
  RealFunction f(s.n, s.coeffs);
  fwht_inplace(f.values);
  return f;
}

inline double level_weight(const FourierSpectrum& s, int k) {
  if (k < 0 || k > s.n) throw std::out_of_range("level_weight: level out of range");
  double w = 0;
  for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask)
    if (std::popcount(static_cast<std::uint64_t>(mask)) == k)
      w += s.coeffs[mask] * s.coeffs[mask];
  return w;
}

inline Eigen::ArrayXd level_weights(const FourierSpectrum& s) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(s.n + 1);
  for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask)
    w[std::popcount(static_cast<std::uint64_t>(mask))] += s.coeffs[mask] * s.coeffs[mask];
  return w;
}

// Projection onto the span of the degree-k characters.
inline RealFunction fourier_level_part(const RealFunction& f, int k) {
  FourierSpectrum s = wht(f);
  if (k < 0 || k > s.n) throw std::out_of_range("fourier_level_part: level out of range");
  for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask)
    if (std::popcount(static_cast<std::uint64_t>(mask)) != k) s.coeffs[mask] = 0;
  return inverse_wht(s);
}

}  // namespace hyperinfo
