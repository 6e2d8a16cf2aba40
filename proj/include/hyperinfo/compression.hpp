#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hyperinfo/boolean_function.hpp"
#include "hyperinfo/fourier.hpp"
#include "hyperinfo/info.hpp"

namespace hyperinfo {

/*
 * 1-d compression along coordinate j: in every fiber {x_j = +1, x_j = -1}
 * the +1 value (if any) moves to the x_j = +1 slot. On 0/1 fiber values
 * (v_plus, v_minus) the new pair is (v_plus OR v_minus, v_plus AND v_minus),
 * which preserves the fiber multiset and the total count of ones.
 */
inline BooleanFunction compress(const BooleanFunction& b, int j) {
  if (j < 1 || j > b.dimension()) throw std::out_of_range("compress: coordinate out of range");
  const std::int64_t jbit = std::int64_t{1} << (j - 1);
  BooleanFunction out = b;
  for (std::int64_t m = 0; m < b.size(); ++m) {
    if (m & jbit) continue;  // m is the x_j = +1 slot of its fiber
    const bool vp = b.bit(m);
    const bool vm = b.bit(m | jbit);
    out.set_bit(m, vp || vm);
    out.set_bit(m | jbit, vp && vm);
  }
  return out;
}

// Nondecreasing in coordinate i: b(x_{~i}, -1) <= b(x_{~i}, +1) on every fiber.
inline bool is_monotone(const BooleanFunction& b, int i) {
  if (i < 1 || i > b.dimension()) throw std::out_of_range("is_monotone: coordinate out of range");
  const std::int64_t ibit = std::int64_t{1} << (i - 1);
  for (std::int64_t m = 0; m < b.size(); ++m)
    if ((m & ibit) == 0 && b.bit(m | ibit) && !b.bit(m)) return false;
  return true;
}

inline bool is_monotone(const BooleanFunction& b) {
  for (int i = 1; i <= b.dimension(); ++i)
    if (!is_monotone(b, i)) return false;
  return true;
}

struct CompressionStep {
  int coord = 0;
  double l_before = 0;
  double l_after = 0;
};

struct CompressionTrace {
  std::vector<CompressionStep> steps;
  BooleanFunction final;
};

// Cyclic passes over coordinates 1..n until a pass changes nothing; every
// application (identity ones included) is traced with the objective
// L(b) = sum_i I(b; Y_i) before and after.
inline CompressionTrace monotonize(const BooleanFunction& b, const NoiseParams& p) {
  CompressionTrace trace;
  BooleanFunction cur = b;
  double l_cur = sum_coordinate_mi(cur, p).total_mi;
  const std::int64_t max_passes = std::int64_t{1} << b.dimension();
  for (std::int64_t pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (int j = 1; j <= b.dimension(); ++j) {
      BooleanFunction next = compress(cur, j);
      const bool step_changed = !(next == cur);
      const double l_next = step_changed ? sum_coordinate_mi(next, p).total_mi : l_cur;
      trace.steps.push_back({j, l_cur, l_next});
      cur = std::move(next);
      l_cur = l_next;
      changed = changed || step_changed;
    }
    if (!changed) break;
  }
  trace.final = cur;
  return trace;
}

// Compression never disturbs the other degree-1 coefficients and never
// shrinks |z_j|; the compressed z_j is nonnegative.
inline bool check_lemma_fourier_prop(const BooleanFunction& b, int j) {
  if (j < 1 || j > b.dimension()) throw std::out_of_range("check_lemma_fourier_prop: coordinate out of range");
  const FourierSpectrum before = wht(to_real(b));
  const FourierSpectrum after = wht(to_real(compress(b, j)));
  for (int i = 0; i < b.dimension(); ++i) {
    const std::int64_t mask = std::int64_t{1} << i;
    if (i == j - 1) {
      if (std::abs(after.coeffs[mask]) < std::abs(before.coeffs[mask]) - 1e-12) return false;
      if (after.coeffs[mask] < -1e-12) return false;
    } else if (after.coeffs[mask] != before.coeffs[mask]) {
      return false;
    }
  }
  return true;
}

// For b nondecreasing in every coordinate, all degree-1 coefficients are
// nonnegative. The precondition is checked and reported distinctly.
inline bool check_lemma_xi_pos(const BooleanFunction& b) {
  if (!is_monotone(b)) throw std::invalid_argument("check_lemma_xi_pos: b is not monotone");
  const FourierSpectrum s = wht(to_real(b));
  for (int i = 0; i < b.dimension(); ++i)
    if (s.coeffs[std::int64_t{1} << i] < -1e-12) return false;
  return true;
}

// z_i <= 1 - |mu| for every Boolean function.
inline bool check_lemma_boolean_prop(const BooleanFunction& b) {
  const FourierSpectrum s = wht(to_real(b));
  const double cap_z = 1.0 - std::abs(s.coeffs[0]) + 1e-12;
  for (int i = 0; i < b.dimension(); ++i)
    if (s.coeffs[std::int64_t{1} << i] > cap_z) return false;
  return true;
}

}  // namespace hyperinfo
