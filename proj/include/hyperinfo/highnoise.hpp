#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperinfo/boolean_function.hpp"
#include "hyperinfo/entropy.hpp"
#include "hyperinfo/fourier.hpp"
#include "hyperinfo/noise.hpp"
#include "hyperinfo/real_function.hpp"
#include "hyperinfo/scaling.hpp"

namespace hyperinfo {

struct EvenOddSplit {
  RealFunction f0;  // even part, carries E[f] and the even Fourier levels
  RealFunction f1;  // odd part, mean zero
};

// f0(x) = (f(x) + f(-x))/2, f1(x) = (f(x) - f(-x))/2. Negating a point in
// index space is complementing the index bits.
inline EvenOddSplit split_even_odd(const RealFunction& f) {
  EvenOddSplit s{zeros(f.n), zeros(f.n)};
  const std::int64_t all = f.size() - 1;
  for (std::int64_t m = 0; m < f.size(); ++m) {
    const double a = f.values[m];
    const double b = f.values[all ^ m];
    s.f0.values[m] = (a + b) / 2.0;
    s.f1.values[m] = (a - b) / 2.0;
  }
  return s;
}

// F = T_alpha f0, V = F - 1, Z = T_alpha f1 for a density f (f >= 0,
// E[f] = 1). Dominance: F >= 0 and |Z| <= F pointwise. l1 caches the
// level-1 Fourier weight of f for the moment identities.
struct NoisyTriple {
  RealFunction F, V, Z;
  NoiseParams params;
  double l1 = 0;
};

inline NoisyTriple noisy_triple(const RealFunction& f, const NoiseParams& p) {
  if (f.values.minCoeff() < -1e-12) throw std::invalid_argument("noisy_triple: f must be nonnegative");
  if (std::abs(f.mean() - 1.0) > 1e-12) throw std::invalid_argument("noisy_triple: f must have mean 1");
  const EvenOddSplit s = split_even_odd(f);
  NoisyTriple t;
  t.params = p;
  t.F = apply_noise(s.f0, p);
  t.V = RealFunction(f.n, t.F.values - 1.0);
  t.Z = apply_noise(s.f1, p);
  t.l1 = level_weight(wht(f), 1);
  return t;
}

struct MomentReport {
  double ev2 = 0;        // E[V^2]
  double ev3abs = 0;     // E[|V|^3]
  double ez2 = 0;        // E[Z^2]
  double ez4 = 0;        // E[Z^4]
  double ez2v = 0;       // E[Z^2 V]
  double ez2_over_f = 0;  // E[Z^2/F], F <= 1e-14 contributes 0
  double ez4_over_f3 = 0;  // E[Z^4/F^3], same convention
  double l1 = 0;
};

// Plain uniform-measure expectations. Where F vanishes, dominance forces
// Z = 0 there, so the ratio terms contribute nothing.
inline MomentReport moments(const NoisyTriple& t) {
  MomentReport r;
  r.l1 = t.l1;
  const std::int64_t size = t.F.size();
  for (std::int64_t m = 0; m < size; ++m) {
    const double v = t.V.values[m];
    const double z = t.Z.values[m];
    const double f = t.F.values[m];
    r.ev2 += v * v;
    r.ev3abs += std::abs(v) * v * v;
    r.ez2 += z * z;
    r.ez4 += z * z * z * z;
    r.ez2v += z * z * v;
    if (f > 1e-14) {
      r.ez2_over_f += z * z / f;
      r.ez4_over_f3 += z * z * z * z / (f * f * f);
    }
  }
  const double inv = 1.0 / static_cast<double>(size);
  r.ev2 *= inv;
  r.ev3abs *= inv;
  r.ez2 *= inv;
  r.ez4 *= inv;
  r.ez2v *= inv;
  r.ez2_over_f *= inv;
  r.ez4_over_f3 *= inv;
  return r;
}

struct DecompositionGap {
  double gap = 0;         // Ent(T f) - Ent(F) - E[Z^2/F]/(2 ln 2)
  double bound_term = 0;  // E[Z^4/F^3]
};

inline DecompositionGap entropy_decomposition_gap(const RealFunction& f, const NoiseParams& p) {
  const NoisyTriple t = noisy_triple(f, p);
  const MomentReport m = moments(t);
  DecompositionGap g;
  g.gap = ent_functional(apply_noise(f, p)) - ent_functional(t.F) -
          m.ez2_over_f / (2.0 * std::numbers::ln2);
  g.bound_term = m.ez4_over_f3;
  return g;
}

// Ent(T_alpha f) - lambda L1(f)/(2 ln 2): the part of the noisy entropy not
// explained by the first-order term.
inline double theorem3_residual(const RealFunction& f, const NoiseParams& p) {
  if (f.values.minCoeff() < -1e-12) throw std::invalid_argument("theorem3_residual: f must be nonnegative");
  if (std::abs(f.mean() - 1.0) > 1e-12) throw std::invalid_argument("theorem3_residual: f must have mean 1");
  const double l1 = level_weight(wht(f), 1);
  return ent_functional(apply_noise(f, p)) - p.lambda * l1 / (2.0 * std::numbers::ln2);
}

inline double lq_norm(const RealFunction& f, double q) {
  if (q < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
  return std::pow(f.values.abs().pow(q).mean(), 1.0 / q);
}

// |(1 - H(alpha)) - lambda/(2 ln 2) - lambda^2/(12 ln 2)| against lambda:
// the remainder of the capacity expansion, expected to scale like lambda^3.
inline ScalingFit capacity_expansion_check(const std::vector<double>& alpha_grid) {
  std::vector<std::pair<double, double>> rows;
  for (double a : alpha_grid) {
    const NoiseParams p = NoiseParams::from_alpha(a);
    if (!(p.lambda > 0.0 && p.lambda <= 0.2)) continue;
    const double residual = std::abs(capacity(p) - p.lambda / (2.0 * std::numbers::ln2) -
                                     p.lambda * p.lambda / (12.0 * std::numbers::ln2));
    rows.emplace_back(p.lambda, residual);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<double> ls, vs;
  for (auto& [l, v] : rows) {
    ls.push_back(l);
    vs.push_back(v);
  }
  return scaling_fit(ls, vs);
}

struct ThresholdRow {
  double lambda = 0;
  double t_new = 0;  // lambda + lambda (ln(1/lambda))^(3/2)
  double t_old = 0;  // lambda^(1/3) (ln(1/lambda))^(3/2)
  double ratio = 0;  // t_new / t_old
};

struct ThresholdTable {
  std::vector<ThresholdRow> rows;
  bool ratio_monotone = false;   // strictly decreasing toward lambda -> 0
  bool ratio_below_one = false;  // ratio < 1 wherever lambda < 1/e on the grid
};

inline ThresholdTable threshold_curves(const std::vector<double>& lambda_grid) {
  ThresholdTable t;
  for (double l : lambda_grid) {
    if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("threshold_curves: lambda must be in (0,1)");
    ThresholdRow r;
    r.lambda = l;
    const double log_term = std::pow(std::log(1.0 / l), 1.5);
    r.t_new = l + l * log_term;
    r.t_old = std::cbrt(l) * log_term;
    r.ratio = r.t_new / r.t_old;
    t.rows.push_back(r);
  }
  t.ratio_monotone = true;
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
    if (t.rows[i].lambda < t.rows[i + 1].lambda) {
      if (!(t.rows[i].ratio < t.rows[i + 1].ratio)) t.ratio_monotone = false;
    } else if (!(t.rows[i].ratio > t.rows[i + 1].ratio)) {
      t.ratio_monotone = false;
    }
  }
  t.ratio_below_one = true;
  for (const auto& r : t.rows)
    if (r.lambda < 1.0 / std::numbers::e && r.ratio >= 1.0) t.ratio_below_one = false;
  return t;
}

// --- test family of densities -----------------------------------------------

inline RealFunction dictator_lift_density() {  // 1 + x1 on n = 1
  RealFunction f = zeros(1);
  f.values[0] = 2.0;
  f.values[1] = 0.0;
  return f;
}

inline RealFunction two_coord_density() {  // 1 + x1 x2 / 2 on n = 2
  RealFunction f = zeros(2);
  for (std::int64_t m = 0; m < 4; ++m)
    f.values[m] = 1.0 + 0.5 * ((std::popcount(static_cast<std::uint64_t>(m & 3)) % 2) ? -1.0 : 1.0);
  return f;
}

// OR of two 3-wise ANDs on n = 6; +1 iff x1=x2=x3=+1 or x4=x5=x6=+1.
inline BooleanFunction tribes6() {
  BooleanFunction b(6);
  for (std::int64_t m = 0; m < 64; ++m)
    if ((m & 7) == 0 || (m & 56) == 0) b.set_bit(m, true);
  return b;
}

// Strictly positive density with values in [0.5, 1.5]/mean, so bounded by 4.
inline RealFunction random_bounded_density(int n, std::mt19937_64& rng) {
  RealFunction f = zeros(n);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (std::int64_t m = 0; m < f.size(); ++m) f.values[m] = u(rng);
  f.values /= f.mean();
  return f;
}

// Fixed density family spanning pure-odd, pure-even and mixed spectra.
inline std::vector<std::pair<std::string, RealFunction>> standard_density_family(std::mt19937_64& rng) {
  std::vector<std::pair<std::string, RealFunction>> fam;
  fam.emplace_back("dictator_lift", dictator_lift_density());
  fam.emplace_back("two_coord", two_coord_density());
  fam.emplace_back("majority3", indicator_density(BooleanFunction::majority(3)));
  fam.emplace_back("majority5", indicator_density(BooleanFunction::majority(5)));
  fam.emplace_back("tribes6", indicator_density(tribes6()));
  fam.emplace_back("random_bounded", random_bounded_density(6, rng));
  return fam;
}

}  // namespace hyperinfo
