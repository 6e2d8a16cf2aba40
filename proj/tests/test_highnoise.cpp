#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "hyperinfo/highnoise.hpp"
#include "hyperinfo/info.hpp"
#include "oracles.hpp"

using namespace hyperinfo;

namespace {

// evaluates a per-lambda quantity over a log grid and fits the order
template <typename Fn>
ScalingFit fit_quantity(const std::vector<double>& grid, Fn&& quantity) {
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (double l : grid) vals.push_back(quantity(NoiseParams::from_lambda(l)));
  return scaling_fit(grid, vals);
}

}  // namespace

TEST_CASE("even/odd split: exact symmetry and disjoint level support") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const RealFunction f = oracle::random_real(n, rng, -2.0, 2.0);
    const EvenOddSplit s = split_even_odd(f);
    const std::int64_t all = f.size() - 1;
    for (std::int64_t m = 0; m < f.size(); ++m) {
      CHECK(std::abs(s.f0.values[m] + s.f1.values[m] - f.values[m]) <= 1e-15);
      CHECK(s.f0.values[m] == s.f0.values[all ^ m]);
      CHECK(s.f1.values[m] == -s.f1.values[all ^ m]);
    }
    const FourierSpectrum s0 = wht(s.f0), s1 = wht(s.f1);
    for (std::int64_t mask = 0; mask <= all; ++mask) {
      const bool odd = std::popcount(static_cast<std::uint64_t>(mask)) % 2;
      CHECK(std::abs(odd ? s0.coeffs[mask] : s1.coeffs[mask]) <= 1e-12);
    }
  }
}

TEST_CASE("noisy triple: closed forms for the two smallest densities") {
  const NoiseParams p = NoiseParams::from_alpha(0.3);
  {
    const NoisyTriple t = noisy_triple(dictator_lift_density(), p);
    CHECK(t.F.values[0] == 1.0);
    CHECK(t.F.values[1] == 1.0);
    CHECK(t.V.values.abs().maxCoeff() == 0.0);
    CHECK(std::abs(t.Z.values[0] - p.rho) <= 1e-15);
    CHECK(std::abs(t.Z.values[1] + p.rho) <= 1e-15);
    CHECK(std::abs(t.l1 - 1.0) <= 1e-15);
    const MomentReport m = moments(t);
    CHECK(std::abs(m.ez2 - p.lambda) <= 1e-15);
    CHECK(std::abs(m.ez2_over_f - p.lambda) <= 1e-15);
    CHECK(std::abs(m.ez4 - p.lambda * p.lambda) <= 1e-15);
  }
  {
    const NoisyTriple t = noisy_triple(two_coord_density(), p);
    CHECK(t.Z.values.abs().maxCoeff() == 0.0);
    const MomentReport m = moments(t);
    CHECK(std::abs(m.ev2 - p.lambda * p.lambda / 4.0) <= 1e-15);
    CHECK(std::abs(m.ev3abs - p.lambda * p.lambda * p.lambda / 8.0) <= 1e-15);
    CHECK(m.l1 == 0.0);
  }
  RealFunction bad = zeros(2);
  bad.values << 2.0, 1.0, 1.0, -0.5;
  CHECK_THROWS_AS(noisy_triple(bad, p), std::invalid_argument);
  RealFunction off = zeros(1);
  off.values << 1.5, 1.0;
  CHECK_THROWS_AS(noisy_triple(off, p), std::invalid_argument);
}

TEST_CASE("dominance: F >= 0 and |Z| <= F for every density") {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const RealFunction f = (t % 2 == 0)
                               ? random_bounded_density(n, rng)
                               : indicator_density(oracle::random_nonconstant(n, rng));
    for (double alpha : {0.0, 0.05, 0.15, 0.25, 0.35, 0.45}) {
      const NoisyTriple tr = noisy_triple(f, NoiseParams::from_alpha(alpha));
      CHECK(tr.F.values.minCoeff() >= 0.0);
      CHECK((tr.F.values - tr.Z.values.abs()).minCoeff() >= -1e-12);
    }
  }
}

TEST_CASE("second moments equal noise-weighted level sums") {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const RealFunction f = (t % 2 == 0)
                               ? random_bounded_density(n, rng)
                               : indicator_density(oracle::random_nonconstant(n, rng));
    const NoiseParams p = NoiseParams::from_alpha(0.05 + 0.40 * (t % 9) / 8.0);
    const NoisyTriple tr = noisy_triple(f, p);
    const MomentReport m = moments(tr);
    const FourierSpectrum s = wht(f);
    double odd_sum = 0, even_sum = 0, pw = 1;
    for (int k = 1; k <= n; ++k) {
      pw *= p.lambda;
      if (k % 2) odd_sum += pw * level_weight(s, k);
      else even_sum += pw * level_weight(s, k);
    }
    CHECK(std::abs(m.ez2 - odd_sum) <= 1e-12);
    CHECK(std::abs(m.ev2 - even_sum) <= 1e-12);
    CHECK(m.l1 == level_weight(s, 1));
    // Cauchy-Schwarz ties the cross moment down
    CHECK(std::abs(m.ez2v) <= std::sqrt(m.ez4 * m.ev2) + 1e-12);
  }
}

TEST_CASE("entropy decomposition: exact symmetrization and bounded gap") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const RealFunction f = (t % 2 == 0)
                               ? random_bounded_density(n, rng)
                               : indicator_density(oracle::random_nonconstant(n, rng));
    const NoiseParams p = NoiseParams::from_alpha(t % 2 ? 0.3 : 0.45);
    const NoisyTriple tr = noisy_triple(f, p);

    // Ent(T f) recombines from the symmetrized halves exactly
    double sym = 0;
    for (std::int64_t m = 0; m < tr.F.size(); ++m) {
      const double a = tr.F.values[m] + tr.Z.values[m];
      const double b = tr.F.values[m] - tr.Z.values[m];
      if (a > 0) sym += 0.5 * a * std::log2(a);
      if (b > 0) sym += 0.5 * b * std::log2(b);
    }
    sym /= static_cast<double>(tr.F.size());
    CHECK(std::abs(ent_functional(apply_noise(f, p)) - sym) <= 1e-12);

    const DecompositionGap g = entropy_decomposition_gap(f, p);
    CHECK(g.gap >= -1e-12);
    CHECK(g.gap <= g.bound_term + 1e-12);
  }

  // pure-odd density: F = 1, so the gap is the full quartic correction
  const NoiseParams p = NoiseParams::from_alpha(0.25);
  const DecompositionGap gd = entropy_decomposition_gap(dictator_lift_density(), p);
  CHECK(std::abs(gd.gap - (capacity(p) - p.lambda / (2.0 * std::numbers::ln2))) <= 1e-14);
  CHECK(std::abs(gd.bound_term - p.lambda * p.lambda) <= 1e-15);
  // pure-even density: Z = 0, nothing to correct
  const DecompositionGap ge = entropy_decomposition_gap(two_coord_density(), p);
  CHECK(std::abs(ge.gap) <= 1e-15);
  CHECK(ge.bound_term == 0.0);
}

TEST_CASE("scaling fit: recovers exact power laws, rejects junk") {
  const std::vector<double> grid = log_grid(1e-3, 1e-1, 12);
  std::vector<double> sq, cube;
  for (double l : grid) {
    sq.push_back(l * l);
    cube.push_back(l * l * l / 8.0);
  }
  const ScalingFit f2 = scaling_fit(grid, sq);
  CHECK(std::abs(f2.slope - 2.0) <= 1e-12);
  CHECK(std::abs(f2.intercept) <= 1e-10);
  CHECK(f2.r2 >= 1.0 - 1e-12);
  CHECK(f2.n_points == 12);
  CHECK(f2.n_excluded == 0);
  CHECK(f2.window_lo == 1e-3);
  CHECK(f2.window_hi == 1e-1);
  const ScalingFit f3 = scaling_fit(grid, cube);
  CHECK(std::abs(f3.slope - 3.0) <= 1e-12);
  CHECK(std::abs(f3.intercept - std::log(0.125)) <= 1e-10);

  std::vector<double> with_zeros = sq;
  with_zeros[0] = 0.0;
  with_zeros[5] = 0.0;
  CHECK(scaling_fit(grid, with_zeros).n_excluded == 2);
  CHECK(scaling_fit(grid, with_zeros).n_points == 10);

  CHECK_THROWS_AS(scaling_fit({1e-3, 1e-2, 1e-1}, {1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(scaling_fit({1e-3, 1e-3, 1e-2, 1e-1}, {1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(scaling_fit({1e-3, 1e-2, 1e-1, 1.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("asymptotic orders across the density family") {
  const std::vector<double> grid = log_grid(1e-3, 1e-1, 12);
  const RealFunction maj3 = indicator_density(BooleanFunction::majority(3));
  const RealFunction maj5 = indicator_density(BooleanFunction::majority(5));
  const RealFunction trb = indicator_density(tribes6());
  const RealFunction two = two_coord_density();

  // pure-even density: V is the whole story
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return moments(noisy_triple(two, p)).ev2; }).slope >= 1.95);
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return moments(noisy_triple(two, p)).ev3abs; }).slope >= 2.9);
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return ent_functional(apply_noise(two, p)); }).slope >= 1.95);

  // odd density: the post-linear part of E[Z^2] is exactly lambda^3 W_3 = lambda^3/4
  const ScalingFit zfit = fit_quantity(grid, [&](const NoiseParams& p) {
    const MomentReport m = moments(noisy_triple(maj3, p));
    return m.ez2 - p.lambda * m.l1;
  });
  CHECK(zfit.slope >= 2.9);
  CHECK(zfit.r2 >= 1.0 - 1e-9);
  CHECK(std::abs(std::exp(zfit.intercept) - 0.25) <= 1e-6);
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return moments(noisy_triple(maj3, p)).ez4; }).slope >= 1.95);

  // mixed-spectrum density
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return moments(noisy_triple(trb, p)).ev2; }).slope >= 1.95);
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return moments(noisy_triple(trb, p)).ez4; }).slope >= 1.95);
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return theorem3_residual(trb, p); }).slope >= 1.95);
  CHECK(fit_quantity(grid, [&](const NoiseParams& p) { return theorem3_residual(maj5, p); }).slope >= 1.95);
}

TEST_CASE("first-order entropy residual: exact zero and quadratic coefficient") {
  RealFunction ones = zeros(4);
  ones.values.setConstant(1.0);
  for (double alpha : {0.1, 0.3, 0.45}) {
    CHECK(theorem3_residual(ones, NoiseParams::from_alpha(alpha)) == 0.0);
  }
  // residual of 1 + x1 is the capacity expansion beyond its linear term
  const NoiseParams tiny = NoiseParams::from_lambda(1e-3);
  const double res = theorem3_residual(dictator_lift_density(), tiny);
  const double c2 = 1.0 / (12.0 * std::numbers::ln2);
  CHECK(std::abs(res / (1e-3 * 1e-3) - c2) <= 0.01 * c2);
  const ScalingFit rf = fit_quantity(log_grid(1e-3, 1e-1, 12), [](const NoiseParams& p) {
    return theorem3_residual(dictator_lift_density(), p);
  });
  CHECK(rf.slope >= 1.95);
}

TEST_CASE("lq norms and level-wise hypercontractivity") {
  RealFunction c = zeros(3);
  c.values.setConstant(0.7);
  CHECK(std::abs(lq_norm(c, 3.0) - 0.7) <= 1e-15);
  CHECK_THROWS_AS(lq_norm(c, 0.5), std::invalid_argument);

  std::mt19937_64 rng(505);
  for (int t = 0; t < 10000; ++t) {
    const int k = 1 + static_cast<int>(rng() % 4);
    const int n = k + static_cast<int>(rng() % static_cast<std::uint64_t>(9 - k));
    const RealFunction h = fourier_level_part(oracle::random_real(n, rng, -1.0, 1.0), k);
    const double l2 = lq_norm(h, 2.0);
    for (double q : {3.0, 4.0}) {
      CHECK(lq_norm(h, q) <= std::pow(std::sqrt(q - 1.0), k) * l2 + 1e-12);
    }
  }
  // parity saturates: all norms agree on +/-1 values
  const RealFunction par = to_real(BooleanFunction::parity(3));
  CHECK(std::abs(lq_norm(par, 4.0) - 1.0) <= 1e-15);
}

TEST_CASE("capacity expansion remainder is cubic") {
  std::vector<double> alphas;
  for (double l : log_grid(1e-3, 0.15, 14)) alphas.push_back(NoiseParams::from_lambda(l).alpha);
  const ScalingFit fit = capacity_expansion_check(alphas);
  CHECK(fit.slope >= 2.9);
  CHECK(fit.r2 >= 0.999);

  const NoiseParams p = NoiseParams::from_lambda(1e-3);
  const double first = (capacity(p) - p.lambda / (2.0 * std::numbers::ln2)) / (p.lambda * p.lambda);
  CHECK(std::abs(first - 1.0 / (12.0 * std::numbers::ln2)) <= 0.01 / (12.0 * std::numbers::ln2));
}

TEST_CASE("threshold curves: ratio values, monotonicity, slope gap") {
  const std::vector<double> grid = log_grid(1e-6, 1e-1, 25);
  const ThresholdTable t = threshold_curves(grid);
  REQUIRE(t.rows.size() == grid.size());
  CHECK(t.ratio_monotone);
  CHECK(t.ratio_below_one);
  for (const ThresholdRow& r : t.rows) {
    const double lg = std::pow(std::log(1.0 / r.lambda), 1.5);
    CHECK(std::abs(r.t_new - (r.lambda + r.lambda * lg)) <= 1e-15);
    CHECK(std::abs(r.t_old - std::cbrt(r.lambda) * lg) <= 1e-15);
    CHECK(r.ratio < 1.0);
  }
  const ThresholdTable one = threshold_curves({1e-3});
  CHECK(std::abs(one.rows[0].ratio - 0.010550800828540192) <= 1e-12);

  std::vector<double> tn, to;
  for (const ThresholdRow& r : t.rows) {
    tn.push_back(r.t_new);
    to.push_back(r.t_old);
  }
  const double gap = scaling_fit(grid, tn).slope - scaling_fit(grid, to).slope;
  CHECK(std::abs(gap - 2.0 / 3.0) <= 0.05);

  CHECK_THROWS_AS(threshold_curves({0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(threshold_curves({0.0}), std::invalid_argument);
}

TEST_CASE("standard density family is well formed") {
  std::mt19937_64 rng(606);
  const auto fam = standard_density_family(rng);
  REQUIRE(fam.size() == 6);
  CHECK(fam[0].first == "dictator_lift");
  CHECK(fam[5].first == "random_bounded");
  for (const auto& [name, f] : fam) {
    CHECK(f.values.minCoeff() >= 0.0);
    CHECK(std::abs(f.mean() - 1.0) <= 1e-12);
    CHECK(f.values.maxCoeff() <= 64.0 / 15.0 + 1e-12);  // tribes is the spikiest
  }
}
