#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hyperinfo {

// Least-squares fit of log(value) against log(lambda); slope estimates the
// asymptotic order of a quantity that behaves like c * lambda^k.
struct ScalingFit {
  Eigen::ArrayXd lambda_grid;  // fitted points only, strictly increasing
  Eigen::ArrayXd values;
  double slope = 0;
  double intercept = 0;  // in natural-log space
  double r2 = 0;
  int n_points = 0;
  int n_excluded = 0;  // nonpositive/underflowed values dropped before fitting
  double window_lo = 0, window_hi = 0;
};

inline ScalingFit scaling_fit(const std::vector<double>& lambda,
                              const std::vector<double>& value) {
  if (lambda.size() != value.size())
    throw std::invalid_argument("scaling_fit: series lengths differ");
  std::vector<double> ls, vs;
  int excluded = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i > 0 && !(lambda[i] > lambda[i - 1]))
      throw std::invalid_argument("scaling_fit: lambda grid must be strictly increasing");
    if (lambda[i] > 0.0 && value[i] > 1e-300) {
      ls.push_back(lambda[i]);
      vs.push_back(value[i]);
    } else {
      ++excluded;
    }
  }
  const Eigen::Index m = static_cast<Eigen::Index>(ls.size());
  if (m < 4) throw std::invalid_argument("scaling_fit: fewer than 4 usable points");

  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, 0) = std::log(ls[static_cast<std::size_t>(i)]);
    A(i, 1) = 1.0;
    y(i) = std::log(vs[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d beta = A.colPivHouseholderQr().solve(y);

  ScalingFit fit;
  fit.lambda_grid = Eigen::Map<const Eigen::ArrayXd>(ls.data(), m);
  fit.values = Eigen::Map<const Eigen::ArrayXd>(vs.data(), m);
  fit.slope = beta(0);
  fit.intercept = beta(1);
  const double ss_res = (A * beta - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.n_points = static_cast<int>(m);
  fit.n_excluded = excluded;
  fit.window_lo = ls.front();
  fit.window_hi = ls.back();
  return fit;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  if (points < 2) throw std::invalid_argument("log_grid: need at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double step = (std::log(hi) - std::log(lo)) / (points - 1);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + i * step);
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("linear_grid: bad range");
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + step * 1e-9) break;
    g.push_back(v);
  }
  return g;
}

}  // namespace hyperinfo
