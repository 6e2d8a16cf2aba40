#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hyperinfo/boolean_function.hpp"

namespace hyperinfo {

// Dense real-valued function on the n-cube, one entry per point index
// (same indexing convention as BooleanFunction).
struct RealFunction {
  int n = 0;
  Eigen::ArrayXd values;

  RealFunction() = default;
  RealFunction(int dim, Eigen::ArrayXd vals) : n(dim), values(std::move(vals)) {
    if (n < 1 || n > kMaxDenseDimension)
      throw std::invalid_argument("dimension must be in [1, 20]");
    if (values.size() != (Eigen::Index{1} << n))
      throw std::invalid_argument("value vector length must be 2^n");
  }

  std::int64_t size() const { return std::int64_t{1} << n; }

  double mean() const { return values.mean(); }

  bool all_finite() const { return values.isFinite().all(); }
};

inline RealFunction zeros(int n) {
  return RealFunction(n, Eigen::ArrayXd::Zero(Eigen::Index{1} << n));
}

// Coordinates of the point with the given index, as a +/-1 vector.
inline Eigen::ArrayXd point_vector(std::int64_t index, int n) {
  if (index < 0 || index >= (std::int64_t{1} << n))
    throw std::out_of_range("point_vector: index out of range");
  Eigen::ArrayXd x(n);
  for (int i = 0; i < n; ++i) x[i] = ((index >> i) & 1) ? -1.0 : 1.0;
  return x;
}

inline std::int64_t point_index(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  std::int64_t m = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == -1.0)
      m |= std::int64_t{1} << i;
    else if (x[i] != 1.0)
      throw std::invalid_argument("point_index: coordinates must be +/-1");
  }
  return m;
}

inline RealFunction to_real(const BooleanFunction& b) {
  RealFunction f = zeros(b.dimension());
  for (std::int64_t m = 0; m < b.size(); ++m) f.values[m] = b.value(m);
  return f;
}

// Density of the uniform distribution conditioned on {b = +1}:
// g = 1{b=+1} / P(b=+1). Mean exactly 1; throws for the all-(-1) table.
inline RealFunction indicator_density(const BooleanFunction& b) {
  const std::int64_t ones = b.count_ones();
  if (ones == 0) throw std::invalid_argument("indicator_density: empty support");
  RealFunction g = zeros(b.dimension());
  const double scale = static_cast<double>(b.size()) / static_cast<double>(ones);
  for (std::int64_t m = 0; m < b.size(); ++m)
    if (b.bit(m)) g.values[m] = scale;
  return g;
}

}  // namespace hyperinfo
