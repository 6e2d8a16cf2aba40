#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hyperinfo/entropy.hpp"
#include "hyperinfo/noise.hpp"

namespace hyperinfo {

// Derived quantities of a bias value mu: K = (1+|mu|)/(1-|mu|), C = 1-|mu|,
// R2 = 1-mu^2. Note K*C^2 = R2.
struct BiasedParams {
  double mu = 0;
  double rho = 1;
  double K = 1;
  double C = 1;
  double R2 = 1;

  static BiasedParams make(double mu, double rho) {
    const double a = std::abs(mu);
    if (!(a < 1.0)) throw std::invalid_argument("BiasedParams: |mu| must be < 1");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("BiasedParams: rho must be in (0,1]");
    BiasedParams b;
    b.mu = mu;
    b.rho = rho;
    b.C = 1.0 - a;
    b.K = (1.0 + a) / (1.0 - a);
    b.R2 = 1.0 - mu * mu;
    return b;
  }
};

// Mean posterior entropy of a +/-1 variable with bias mu given one noisy
// coordinate whose degree-1 coefficient is z:
//   h_mu(z) = H((1+mu+rho z)/2)/2 + H((1+mu-rho z)/2)/2.
// Symmetric in z by construction (the two entropy arguments swap).
inline double h_mu(double z, double mu, const NoiseParams& p) {
  if (std::abs(mu) + p.rho * std::abs(z) > 1.0 + 1e-15)
    throw std::domain_error("h_mu: |mu| + rho|z| exceeds 1");
  return 0.5 * binary_entropy((1.0 + mu + p.rho * z) / 2.0) +
         0.5 * binary_entropy((1.0 + mu - p.rho * z) / 2.0);
}

// Information gain of one noisy coordinate: g_mu(z) = H((1+mu)/2) - h_mu(z).
inline double g_mu(double z, double mu, const NoiseParams& p) {
  return binary_entropy((1.0 + mu) / 2.0) - h_mu(z, mu, p);
}

// Same gain as a function of w = z^2; the convex objective of the polytope step.
inline double psi_mu(double w, double mu, const NoiseParams& p) {
  if (w < 0.0) {
    if (w < -1e-15) throw std::domain_error("psi_mu: w < 0");
    w = 0.0;
  }
  return g_mu(std::sqrt(w), mu, p);
}

// M_K(rho) = K H(K/(K+1)) - (K/2) H((K+rho)/(K+1)) - (K/2) H((K-rho)/(K+1)).
inline double m_k(double K, const NoiseParams& p) {
  if (K < 1.0) throw std::invalid_argument("m_k: K must be >= 1");
  if (p.rho == 0.0) return 0.0;
  return K * binary_entropy(K / (K + 1.0)) -
         0.5 * K * binary_entropy((K + p.rho) / (K + 1.0)) -
         0.5 * K * binary_entropy((K - p.rho) / (K + 1.0));
}

// d/drho of m_k; diverges at rho = 1, so the open interval is enforced.
inline double m_k_prime(double K, const NoiseParams& p) {
  if (K < 1.0) throw std::invalid_argument("m_k_prime: K must be >= 1");
  if (!(p.rho > 0.0 && p.rho < 1.0))
    throw std::domain_error("m_k_prime: rho must be in (0,1)");
  const double num = (1.0 + p.rho) * (K + p.rho);
  const double den = (1.0 - p.rho) * (K - p.rho);
  return K / (2.0 * (K + 1.0) * std::numbers::ln2) * std::log(num / den);
}

// f(x) = (1/x) ln((1+x)/(1-x)) = 2 sum_{j>=0} x^(2j)/(2j+1); f(0) = 2.
inline double series_f(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("series_f: x must be in [0,1)");
  if (x == 0.0) return 2.0;
  return (std::log1p(x) - std::log1p(-x)) / x;
}

/*
 * Maximum of sum_i psi_mu(w_i) over the polytope {w >= 0, sum w <= R^2,
 * w_i <= C^2}: attained at an extreme point with k = floor(K) coordinates
 * at C^2 and one at theta C^2, theta = K - k (or all n at C^2 when n < K).
 * K within 1e-12 of an integer snaps theta to 0.
 */
inline double extreme_point_bound(int n, double mu, const NoiseParams& p) {
  const double a = std::abs(mu);
  if (a > 1.0) throw std::invalid_argument("extreme_point_bound: |mu| > 1");
  if (a == 1.0) return 0.0;  // constant function, no information
  if (p.rho == 0.0) return 0.0;
  if (n < 1) throw std::invalid_argument("extreme_point_bound: n must be >= 1");
  const BiasedParams bp = BiasedParams::make(a, p.rho);
  const double C2 = bp.C * bp.C;
  if (static_cast<double>(n) < bp.K) return n * psi_mu(C2, a, p);
  double k = std::floor(bp.K);
  double theta = bp.K - k;
  if (theta > 1.0 - 1e-12) {
    k += 1.0;
    theta = 0.0;
  } else if (theta < 1e-12) {
    theta = 0.0;
  }
  double bound = k * psi_mu(C2, a, p);
  if (theta > 0.0) bound += psi_mu(theta * C2, a, p);
  return bound;
}

struct BoundChainPoint {
  double K, rho;
  double m_k, m_k_prime;
  double margin_vs_m1;  // M_1(rho) - M_K(rho)
};

struct BoundChainReport {
  std::vector<BoundChainPoint> points;
  double worst_value_margin = 0;  // min over grid of M_1 - M_K
  double worst_deriv_margin = 0;  // min over grid of M_1' - M_K'
  double worst_value_K = 1, worst_value_rho = 0;
  double worst_deriv_K = 1, worst_deriv_rho = 0;

  bool all_within(double tol) const {
    return worst_value_margin >= -tol && worst_deriv_margin >= -tol;
  }
};

// Checks M_K(rho) <= M_1(rho) and M_K'(rho) <= M_1'(rho) on the grid product,
// recording worst margins and where they occur.
inline BoundChainReport verify_thm2_bound_chain(const std::vector<double>& K_grid,
                                                const std::vector<double>& rho_grid) {
  BoundChainReport rep;
  rep.worst_value_margin = rep.worst_deriv_margin = std::numeric_limits<double>::infinity();
  for (double rho : rho_grid) {
    const NoiseParams p = NoiseParams::from_rho(rho);
    const double m1 = m_k(1.0, p);
    const double m1p = m_k_prime(1.0, p);
    for (double K : K_grid) {
      BoundChainPoint pt;
      pt.K = K;
      pt.rho = rho;
      pt.m_k = m_k(K, p);
      pt.m_k_prime = m_k_prime(K, p);
      pt.margin_vs_m1 = m1 - pt.m_k;
      if (pt.margin_vs_m1 < rep.worst_value_margin) {
        rep.worst_value_margin = pt.margin_vs_m1;
        rep.worst_value_K = K;
        rep.worst_value_rho = rho;
      }
      const double dmargin = m1p - pt.m_k_prime;
      if (dmargin < rep.worst_deriv_margin) {
        rep.worst_deriv_margin = dmargin;
        rep.worst_deriv_K = K;
        rep.worst_deriv_rho = rho;
      }
      rep.points.push_back(pt);
    }
  }
  return rep;
}

}  // namespace hyperinfo
