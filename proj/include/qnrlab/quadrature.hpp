#pragma once

// Gauss rules on [0, 1] for the weight s^a (1-s)^b (Golub-Welsch on the Jacobi
// recurrence), plus a tanh-substitution rule for the same weight.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "qnrlab/linalg.hpp"

namespace qnrlab {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double total_weight() const {
    double m = 0.0;
    for (double w : weights) m += w;
    return m;
  }
};

namespace detail {

inline QuadRule golub_welsch_jacobi01(int n, double a, double b) {
  // Jacobi polynomials on [-1, 1] with weight (1-x)^al (1+x)^be; s = (1+x)/2
  // turns s^a (1-s)^b into that weight with al = b, be = a.
  const double al = b;
  const double be = a;
  const double ab = al + be;
  RVector diag(n);
  RVector sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(0) = (be - al) / (ab + 2.0);
    } else {
      const double d = 2.0 * k + ab;
      diag(k) = (be * be - al * al) / (d * (d + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double d = 2.0 * k + ab;
      b2 = 4.0 * k * (k + al) * (k + be) * (k + ab) / (d * d * (d + 1.0) * (d - 1.0));
    }
    sub(k - 1) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  // Mass of s^a (1-s)^b on [0, 1] is B(a+1, b+1).
  const double mass = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = std::clamp((1.0 + es.eigenvalues()(k)) / 2.0, 0.0, 1.0);
    rule.weights[static_cast<std::size_t>(k)] = mass * v0 * v0;
  }
  return rule;
}

}  // namespace detail

/// n-point Gauss rule for the weight s^a (1-s)^b on [0, 1]; a, b > -1.
/// Rules are memoized; the cache is guarded for concurrent callers.
inline const QuadRule& gauss_jacobi01(int n, double a, double b) {
  if (n < 1) throw Error(Errc::InvalidArgument, "quadrature needs at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw Error(Errc::InvalidMeasure, "Jacobi exponents must exceed -1");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<QuadRule>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<QuadRule>(detail::golub_welsch_jacobi01(n, a, b));
  return *slot;
}

inline const QuadRule& gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0, 0.0); }

/// Composite Gauss-Legendre rule on [lo, hi] with `panels` equal panels of `order` nodes.
inline QuadRule composite_legendre(double lo, double hi, int panels, int order) {
  const QuadRule& base = gauss_legendre01(order);
  QuadRule rule;
  const double h = (hi - lo) / panels;
  rule.nodes.reserve(static_cast<std::size_t>(panels * order));
  rule.weights.reserve(static_cast<std::size_t>(panels * order));
  for (int p = 0; p < panels; ++p) {
    const double left = lo + p * h;
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      rule.nodes.push_back(left + h * base.nodes[k]);
      rule.weights.push_back(h * base.weights[k]);
    }
  }
  return rule;
}

/// Rule for s^a (1-s)^b on [0,1] via s = (1 + tanh v)/2. The transformed
/// weight decays like exp(2(a+1)v) and exp(-2(b+1)v); the v-range is cut where
/// it drops below 1e-17. `panels` is a lower bound on the panel count.
inline QuadRule tanh_rule01(int panels, double a, double b, int order = 8) {
  if (!(a > -1.0) || !(b > -1.0)) throw Error(Errc::InvalidMeasure, "exponents must exceed -1");
  constexpr double kLogCut = 39.2;  // -ln(1e-17)
  const double lo = -kLogCut / (2.0 * (a + 1.0));
  const double hi = kLogCut / (2.0 * (b + 1.0));
  // Panels no wider than 1 keep the poles of tanh at v = +-i pi/2 far enough away.
  const int needed = static_cast<int>(std::ceil(hi - lo));
  const QuadRule base = composite_legendre(lo, hi, std::max(panels, needed), order);
  QuadRule rule;
  for (std::size_t k = 0; k < base.nodes.size(); ++k) {
    const double v = base.nodes[k];
    // log s = -log1p(e^{-2v}), log(1-s) = -log1p(e^{2v}); ds = 2 s (1-s) dv
    const double log_s = v < 0.0 ? 2.0 * v - std::log1p(std::exp(2.0 * v)) : -std::log1p(std::exp(-2.0 * v));
    const double log_1ms = v > 0.0 ? -2.0 * v - std::log1p(std::exp(-2.0 * v)) : -std::log1p(std::exp(2.0 * v));
    const double w = 2.0 * std::exp((a + 1.0) * log_s + (b + 1.0) * log_1ms);
    if (w == 0.0) continue;
    rule.nodes.push_back(std::exp(log_s));
    rule.weights.push_back(w * base.weights[k]);
  }
  return rule;
}

}  // namespace qnrlab
