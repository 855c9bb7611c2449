#pragma once

// Reference computations that share no code path with the library solvers:
// brute-force pair sampling for q-numerical radii and scalar closed forms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Vec random_unit(std::mt19937_64& g, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(nd(g), nd(g));
  return v / v.norm();
}

/// |<T x, y>| for a pair built as y = conj(q) x + sqrt(1-|q|^2) z with z a
/// random unit vector orthogonalized against x.
inline double pair_value(const Mat& t, const Vec& x, const Vec& zraw, double q) {
  const double s = q >= 1.0 ? 0.0 : std::sqrt(1.0 - q * q);
  Vec z = zraw - x * x.dot(zraw);
  const double zn = z.norm();
  if (zn < 1e-14) return 0.0;
  z /= zn;
  const Vec y = q * x + s * z;
  return std::abs(y.dot(t * x));
}

/// Pure random pair sampling.
inline double sample_pairs(const Mat& t, double q, long samples, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  double best = 0.0;
  for (long k = 0; k < samples; ++k) {
    const Vec x = random_unit(g, t.rows());
    const Vec z = random_unit(g, t.rows());
    best = std::max(best, pair_value(t, x, z, q));
  }
  return best;
}

/// Pair sampling followed by random-perturbation hill climbing on (x, z);
/// `samples` counts every evaluated pair.
inline double sample_pairs_refined(const Mat& t, double q, long samples, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  const Eigen::Index n = t.rows();
  const long explore = samples / 2;
  Vec bx = random_unit(g, n), bz = random_unit(g, n);
  double best = pair_value(t, bx, bz, q);
  for (long k = 1; k < explore; ++k) {
    const Vec x = random_unit(g, n);
    const Vec z = random_unit(g, n);
    const double v = pair_value(t, x, z, q);
    if (v > best) {
      best = v;
      bx = x;
      bz = z;
    }
  }
  double step = 0.2;
  for (long k = explore; k < samples; ++k) {
    Vec x = bx + step * random_unit(g, n);
    Vec z = bz + step * random_unit(g, n);
    x /= x.norm();
    z /= z.norm();
    const double v = pair_value(t, x, z, q);
    if (v > best) {
      best = v;
      bx = x;
      bz = z;
      step = std::min(0.5, step * 1.5);
    } else {
      step = std::max(1e-9, step * 0.995);
    }
  }
  return best;
}

/// w_q of the 2x2 Jordan block [[0,1],[0,0]].
inline double jordan_wq(double q) { return (1.0 + std::sqrt(1.0 - q * q)) / 2.0; }

inline double geo(double a, double b, double t) { return std::pow(a, 1.0 - t) * std::pow(b, t); }
inline double logmean(double a, double b) { return a == b ? a : (a - b) / (std::log(a) - std::log(b)); }
inline double heinz(double a, double b, double t) { return 0.5 * (geo(a, b, t) + geo(a, b, 1.0 - t)); }

}  // namespace oracle
