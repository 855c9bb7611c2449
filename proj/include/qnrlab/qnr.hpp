#pragma once

// q-numerical radius and q-numerical range sampling.
//
// For a unit x and y = conj(q) x + sqrt(1-|q|^2) z with z a unit vector
// orthogonal to x, <Tx, y> = q <Tx,x> + sqrt(1-|q|^2) <Tx, z>. The supremum
// over z is attained at z parallel to the residual u = Tx - <Tx,x> x with its
// phase aligned to q<Tx,x>, so
//
//   w_q(T) = max_{|x|=1} |q| |<Tx,x>| + sqrt(1-|q|^2) |Tx - <Tx,x> x|.
//
// The outer maximization runs on the unit sphere of C^r with a multistart
// Riemannian conjugate-gradient ascent and a derivative-free line search.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qnrlab/linalg.hpp"
#include "qnrlab/random.hpp"
#include "qnrlab/sectorial.hpp"
#include "qnrlab/semi_hilbert.hpp"

namespace qnrlab {

class QParam {
 public:
  QParam(cplx q) : q_(q) {  // NOLINT(google-explicit-constructor): numbers convert naturally
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) || std::abs(q) > 1.0 + 1e-15) {
      throw Error(Errc::InvalidArgument, "q must satisfy |q| <= 1");
    }
  }
  QParam(double q) : QParam(cplx(q, 0.0)) {}  // NOLINT(google-explicit-constructor)

  cplx value() const { return q_; }
  double modulus() const { return std::min(1.0, std::abs(q_)); }
  /// sqrt(1 - |q|^2), exactly zero on the unit circle.
  double orth_weight() const {
    const double a = modulus();
    return a >= 1.0 ? 0.0 : std::sqrt(std::max(0.0, 1.0 - a * a));
  }

 private:
  cplx q_;
};

struct QPair {
  CVector x;
  CVector y;
};

struct QNRResult {
  double value = 0.0;
  QPair witness;
  double oracle_lower = 0.0;
  int starts = 0;
  bool converged = false;
  int iterations = 0;  // iterations used by the winning start
};

struct SolverCfg {
  int starts = 64;
  int angle_grid = 8;
  int max_iter = 200;
  double rel_tol = 1e-10;
  std::uint64_t seed = 0;
  int oracle_samples = 0;
};

struct PointCloud {
  std::vector<cplx> points;
  std::vector<std::size_t> hull;  // indices into points, counter-clockwise
};

namespace detail {

using SmallMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;
using SmallVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, 16, 1>;

/// |q| |<Tx,x>| + s |Tx - <Tx,x>x| and its Euclidean gradient.
template <class Mat, class Vec>
struct QObjective {
  const Mat& t;
  const Mat& th;  // T*
  double qa;
  double s;

  double value(const Vec& x) const {
    const Vec tx = t * x;
    const cplx mu = x.dot(tx);
    return qa * std::abs(mu) + s * (tx - mu * x).norm();
  }

  double value_grad(const Vec& x, Vec& g) const {
    const Vec tx = t * x;
    const cplx mu = x.dot(tx);
    const Vec u = tx - mu * x;
    const double amu = std::abs(mu);
    const double un = u.norm();
    g.setZero(x.size());
    const double scale = 1e-300 + 1e-14 * (amu + tx.norm());
    if (qa > 0.0 && amu > scale) g += (qa / amu) * (std::conj(mu) * tx + mu * (th * x));
    if (s > 0.0 && un > scale) g += (s / un) * (th * u - std::conj(mu) * u);
    return qa * amu + s * un;
  }
};

/// Re(c <Tx,x>) + s |Tx - <Tx,x>x|: the support of W_q(T) in direction conj(c)/|c|
/// after the optimal choice of z.
template <class Mat, class Vec>
struct DirectionalObjective {
  const Mat& t;
  const Mat& th;
  cplx c;
  double s;

  double value(const Vec& x) const {
    const Vec tx = t * x;
    const cplx mu = x.dot(tx);
    return (c * mu).real() + s * (tx - mu * x).norm();
  }

  double value_grad(const Vec& x, Vec& g) const {
    const Vec tx = t * x;
    const cplx mu = x.dot(tx);
    const Vec u = tx - mu * x;
    const double un = u.norm();
    g = c * tx + std::conj(c) * (th * x);
    if (s > 0.0 && un > 1e-300 + 1e-14 * tx.norm()) g += (s / un) * (th * u - std::conj(mu) * u);
    return (c * mu).real() + s * un;
  }
};

template <class Vec>
struct AscentOutcome {
  Vec x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <class Vec>
Vec geodesic(const Vec& x, const Vec& dir_unit, double tau) {
  Vec y = std::cos(tau) * x + std::sin(tau) * dir_unit;
  return y / y.norm();
}

template <class Vec>
Vec random_tangent(Rng& rng, const Vec& x) {
  Vec d(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) d(i) = rng.cnormal();
  d -= x * x.dot(d);
  const double nd = d.norm();
  return nd > 0.0 ? Vec(d / nd) : d;
}

/// Maximizes obj over the unit sphere starting from x0.
template <class Obj, class Vec>
AscentOutcome<Vec> sphere_ascent(const Obj& obj, Vec x0, int max_iter, double rel_tol, Rng& rng) {
  AscentOutcome<Vec> out;
  Vec x = x0 / x0.norm();
  Vec g(x.size());
  double f = obj.value_grad(x, g);
  Vec gt = g - x * x.dot(g);
  Vec d = gt;
  double tau_hint = 0.1;
  int small_steps = 0;
  const Eigen::Index dim = x.size();
  const int restart_every = static_cast<int>(2 * dim);

  int it = 0;
  for (; it < max_iter; ++it) {
    bool moved = false;
    double f_new = f;
    Vec x_new = x;

    const double gnorm = gt.norm();
    if (gnorm > 1e-14 * std::max(1.0, std::abs(f))) {
      double slope = d.norm() > 0.0 ? (d.dot(gt)).real() / d.norm() : 0.0;
      if (!(slope > 0.0)) {
        d = gt;
        slope = gnorm;
      }
      const Vec dh = d / d.norm();
      double tau_t = std::min(tau_hint, kPi / 2);
      double f_t = obj.value(geodesic(x, dh, tau_t));
      for (int ls = 0; ls < 30; ++ls) {
        double best_tau = tau_t;
        double best_f = f_t;
        const double curv = (f_t - f - slope * tau_t) / (tau_t * tau_t);
        double tau_star = curv < 0.0 ? -slope / (2.0 * curv) : 2.0 * tau_t;
        tau_star = std::clamp(tau_star, tau_t / 8.0, std::min(4.0 * tau_t, kPi / 2));
        if (std::abs(tau_star - tau_t) > 1e-3 * tau_t) {
          const double f_s = obj.value(geodesic(x, dh, tau_star));
          if (f_s > best_f) {
            best_f = f_s;
            best_tau = tau_star;
          }
        }
        if (best_f > f) {
          x_new = geodesic(x, dh, best_tau);
          f_new = best_f;
          tau_hint = best_tau;
          moved = true;
          break;
        }
        tau_t /= 4.0;
        if (tau_t < 1e-15) break;
        f_t = obj.value(geodesic(x, dh, tau_t));
      }
    }

    if (!moved) {
      // Nonsmooth points (Tx parallel to x, or <Tx,x> = 0) can stall the
      // gradient; probe random tangent directions before giving up.
      static constexpr double kProbe[] = {0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4};
      for (Eigen::Index k = 0; k < 2 * dim && !moved; ++k) {
        const Vec dir = random_tangent(rng, x);
        for (double tau : kProbe) {
          const Vec cand = geodesic(x, dir, tau);
          const double fc = obj.value(cand);
          if (fc > f * (1.0 + rel_tol) + 1e-300) {
            x_new = cand;
            f_new = fc;
            moved = true;
            tau_hint = tau;
            break;
          }
        }
      }
      if (!moved) {
        out.converged = true;
        break;
      }
    }

    const double gain = f_new - f;
    small_steps = gain <= rel_tol * std::abs(f) ? small_steps + 1 : 0;

    Vec g_new(x.size());
    f_new = obj.value_grad(x_new, g_new);
    const Vec gt_new = g_new - x_new * x_new.dot(g_new);
    const Vec gt_old = gt - x_new * x_new.dot(gt);
    const Vec d_old = d - x_new * x_new.dot(d);
    const double denom = gt.squaredNorm();
    double beta = denom > 0.0 ? std::max(0.0, gt_new.dot(gt_new - gt_old).real() / denom) : 0.0;
    if ((it + 1) % restart_every == 0) beta = 0.0;
    d = gt_new + beta * d_old;
    if (d.dot(gt_new).real() <= 0.0) d = gt_new;

    x = x_new;
    f = f_new;
    gt = gt_new;
    if (small_steps >= 2) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.x = x;
  out.value = f;
  out.iterations = it;
  return out;
}

struct CompressedWitness {
  CVector xi;
  CVector eta;
  double value = 0.0;
};

/// Builds y = conj(q) x + s z* with z* the maximizing unit vector orthogonal to x.
template <class Mat>
CompressedWitness align_witness(const Mat& t, const CVector& xi_in, cplx q, double s) {
  CompressedWitness w;
  w.xi = xi_in / xi_in.norm();
  const CVector tx = t * w.xi;
  const cplx mu = w.xi.dot(tx);
  const CVector u = tx - mu * w.xi;
  const double un = u.norm();
  CVector z;
  if (s > 0.0) {
    if (un > 1e-14 * std::max(1.0, tx.norm())) {
      const cplx target = q * mu;
      const cplx phase = std::abs(target) > 0.0 ? target / std::abs(target) : cplx(1.0, 0.0);
      z = std::conj(phase) * (u / un);
    } else {
      // Any unit vector orthogonal to x: Gram-Schmidt on the weakest coordinate axis.
      Eigen::Index k = 0;
      w.xi.cwiseAbs().minCoeff(&k);
      z = CVector::Unit(w.xi.size(), k);
      z -= w.xi * w.xi.dot(z);
      z /= z.norm();
    }
    w.eta = std::conj(q) * w.xi + s * z;
  } else {
    w.eta = std::conj(q) * w.xi;
  }
  w.value = std::abs(w.eta.dot(tx));
  return w;
}

struct ClassicalDetail {
  double value = 0.0;
  double theta = 0.0;
  CVector vector;
};

/// max over theta of lambda_max(Re(e^{-i theta} M)): uniform sweep plus a
/// golden-section refinement around the two best grid angles.
inline ClassicalDetail classical_radius_detail(const CMatrix& m, int n_theta = 128) {
  require_square(m, "classical_radius input");
  std::vector<double> h(static_cast<std::size_t>(n_theta));
  const double step = 2.0 * kPi / n_theta;
  for (int k = 0; k < n_theta; ++k) h[static_cast<std::size_t>(k)] = numrange_support(m, k * step).support;

  std::vector<int> peaks;
  for (int k = 0; k < n_theta; ++k) {
    const double prev = h[static_cast<std::size_t>((k + n_theta - 1) % n_theta)];
    const double next = h[static_cast<std::size_t>((k + 1) % n_theta)];
    const double cur = h[static_cast<std::size_t>(k)];
    if (cur >= prev && cur >= next) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](int a, int b) { return h[static_cast<std::size_t>(a)] > h[static_cast<std::size_t>(b)]; });
  if (peaks.size() > 2) peaks.resize(2);

  ClassicalDetail best;
  best.value = -std::numeric_limits<double>::infinity();
  constexpr double kGolden = 0.61803398874989484820;
  for (int k : peaks) {
    double a = (k - 1) * step;
    double b = (k + 1) * step;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = numrange_support(m, c).support;
    double fd = numrange_support(m, d).support;
    for (int it = 0; it < 48; ++it) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kGolden * (b - a);
        fc = numrange_support(m, c).support;
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kGolden * (b - a);
        fd = numrange_support(m, d).support;
      }
    }
    const double theta_ref = fc >= fd ? c : d;
    SupportPoint sp = numrange_support(m, theta_ref);
    double theta = theta_ref;
    if (h[static_cast<std::size_t>(k)] > sp.support) {
      theta = k * step;
      sp = numrange_support(m, theta);
    }
    if (sp.support > best.value) {
      best.value = sp.support;
      best.theta = theta;
      best.vector = sp.vector;
    }
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

template <class Mat, class Vec>
QNRResult solve_compressed(const CMatrix& t_in, const QParam& q, const SolverCfg& cfg) {
  const Eigen::Index r = t_in.rows();
  const double qa = q.modulus();
  const double s = q.orth_weight();
  const Mat t = t_in;
  const Mat th = t_in.adjoint();
  const QObjective<Mat, Vec> obj{t, th, qa, s};

  std::vector<Vec> starts;
  const int n_starts = std::max(1, cfg.starts);
  const int n_random = std::max(n_starts > 1 ? 1 : 0, n_starts / 2);
  const int n_structured = n_starts - n_random;

  if (n_structured > 0) {
    if (qa > 0.99) starts.push_back(Vec(classical_radius_detail(t_in, 64).vector));
    std::vector<CMatrix> eigvecs;
    const int grid = std::max(1, cfg.angle_grid);
    for (int k = 0; k < grid; ++k) {
      const cplx rot = std::polar(1.0, 2.0 * kPi * k / grid);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(rot * t_in));
      eigvecs.push_back(es.eigenvectors());
    }
    for (Eigen::Index level = 0; level < r && static_cast<int>(starts.size()) < n_structured; ++level) {
      for (int k = 0; k < grid && static_cast<int>(starts.size()) < n_structured; ++k) {
        starts.push_back(Vec(eigvecs[static_cast<std::size_t>(k)].col(r - 1 - level)));
      }
    }
  }
  const std::size_t n_struct_actual = starts.size();
  for (int k = 0; k < n_random; ++k) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(n_struct_actual + k)));
    starts.push_back(Vec(rng.unit_vector(r)));
  }

  QNRResult res;
  res.starts = static_cast<int>(starts.size());
  double best = -1.0;
  Vec best_x;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    Rng rng(derive_seed(cfg.seed ^ 0x5eedULL, k));
    AscentOutcome<Vec> a = sphere_ascent(obj, starts[k], cfg.max_iter, cfg.rel_tol, rng);
    if (a.value > best) {
      best = a.value;
      best_x = a.x;
      res.converged = a.converged;
      res.iterations = a.iterations;
    }
  }

  const CompressedWitness w = align_witness(t_in, CVector(best_x), q.value(), s);
  res.value = w.value;
  res.witness = QPair{w.xi, w.eta};

  if (cfg.oracle_samples > 0) {
    Rng rng(derive_seed(cfg.seed, 0x0aac1eULL));
    double lo = 0.0;
    for (int k = 0; k < cfg.oracle_samples; ++k) lo = std::max(lo, obj.value(Vec(rng.unit_vector(r))));
    res.oracle_lower = lo;
  }
  return res;
}

inline QNRResult q_radius_compressed(const CMatrix& t, const QParam& q, const SolverCfg& cfg) {
  require_square(t, "q_radius operator");
  if (t.rows() == 1 && q.modulus() < 1.0) {
    throw Error(Errc::DimensionTooSmall, "|q| < 1 needs a space of dimension at least 2");
  }
  if (t.rows() <= 16) return solve_compressed<SmallMat, SmallVec>(t, q, cfg);
  return solve_compressed<CMatrix, CVector>(t, q, cfg);
}

}  // namespace detail

/// Closed-form supremum over admissible y of |<T~x, y>| for a unit x.
inline double q_objective(const CompressedOp& tt, const CVector& x, const QParam& q) {
  require_square(tt.mat, "compressed operator");
  if (x.size() != tt.mat.rows()) throw Error(Errc::DimensionMismatch, "x does not match the operator");
  if (std::abs(x.norm() - 1.0) > 1e-10) throw Error(Errc::InvalidArgument, "x must be a unit vector");
  if (tt.mat.rows() == 1 && q.modulus() < 1.0) {
    throw Error(Errc::DimensionTooSmall, "no unit z orthogonal to x exists in dimension 1");
  }
  const CMatrix th = tt.mat.adjoint();
  const detail::QObjective<CMatrix, CVector> obj{tt.mat, th, q.modulus(), q.orth_weight()};
  return obj.value(x);
}

/// Classical numerical radius w(M).
inline double classical_radius(const CMatrix& m) { return detail::classical_radius_detail(m).value; }

/// w_q(T) with A = I.
inline QNRResult q_radius(const CMatrix& t, const QParam& q, const SolverCfg& cfg = {}) {
  return detail::q_radius_compressed(t, q, cfg);
}

/// w_{q,A}(T): solved on the compression, witness mapped back through U S^-1.
inline QNRResult q_radius(const SemiSpace& sp, const CMatrix& t, const QParam& q, const SolverCfg& cfg = {}) {
  const CompressedOp tt = compress(sp, t);
  QNRResult res = detail::q_radius_compressed(tt.mat, q, cfg);
  res.witness.x = from_compressed(sp, res.witness.x);
  res.witness.y = from_compressed(sp, res.witness.y);
  return res;
}

namespace detail {

inline double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Andrew's monotone chain; returns CCW hull vertex indices without collinear points.
inline std::vector<std::size_t> convex_hull(const std::vector<cplx>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].real() != pts[b].real()) return pts[a].real() < pts[b].real();
    return pts[a].imag() < pts[b].imag();
  });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
            idx.end());
  if (idx.size() < 3) return idx;
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) <= 0.0) --k;
    hull[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) <= 0.0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline PointCloud sample_compressed(const CMatrix& t, const QParam& q, int n_points, std::uint64_t seed) {
  PointCloud cloud;
  if (n_points <= 0) return cloud;
  require_square(t, "q_range_sample operator");
  const Eigen::Index r = t.rows();
  if (r == 1 && q.modulus() < 1.0) throw Error(Errc::DimensionTooSmall, "|q| < 1 needs dimension >= 2");
  const double s = q.orth_weight();
  const cplx qv = q.value();
  const int n_dir = n_points >= 8 ? std::min(64, n_points / 4) : 0;
  const int n_rand = n_points - n_dir;
  cloud.points.reserve(static_cast<std::size_t>(n_points));

  Rng rng(derive_seed(seed, 0x7a9eULL));
  for (int k = 0; k < n_rand; ++k) {
    const CVector x = rng.unit_vector(r);
    CVector y = std::conj(qv) * x;
    if (s > 0.0) {
      CVector z = rng.unit_vector(r);
      z -= x * x.dot(z);
      z /= z.norm();
      y += s * z;
    }
    cloud.points.push_back(y.dot(t * x));
  }

  const CMatrix th = t.adjoint();
  for (int k = 0; k < n_dir; ++k) {
    const double phi = 2.0 * kPi * k / n_dir;
    const cplx c = std::polar(1.0, -phi) * qv;
    const DirectionalObjective<CMatrix, CVector> obj{t, th, c, s};
    Rng local(derive_seed(seed, 0xd1e0000ULL + static_cast<std::uint64_t>(k)));
    const CVector x0 = numrange_support(t, phi).vector;
    const AscentOutcome<CVector> a = sphere_ascent(obj, x0, 60, 1e-10, local);
    const CVector tx = t * a.x;
    const cplx mu = a.x.dot(tx);
    const CVector u = tx - mu * a.x;
    cloud.points.push_back(qv * mu + s * std::polar(u.norm(), phi));
  }
  cloud.hull = convex_hull(cloud.points);
  return cloud;
}

}  // namespace detail

/// Samples W_q(T): every point is an exact member (x, y) in S_q.
inline PointCloud q_range_sample(const CMatrix& t, const QParam& q, int n_points, std::uint64_t seed) {
  return detail::sample_compressed(t, q, n_points, seed);
}

inline PointCloud q_range_sample(const SemiSpace& sp, const CMatrix& t, const QParam& q, int n_points,
                                 std::uint64_t seed) {
  if (n_points <= 0) return {};
  return detail::sample_compressed(compress(sp, t).mat, q, n_points, seed);
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// CSV with header `re,im,on_hull`, one row per point in sample order.
inline void write_point_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  std::vector<char> on_hull(cloud.points.size(), 0);
  for (std::size_t i : cloud.hull) on_hull[i] = 1;
  os << "re,im,on_hull\n";
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    os << format_double(cloud.points[i].real()) << ',' << format_double(cloud.points[i].imag()) << ','
       << (on_hull[i] ? 1 : 0) << '\n';
  }
}

}  // namespace qnrlab
