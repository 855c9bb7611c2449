#pragma once

// A-weighted geometry for a positive semidefinite metric A.
//
// Everything is reduced to the range of A: with A = U S^2 U* (U the eigenbasis
// of R(A), S = diag(sqrt(lambda_i))), the map rho(x) = S U* x is an isometry from
// (H, <.,.>_A) modulo N(A) onto C^r, and an A-bounded T acts there as
// T~ = S U* T U S^-1.

#include <string>
#include <utility>

#include "qnrlab/linalg.hpp"

namespace qnrlab {

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kSemiTol = 1e-9;

struct SemiSpace {
  CMatrix metric;  // A
  int rank = 0;
  CMatrix basis;   // n x r, orthonormal, spans R(A); columns sorted by descending eigenvalue
  RVector scale;   // sqrt of the nonzero eigenvalues, descending
  CMatrix proj;    // basis * basis^*
  CMatrix null_basis;  // n x (n - r), spans N(A)
  double rank_tol = kDefaultRankTol;

  Eigen::Index dim() const { return metric.rows(); }

  CMatrix sqrt_metric() const { return basis * scale.asDiagonal() * basis.adjoint(); }
  /// Moore-Penrose inverse of A restricted to the detected range.
  CMatrix metric_pinv() const { return basis * scale.cwiseAbs2().cwiseInverse().asDiagonal() * basis.adjoint(); }
};

struct CompressedOp {
  CMatrix mat;  // r x r
};

struct BoundedCheck {
  bool bounded = false;
  double residual = 0.0;
};

inline SemiSpace build_space(const CMatrix& a, double rank_tol = kDefaultRankTol) {
  require_square(a, "metric");
  if (!(rank_tol > 0.0)) throw Error(Errc::InvalidArgument, "rank_tol must be positive");
  const HermEigen eig = herm_eig(a);
  const Eigen::Index n = a.rows();
  const double top = eig.values(n - 1);
  if (top <= 0.0) throw Error(Errc::RankTooSmall, "metric has no positive eigenvalue");
  if (eig.values(0) < -kHermTol * top) {
    throw Error(Errc::NotPSD, "metric has eigenvalue " + std::to_string(eig.values(0)));
  }
  int r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values(i) > rank_tol * top) ++r;
  if (r < 2) throw Error(Errc::RankTooSmall, "dim R(A) = " + std::to_string(r) + " < 2");

  SemiSpace sp;
  sp.metric = hermitize(a);
  sp.rank = r;
  sp.rank_tol = rank_tol;
  sp.basis.resize(n, r);
  sp.scale.resize(r);
  for (int k = 0; k < r; ++k) {
    const Eigen::Index src = n - 1 - k;
    sp.basis.col(k) = eig.vectors.col(src);
    sp.scale(k) = std::sqrt(eig.values(src));
  }
  sp.null_basis = eig.vectors.leftCols(n - r);
  sp.proj = sp.basis * sp.basis.adjoint();
  return sp;
}

inline void require_vec_dim(const SemiSpace& sp, const CVector& v) {
  if (v.size() != sp.dim()) {
    throw Error(Errc::DimensionMismatch,
                "vector of length " + std::to_string(v.size()) + " in a space of dimension " + std::to_string(sp.dim()));
  }
}

inline void require_op_dim(const SemiSpace& sp, const CMatrix& t) {
  if (t.rows() != sp.dim() || t.cols() != sp.dim()) {
    throw Error(Errc::DimensionMismatch, "operator does not match the metric dimension");
  }
}

/// <x, y>_A = <Ax, y> = y* A x (linear in x).
inline cplx a_inner(const SemiSpace& sp, const CVector& x, const CVector& y) {
  require_vec_dim(sp, x);
  require_vec_dim(sp, y);
  return y.dot(sp.metric * x);
}

inline double a_norm(const SemiSpace& sp, const CVector& x) {
  return std::sqrt(std::max(0.0, a_inner(sp, x, x).real()));
}

/// T is A-bounded iff T(N(A)) is contained in N(A), tested as
/// ||A^{1/2} T (I - P)|| <= tol ||A^{1/2}|| ||T||.
inline BoundedCheck is_a_bounded(const SemiSpace& sp, const CMatrix& t, double tol = kSemiTol) {
  require_op_dim(sp, t);
  const double tn = spectral_norm(t);
  if (tn == 0.0 || sp.rank == sp.dim()) return {true, 0.0};
  const CMatrix leak = sp.sqrt_metric() * t * sp.null_basis;
  const double residual = spectral_norm(leak) / (sp.scale(0) * tn);
  return {residual <= tol, residual};
}

/// The A-adjoint T# = A^+ T* A, the reduced solution of AX = T*A with R(X) in R(A).
inline CMatrix sharp(const SemiSpace& sp, const CMatrix& t, double tol = kSemiTol) {
  require_op_dim(sp, t);
  const double tn = spectral_norm(t);
  if (tn == 0.0) return CMatrix::Zero(t.rows(), t.cols());
  const double an = sp.scale(0) * sp.scale(0);
  const CMatrix tsa = t.adjoint() * sp.metric;
  const CMatrix off_range = tsa - sp.proj * tsa;
  const double pre = spectral_norm(off_range) / (an * tn);
  if (pre > tol) {
    throw Error(Errc::NoAAdjoint, "R(T*A) leaves R(A): residual " + std::to_string(pre));
  }
  CMatrix x = sp.metric_pinv() * tsa;
  const double eq_res = spectral_norm(sp.metric * x - tsa) / (an * tn);
  const double xn = spectral_norm(x);
  const double range_res = xn == 0.0 ? 0.0 : spectral_norm(x - sp.proj * x) / xn;
  if (eq_res > tol || range_res > tol) {
    throw Error(Errc::NoAAdjoint, "reduced solution check failed (" + std::to_string(eq_res) + ", " +
                                      std::to_string(range_res) + ")");
  }
  return x;
}

/// (Re_A(T), Im_A(T)) = ((T + T#)/2, (T - T#)/(2i)).
inline std::pair<CMatrix, CMatrix> cartesian(const SemiSpace& sp, const CMatrix& t) {
  const CMatrix ts = sharp(sp, t);
  return {(t + ts) * 0.5, (t - ts) * cplx(0.0, -0.5)};
}

inline CompressedOp compress(const SemiSpace& sp, const CMatrix& t) {
  const BoundedCheck chk = is_a_bounded(sp, t);
  if (!chk.bounded) {
    throw Error(Errc::NotABounded, "T does not map N(A) into N(A): residual " + std::to_string(chk.residual));
  }
  CMatrix m = sp.scale.asDiagonal() * (sp.basis.adjoint() * t * sp.basis);
  m = m * sp.scale.cwiseInverse().asDiagonal();
  return CompressedOp{std::move(m)};
}

/// Coordinates rho(x) = S U* x of x in the compressed space.
inline CVector to_compressed(const SemiSpace& sp, const CVector& x) {
  return sp.scale.asDiagonal() * (sp.basis.adjoint() * x);
}

/// Canonical preimage U S^-1 xi of compressed coordinates.
inline CVector from_compressed(const SemiSpace& sp, const CVector& xi) {
  return sp.basis * (sp.scale.cwiseInverse().asDiagonal() * xi);
}

inline double a_op_norm(const SemiSpace& sp, const CMatrix& t) { return spectral_norm(compress(sp, t).mat); }

inline double a_spectral_radius(const SemiSpace& sp, const CMatrix& t) {
  return spectral_radius(compress(sp, t).mat);
}

}  // namespace qnrlab
