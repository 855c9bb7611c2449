#pragma once

// Dense complex matrix kernel. Every operator in the library is a CMatrix;
// the helpers here are the only place that talks to Eigen's decompositions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qnrlab/error.hpp"

namespace qnrlab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Relative tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermTol = 1e-10;

struct HermEigen {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns
};

inline void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(Errc::NonSquare, std::string(what) + " must be a non-empty square matrix (got " +
                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
}

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const cplx z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

/// (M + M*)/2
inline CMatrix re_part(const CMatrix& m) {
  require_square(m, "re_part input");
  return (m + m.adjoint()) * 0.5;
}

/// (M - M*)/(2i)
inline CMatrix im_part(const CMatrix& m) {
  require_square(m, "im_part input");
  return (m - m.adjoint()) * cplx(0.0, -0.5);
}

inline CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

inline double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

inline bool is_hermitian(const CMatrix& m, double rel_tol = kHermTol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.norm();
  return (m - m.adjoint()).norm() <= rel_tol * std::max(scale, std::numeric_limits<double>::min());
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
/// factorization so that rounding-level skew parts are absorbed.
inline HermEigen herm_eig(const CMatrix& m) {
  require_square(m, "herm_eig input");
  if (!is_hermitian(m)) {
    throw Error(Errc::NotHermitian, "herm_eig: ||M - M*|| exceeds " + std::to_string(kHermTol) + "*||M||");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m));
  return HermEigen{es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues only; skips the Hermitian check (callers pass hermitized data).
inline RVector herm_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double lambda_min(const CMatrix& h) { return herm_eigenvalues(h)(0); }
inline double lambda_max(const CMatrix& h) {
  const RVector v = herm_eigenvalues(h);
  return v(v.size() - 1);
}

/// Moore-Penrose pseudoinverse. Singular values below rtol * sigma_max count as
/// zero; the default cutoff is max(rows, cols) * machine epsilon.
inline CMatrix pinv(const CMatrix& m, std::optional<double> rtol = std::nullopt) {
  const double cut_rel =
      rtol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon());
  if (!(cut_rel > 0.0)) throw Error(Errc::InvalidArgument, "pinv: rtol must be positive");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return CMatrix::Zero(m.cols(), m.rows());
  const double cutoff = cut_rel * sv(0);
  RVector inv = RVector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// Applies g to the eigenvalues of a Hermitian matrix.
template <class Fn>
CMatrix herm_apply(const HermEigen& eig, Fn&& g) {
  RVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = g(eig.values(i));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

/// M^p for positive semidefinite M via the spectral path.
inline CMatrix psd_power(const CMatrix& m, double p) {
  const HermEigen eig = herm_eig(m);
  const double top = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  const double tol = kHermTol * std::max(top, std::numeric_limits<double>::min());
  if (eig.values(0) < -tol) {
    throw Error(Errc::NotPSD, "psd_power: smallest eigenvalue " + std::to_string(eig.values(0)) + " is negative");
  }
  if (p < 0.0 && eig.values(0) <= tol) {
    throw Error(Errc::SingularForNegativePower, "psd_power: negative power of a singular matrix");
  }
  return herm_apply(eig, [p](double lam) {
    lam = std::max(lam, 0.0);
    if (lam == 0.0) return p == 0.0 ? 1.0 : 0.0;
    return std::pow(lam, p);
  });
}

/// Absolute accretivity margin used across the library: 1e-10 * ||M||.
inline double accretive_tol(const CMatrix& m) { return 1e-10 * std::max(spectral_norm(m), 1e-300); }

inline bool is_accretive(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return lambda_min(re_part(m)) > accretive_tol(m);
}

/// Inverse of a matrix whose real part is positive definite.
inline CMatrix accretive_inv(const CMatrix& m) {
  require_square(m, "accretive_inv input");
  const double lmin = lambda_min(re_part(m));
  if (!(lmin > accretive_tol(m))) {
    throw Error(Errc::NotAccretive, "accretive_inv: lambda_min(Re M) = " + std::to_string(lmin));
  }
  return m.partialPivLu().inverse();
}

/// lambda_min(Y - X); nonnegative iff X <= Y in the Loewner order.
inline double loewner_gap(const CMatrix& x, const CMatrix& y) { return lambda_min(hermitize(y - x)); }

/// Largest |eigenvalue| of a general square matrix.
inline double spectral_radius(const CMatrix& m) {
  require_square(m, "spectral_radius input");
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace qnrlab
