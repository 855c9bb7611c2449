#pragma once

// Sector angles, sector membership, numerical-range support functions and the
// seeded input generators used by the harness and the `mat gen` command.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qnrlab/linalg.hpp"
#include "qnrlab/random.hpp"

namespace qnrlab {

struct SectorCert {
  double alpha_min = 0.0;   // radians
  double re_min_eig = 0.0;  // lambda_min(Re A)
  double rho = 0.0;         // max |eig| of Re(A)^{-1/2} Im(A) Re(A)^{-1/2}
};

inline constexpr double kMaxRealPartCond = 1e12;

/// Smallest alpha with W(A) inside the sector S_alpha.
inline SectorCert sector_angle(const CMatrix& a) {
  require_square(a, "sector_angle input");
  const HermEigen re = herm_eig(re_part(a));
  const double lmin = re.values(0);
  const double lmax = re.values(re.values.size() - 1);
  if (!(lmin > accretive_tol(a))) {
    throw Error(Errc::NotAccretive, "sector_angle: lambda_min(Re A) = " + std::to_string(lmin));
  }
  if (lmax / lmin > kMaxRealPartCond) {
    throw Error(Errc::NotAccretive, "sector_angle: Re A too ill-conditioned for the pencil");
  }
  const CMatrix re_isqrt = herm_apply(re, [](double l) { return 1.0 / std::sqrt(l); });
  const RVector ev = herm_eigenvalues(re_isqrt * im_part(a) * re_isqrt);
  const double rho = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return SectorCert{std::atan(rho), lmin, rho};
}

/// Loewner test tan(alpha) Re A +- Im A >= 0 with Re A > 0.
inline bool is_in_sector(const CMatrix& a, double alpha, double tol = 1e-10) {
  require_square(a, "is_in_sector input");
  if (!(alpha >= 0.0) || alpha >= kPi / 2) return false;
  const CMatrix re = re_part(a);
  if (!(lambda_min(re) > 0.0)) return false;
  const CMatrix im = im_part(a);
  const double slack = -tol * spectral_norm(a);
  const double ta = std::tan(alpha);
  return lambda_min(ta * re + im) >= slack && lambda_min(ta * re - im) >= slack;
}

struct SupportPoint {
  double support = 0.0;
  cplx boundary_point;
  CVector vector;
};

/// Support function of W(T) in direction e^{i theta}: lambda_max(Re(e^{-i theta} T)).
inline SupportPoint numrange_support(const CMatrix& t, double theta) {
  require_square(t, "numrange_support input");
  const cplx rot = std::polar(1.0, -theta);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(rot * t));
  const Eigen::Index top = t.rows() - 1;
  CVector x = es.eigenvectors().col(top);
  const cplx point = x.dot(t * x);
  return SupportPoint{es.eigenvalues()(top), point, std::move(x)};
}

// ---------------------------------------------------------------------------
// Generators

enum class GenKind { psd, sectorial, accretive, hermitian, ginibre, dominated_quadruple };

inline std::optional<GenKind> parse_gen_kind(std::string_view s) {
  if (s == "psd") return GenKind::psd;
  if (s == "sectorial") return GenKind::sectorial;
  if (s == "accretive") return GenKind::accretive;
  if (s == "hermitian") return GenKind::hermitian;
  if (s == "ginibre") return GenKind::ginibre;
  if (s == "dominated_quadruple") return GenKind::dominated_quadruple;
  return std::nullopt;
}

inline std::string_view to_string(GenKind k) {
  switch (k) {
    case GenKind::psd: return "psd";
    case GenKind::sectorial: return "sectorial";
    case GenKind::accretive: return "accretive";
    case GenKind::hermitian: return "hermitian";
    case GenKind::ginibre: return "ginibre";
    case GenKind::dominated_quadruple: return "dominated_quadruple";
  }
  return "?";
}

struct GenSpec {
  GenKind kind = GenKind::psd;
  int n = 2;
  double alpha = 0.0;
  std::optional<int> rank;
  std::uint64_t seed = 0;
};

using Quadruple = std::array<CMatrix, 4>;
using GenResult = std::variant<CMatrix, Quadruple>;

inline CMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  const CMatrix g = rng.ginibre(n, n);
  return hermitize(g);
}

/// Well-conditioned positive definite matrix: G G*/n + 0.2 I.
inline CMatrix random_pd(Rng& rng, Eigen::Index n) {
  const CMatrix g = rng.ginibre(n, n);
  return hermitize(g * g.adjoint() / static_cast<double>(n)) + 0.2 * identity(n);
}

/// PSD matrix of exact rank r (r == n gives a positive definite matrix).
inline CMatrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index r) {
  if (r >= n) return random_pd(rng, n);
  const CMatrix g = rng.ginibre(n, r);
  return hermitize(g * g.adjoint() / static_cast<double>(r));
}

/// Hermitian contraction scaled so that ||C|| = u with u uniform on [0.9, 1].
inline CMatrix random_contraction(Rng& rng, Eigen::Index n) {
  CMatrix c = random_hermitian(rng, n);
  const double nc = spectral_norm(c);
  const double u = rng.uniform(0.9, 1.0);
  if (nc == 0.0) return CMatrix::Zero(n, n);
  return c * (u / nc);
}

/// H + i tan(alpha) H^{1/2} C H^{1/2}; lies in S_alpha whenever ||C|| <= 1.
inline CMatrix sectorial_from(const CMatrix& h, const CMatrix& c, double alpha) {
  const CMatrix hs = psd_power(h, 0.5);
  const CMatrix im = hermitize(hs * c * hs) * std::tan(alpha);
  return hermitize(h) + kI * im;
}

inline void validate(const GenSpec& spec) {
  if (spec.n < 2) throw Error(Errc::InvalidSpec, "n must be at least 2");
  if (spec.n > 64) throw Error(Errc::InvalidSpec, "n must not exceed 64");
  if (!(spec.alpha >= 0.0) || !(spec.alpha < kPi / 2)) throw Error(Errc::InvalidSpec, "alpha must lie in [0, pi/2)");
  if (spec.rank && (*spec.rank < 1 || *spec.rank > spec.n)) {
    throw Error(Errc::InvalidSpec, "rank must lie in [1, n]");
  }
}

inline CMatrix gen_sectorial(Rng& rng, Eigen::Index n, double alpha) {
  const CMatrix h = random_pd(rng, n);
  return sectorial_from(h, random_contraction(rng, n), alpha);
}

/// (A, B, C, D) in S_alpha with Re A <= Re C and Re B <= Re D.
inline Quadruple gen_dominated_quadruple(Rng& rng, Eigen::Index n, double alpha) {
  const CMatrix ha = random_pd(rng, n);
  const CMatrix hb = random_pd(rng, n);
  const Eigen::Index r1 = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(n));
  const Eigen::Index r2 = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(n));
  const CMatrix p1 = 0.5 * random_psd(rng, n, r1);
  const CMatrix p2 = 0.5 * random_psd(rng, n, r2);
  Quadruple out;
  out[0] = sectorial_from(ha, random_contraction(rng, n), alpha);
  out[1] = sectorial_from(hb, random_contraction(rng, n), alpha);
  out[2] = sectorial_from(hermitize(ha + p1), random_contraction(rng, n), alpha);
  out[3] = sectorial_from(hermitize(hb + p2), random_contraction(rng, n), alpha);
  return out;
}

inline GenResult gen(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const Eigen::Index n = spec.n;
  switch (spec.kind) {
    case GenKind::psd:
      return random_psd(rng, n, spec.rank.value_or(spec.n));
    case GenKind::sectorial:
      return gen_sectorial(rng, n, spec.alpha);
    case GenKind::accretive:
      return CMatrix(random_pd(rng, n) + kI * random_hermitian(rng, n));
    case GenKind::hermitian:
      return random_hermitian(rng, n);
    case GenKind::ginibre:
      return CMatrix(rng.ginibre(n, n) / std::sqrt(static_cast<double>(n)));
    case GenKind::dominated_quadruple:
      return gen_dominated_quadruple(rng, n, spec.alpha);
  }
  throw Error(Errc::InvalidSpec, "unknown generator kind");
}

/// Nearest-in-spirit member of S_alpha: Re part floored to `floor`, pencil
/// eigenvalues clipped to [-tan(alpha), tan(alpha)]. Used by the stress search.
inline CMatrix project_to_sector(const CMatrix& x, double alpha, double floor = 0.05) {
  const HermEigen re = herm_eig(re_part(x));
  const CMatrix h = herm_apply(re, [floor](double l) { return std::max(l, floor); });
  const HermEigen he = herm_eig(h);
  const CMatrix hs = herm_apply(he, [](double l) { return std::sqrt(l); });
  const CMatrix his = herm_apply(he, [](double l) { return 1.0 / std::sqrt(l); });
  const double ta = std::tan(alpha);
  const HermEigen pencil = herm_eig(hermitize(his * im_part(x) * his));
  const CMatrix clipped = herm_apply(pencil, [ta](double l) { return std::clamp(l, -ta, ta); });
  return h + kI * hermitize(hs * clipped * hs);
}

}  // namespace qnrlab
