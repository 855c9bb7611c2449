#pragma once

// Matrix means of accretive matrices and the operator-monotone functional
// calculus, both written as integrals of weighted harmonic means
//
//   A sigma_f B = int_0^1 A !_s B dnu_f(s),  A !_s B = ((1-s)A^-1 + s B^-1)^-1,
//   f(A) = I sigma_f A,
//
// against the representing probability measure nu_f of f.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qnrlab/linalg.hpp"
#include "qnrlab/quadrature.hpp"

namespace qnrlab {

struct Density {
  double s_exponent = 0.0;            // power of s
  double one_minus_s_exponent = 0.0;  // power of (1 - s)
  double coefficient = 1.0;
};

struct MeasureSpec {
  std::vector<std::pair<double, double>> atoms;  // (s, weight)
  std::optional<Density> density;
};

struct QuadCfg {
  int nodes = 64;        // density nodes; panels of the geometric-mean integral
  int outer_nodes = 32;  // outer rule of nested integrals (logarithmic mean)
  double trunc = 40.0;   // log-domain truncation of the geometric-mean integral
  bool tanh_rule = false;          // use the tanh substitution instead of Gauss-Jacobi
  bool check_convergence = true;   // compare against a doubled rule
  double conv_tol = 1e-8;

  QuadCfg doubled() const {
    QuadCfg c = *this;
    c.nodes *= 2;
    c.outer_nodes *= 2;
    return c;
  }
};

inline void validate(const QuadCfg& cfg) {
  if (cfg.nodes < 4 || cfg.outer_nodes < 4) throw Error(Errc::InvalidArgument, "quadrature needs at least 4 nodes");
  if (!(cfg.trunc > 0.0)) throw Error(Errc::InvalidArgument, "truncation must be positive");
}

/// Nodes and weights (atoms folded in) that integrate against the measure.
inline QuadRule measure_rule(const MeasureSpec& m, int nodes, bool tanh_rule) {
  QuadRule rule;
  for (const auto& [s, w] : m.atoms) {
    rule.nodes.push_back(s);
    rule.weights.push_back(w);
  }
  if (m.density) {
    const Density& d = *m.density;
    const QuadRule base = tanh_rule ? tanh_rule01(std::max(1, nodes / 4), d.s_exponent, d.one_minus_s_exponent)
                                    : gauss_jacobi01(nodes, d.s_exponent, d.one_minus_s_exponent);
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      rule.nodes.push_back(base.nodes[k]);
      rule.weights.push_back(d.coefficient * base.weights[k]);
    }
  }
  return rule;
}

/// int ((1-s) + s/x)^-1 dnu(s): the scalar function represented by the measure.
template <class T>
T measure_scalar(const MeasureSpec& m, T x, int nodes = 128, bool tanh_rule = false) {
  const QuadRule rule = measure_rule(m, nodes, tanh_rule);
  T acc{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double s = rule.nodes[k];
    acc += rule.weights[k] / ((1.0 - s) + s / x);
  }
  return acc;
}

/// Representing measure of x^t: density sin(t pi)/pi s^(t-1) (1-s)^(-t).
inline MeasureSpec power_measure(double t) {
  if (t <= 0.0) return MeasureSpec{{{0.0, 1.0}}, std::nullopt};
  if (t >= 1.0) return MeasureSpec{{{1.0, 1.0}}, std::nullopt};
  return MeasureSpec{{}, Density{t - 1.0, -t, std::sin(t * kPi) / kPi}};
}

class MonotoneFn {
 public:
  using Scalar = std::function<double(double)>;
  using ComplexScalar = std::function<cplx(cplx)>;

  /// Validates normalization, total mass and the scalar representation; any
  /// mismatch throws InvalidMeasure.
  MonotoneFn(std::string id, Scalar f, MeasureSpec measure, std::optional<double> param = std::nullopt,
             ComplexScalar fc = nullptr)
      : id_(std::move(id)), f_(std::move(f)), fc_(std::move(fc)), measure_(std::move(measure)), param_(param) {
    check();
  }

  static MonotoneFn power(double t) {
    if (!(t > 0.0 && t < 1.0)) throw Error(Errc::InvalidMeasure, "power:t needs t in (0, 1)");
    return MonotoneFn(
        "power:" + trim_number(t), [t](double x) { return std::pow(x, t); }, power_measure(t), t,
        [t](cplx z) { return std::pow(z, t); });
  }
  static MonotoneFn identity() {
    return MonotoneFn("identity", [](double x) { return x; }, MeasureSpec{{{1.0, 1.0}}, std::nullopt}, std::nullopt,
                      [](cplx z) { return z; });
  }
  static MonotoneFn one() {
    return MonotoneFn("one", [](double) { return 1.0; }, MeasureSpec{{{0.0, 1.0}}, std::nullopt}, std::nullopt,
                      [](cplx) { return cplx(1.0, 0.0); });
  }
  static MonotoneFn arithmetic() {
    return MonotoneFn("arithmetic", [](double x) { return 0.5 * (1.0 + x); },
                      MeasureSpec{{{0.0, 0.5}, {1.0, 0.5}}, std::nullopt}, std::nullopt,
                      [](cplx z) { return 0.5 * (1.0 + z); });
  }
  /// f(x) = ((1-t) + t/x)^-1, measure delta_t.
  static MonotoneFn harmonic(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidMeasure, "harmonic:t needs t in [0, 1]");
    return MonotoneFn(
        "harmonic:" + trim_number(t), [t](double x) { return 1.0 / ((1.0 - t) + t / x); },
        MeasureSpec{{{t, 1.0}}, std::nullopt}, t, [t](cplx z) { return 1.0 / ((1.0 - t) + t / z); });
  }
  /// A user-supplied measure; the scalar function is its own integral.
  static MonotoneFn from_measure(std::string id, MeasureSpec m) {
    auto shared = std::make_shared<MeasureSpec>(m);
    return MonotoneFn(
        std::move(id), [shared](double x) { return measure_scalar(*shared, x); }, std::move(m), std::nullopt,
        [shared](cplx z) { return measure_scalar(*shared, z); });
  }

  const std::string& id() const { return id_; }
  const MeasureSpec& measure() const { return measure_; }
  std::optional<double> param() const { return param_; }
  double operator()(double x) const { return f_(x); }
  /// Principal-branch scalar on complex arguments.
  cplx operator()(cplx z) const { return fc_ ? fc_(z) : measure_scalar(measure_, z); }

 private:
  static std::string trim_number(double t) {
    std::string s = std::to_string(t);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  void check() const {
    for (const auto& [s, w] : measure_.atoms) {
      if (!(s >= 0.0 && s <= 1.0) || !(w > 0.0)) throw Error(Errc::InvalidMeasure, id_ + ": bad atom");
    }
    if (measure_.density) {
      const Density& d = *measure_.density;
      if (!(d.s_exponent > -1.0) || !(d.one_minus_s_exponent > -1.0) || !(d.coefficient > 0.0)) {
        throw Error(Errc::InvalidMeasure, id_ + ": density is not integrable");
      }
    }
    const double mass = measure_rule(measure_, 64, false).total_weight();
    if (std::abs(mass - 1.0) > 1e-10) {
      throw Error(Errc::InvalidMeasure, id_ + ": total mass " + std::to_string(mass) + " != 1");
    }
    if (std::abs(f_(1.0) - 1.0) > 1e-12) throw Error(Errc::InvalidMeasure, id_ + ": f(1) != 1");
    for (double x : {0.5, 1.0, 2.0, 10.0}) {
      const double rep = measure_scalar(measure_, x);
      if (std::abs(rep - f_(x)) > 1e-8) {
        throw Error(Errc::InvalidMeasure, id_ + ": measure reproduces f(" + std::to_string(x) + ") = " +
                                              std::to_string(rep) + ", expected " + std::to_string(f_(x)));
      }
    }
  }

  std::string id_;
  Scalar f_;
  ComplexScalar fc_;
  MeasureSpec measure_;
  std::optional<double> param_;
};

/// Registry: `power:t`, `identity`, `one`, `arithmetic`, `harmonic:t`.
inline MonotoneFn monotone_from_name(std::string_view name) {
  auto param_of = [&](std::string_view prefix) -> std::optional<double> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    const std::string rest(name.substr(prefix.size()));
    try {
      std::size_t used = 0;
      const double v = std::stod(rest, &used);
      if (used != rest.size()) throw Error(Errc::ParseError, "trailing characters in " + std::string(name));
      return v;
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "cannot parse parameter of " + std::string(name));
    }
  };
  if (name == "identity") return MonotoneFn::identity();
  if (name == "one") return MonotoneFn::one();
  if (name == "arithmetic") return MonotoneFn::arithmetic();
  if (auto t = param_of("power:")) return MonotoneFn::power(*t);
  if (auto t = param_of("harmonic:")) return MonotoneFn::harmonic(*t);
  throw Error(Errc::InvalidArgument, "unknown monotone function '" + std::string(name) + "'");
}

/// {"atoms": [[s, w], ...], "density": {"s_exponent", "one_minus_s_exponent", "coefficient"}}
inline MonotoneFn monotone_from_json(const nlohmann::json& j, std::string id = "custom") {
  MeasureSpec m;
  try {
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) m.atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    }
    if (j.contains("density") && !j.at("density").is_null()) {
      const auto& d = j.at("density");
      m.density = Density{d.at("s_exponent").get<double>(), d.at("one_minus_s_exponent").get<double>(),
                          d.at("coefficient").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("measure JSON: ") + e.what());
  }
  return MonotoneFn::from_measure(std::move(id), std::move(m));
}

namespace detail {

inline void require_pair(const CMatrix& a, const CMatrix& b) {
  require_square(a, "mean argument A");
  require_square(b, "mean argument B");
  if (a.rows() != b.rows()) throw Error(Errc::DimensionMismatch, "mean arguments differ in size");
}

inline void require_accretive(const CMatrix& m, const char* what) {
  if (!is_accretive(m)) throw Error(Errc::NotAccretive, std::string(what) + " is not accretive");
}

inline double rel_change(const CMatrix& coarse, const CMatrix& fine) {
  return (fine - coarse).norm() / std::max(fine.norm(), 1e-300);
}

/// sum_k w_k (A !_{s_k} B) given the inverses of A and B.
inline CMatrix integrate_harmonic(const CMatrix& a, const CMatrix& b, const CMatrix& ainv, const CMatrix& binv,
                                  const QuadRule& rule) {
  CMatrix acc = CMatrix::Zero(a.rows(), a.cols());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double s = rule.nodes[k];
    if (s == 0.0) {
      acc += rule.weights[k] * a;
    } else if (s == 1.0) {
      acc += rule.weights[k] * b;
    } else {
      const CMatrix mix = (1.0 - s) * ainv + s * binv;
      acc += rule.weights[k] * mix.partialPivLu().inverse();
    }
  }
  return acc;
}

inline CMatrix sigma_measure(const CMatrix& a, const CMatrix& b, const MeasureSpec& m, const QuadCfg& cfg) {
  require_pair(a, b);
  const CMatrix ainv = accretive_inv(a);
  const CMatrix binv = accretive_inv(b);
  const CMatrix coarse = integrate_harmonic(a, b, ainv, binv, measure_rule(m, cfg.nodes, cfg.tanh_rule));
  if (!m.density || !cfg.check_convergence) return coarse;
  const CMatrix fine = integrate_harmonic(a, b, ainv, binv, measure_rule(m, 2 * cfg.nodes, cfg.tanh_rule));
  const double change = rel_change(coarse, fine);
  if (change > cfg.conv_tol) {
    throw Error(Errc::QuadratureNotConverged, "mean changed by " + std::to_string(change) + " when doubling nodes");
  }
  return fine;
}

}  // namespace detail

/// Weighted harmonic mean ((1-s) A^-1 + s B^-1)^-1 with A !_0 B = A, A !_1 B = B.
inline CMatrix harmonic(const CMatrix& a, const CMatrix& b, double s) {
  detail::require_pair(a, b);
  if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::InvalidArgument, "harmonic mean weight must lie in [0, 1]");
  const CMatrix ainv = accretive_inv(a);
  const CMatrix binv = accretive_inv(b);
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  return ((1.0 - s) * ainv + s * binv).partialPivLu().inverse();
}

inline CMatrix sigma_f(const CMatrix& a, const CMatrix& b, const MonotoneFn& f, const QuadCfg& cfg = {}) {
  validate(cfg);
  return detail::sigma_measure(a, b, f.measure(), cfg);
}

/// f(A) = I sigma_f A.
inline CMatrix monotone_apply(const MonotoneFn& f, const CMatrix& a, const QuadCfg& cfg = {}) {
  require_square(a, "monotone_apply input");
  return sigma_f(identity(a.rows()), a, f, cfg);
}

/// Spectral path f(H) for Hermitian positive definite H.
inline CMatrix apply_hermitian(const MonotoneFn& f, const CMatrix& h) {
  const HermEigen eig = herm_eig(h);
  if (!(eig.values(0) > 0.0)) throw Error(Errc::NotPSD, "apply_hermitian needs a positive definite matrix");
  return herm_apply(eig, [&f](double x) { return f(x); });
}

/// Geometric mean as the inverse of (2/pi) int_R (e^u A + e^-u B)^-1 du,
/// integrated with composite 16-point Gauss-Legendre panels on [-trunc, trunc].
inline CMatrix drury_geomean(const CMatrix& a, const CMatrix& b, const QuadCfg& cfg = {}) {
  validate(cfg);
  detail::require_pair(a, b);
  detail::require_accretive(a, "A");
  detail::require_accretive(b, "B");
  auto integrate = [&](int panels) {
    const QuadRule rule = composite_legendre(-cfg.trunc, cfg.trunc, panels, 16);
    CMatrix acc = CMatrix::Zero(a.rows(), a.cols());
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = rule.nodes[k];
      const CMatrix m = std::exp(u) * a + std::exp(-u) * b;
      acc += rule.weights[k] * m.partialPivLu().inverse();
    }
    return CMatrix((2.0 / kPi * acc).partialPivLu().inverse());
  };
  const CMatrix coarse = integrate(cfg.nodes);
  if (!cfg.check_convergence) return coarse;
  const CMatrix fine = integrate(2 * cfg.nodes);
  const double change = detail::rel_change(coarse, fine);
  if (change > cfg.conv_tol) {
    throw Error(Errc::QuadratureNotConverged, "geometric mean changed by " + std::to_string(change));
  }
  return fine;
}

/// A #_t B = sigma_{x^t}(A, B); #_0 = A and #_1 = B.
inline CMatrix weighted_geomean(const CMatrix& a, const CMatrix& b, double t, const QuadCfg& cfg = {}) {
  validate(cfg);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidArgument, "weighted geometric mean needs t in [0, 1]");
  detail::require_pair(a, b);
  detail::require_accretive(a, "A");
  detail::require_accretive(b, "B");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return sigma_f(a, b, MonotoneFn::power(t), cfg);
}

/// L(A, B) = int_0^1 A #_t B dt with an outer Gauss-Legendre rule in t.
inline CMatrix log_mean(const CMatrix& a, const CMatrix& b, const QuadCfg& cfg = {}) {
  validate(cfg);
  detail::require_pair(a, b);
  const CMatrix ainv = accretive_inv(a);
  const CMatrix binv = accretive_inv(b);
  auto integrate = [&](int outer, int inner) {
    const QuadRule& rule = gauss_legendre01(outer);
    CMatrix acc = CMatrix::Zero(a.rows(), a.cols());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const QuadRule inner_rule = measure_rule(power_measure(rule.nodes[j]), inner, cfg.tanh_rule);
      acc += rule.weights[j] * detail::integrate_harmonic(a, b, ainv, binv, inner_rule);
    }
    return acc;
  };
  const CMatrix coarse = integrate(cfg.outer_nodes, cfg.nodes);
  if (!cfg.check_convergence) return coarse;
  const CMatrix fine = integrate(2 * cfg.outer_nodes, 2 * cfg.nodes);
  const double change = detail::rel_change(coarse, fine);
  if (change > cfg.conv_tol) {
    throw Error(Errc::QuadratureNotConverged, "logarithmic mean changed by " + std::to_string(change));
  }
  return fine;
}

/// H_t(A, B) = (A #_t B + A #_{1-t} B) / 2.
inline CMatrix heinz(const CMatrix& a, const CMatrix& b, double t, const QuadCfg& cfg = {}) {
  if (!(t > 0.0 && t < 1.0)) throw Error(Errc::InvalidArgument, "Heinz mean needs t in (0, 1)");
  const CMatrix g1 = weighted_geomean(a, b, t, cfg);
  if (t == 0.5) return g1;
  return 0.5 * (g1 + weighted_geomean(a, b, 1.0 - t, cfg));
}

enum class MeanKind { harmonic, geometric, arithmetic, logarithmic, heinz };

/// Scalar counterparts of the matrix means; t is the weight where one applies.
inline double scalar_mean(MeanKind kind, double a, double b, double t = 0.5) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(Errc::InvalidArgument, "scalar means need positive arguments");
  switch (kind) {
    case MeanKind::harmonic: return 1.0 / ((1.0 - t) / a + t / b);
    case MeanKind::geometric: return std::pow(a, 1.0 - t) * std::pow(b, t);
    case MeanKind::arithmetic: return (1.0 - t) * a + t * b;
    case MeanKind::logarithmic: {
      const double la = std::log(a);
      const double lb = std::log(b);
      if (std::abs(la - lb) < 1e-12) return std::sqrt(a * b);
      return (a - b) / (la - lb);
    }
    case MeanKind::heinz:
      return 0.5 * (std::pow(a, 1.0 - t) * std::pow(b, t) + std::pow(a, t) * std::pow(b, 1.0 - t));
  }
  return 0.0;
}

/// a sigma_f b = a f(b/a).
inline double scalar_sigma(const MonotoneFn& f, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(Errc::InvalidArgument, "scalar means need positive arguments");
  return a * f(b / a);
}

}  // namespace qnrlab
