#pragma once

// Registry of executable inequalities. Each predicate pairs an input
// generator with an evaluator returning the compared sides.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qnrlab/harness/core.hpp"

namespace qnrlab::harness {

namespace gen_detail {

inline double sec(double a) { return 1.0 / std::cos(a); }

/// Zeroes the block of T that maps N(A) out of N(A).
inline CMatrix make_a_bounded(const SemiSpace& sp, const CMatrix& t) {
  const CMatrix pn = identity(sp.dim()) - sp.proj;
  return t - sp.proj * t * pn;
}

inline SemiSpace random_metric(Rng& rng, int n, int kind) {
  if (kind == 0) return build_space(identity(n));
  if (kind == 2 && n > 2) return build_space(random_psd(rng, n, n - 1));
  return build_space(random_pd(rng, n));  // rank n-1 is below 2 when n = 2
}

inline CMatrix ginibre_op(Rng& rng, int n) { return rng.ginibre(n, n) / std::sqrt(static_cast<double>(n)); }

/// A-bounded operators on a random metric of the trial's kind.
inline Inputs semi_operators(Rng& rng, const TrialSpec& ts, int count, bool selfadjoint) {
  Inputs in;
  in.space = random_metric(rng, ts.n, ts.metric_kind);
  for (int k = 0; k < count; ++k) {
    CMatrix t = make_a_bounded(*in.space, ginibre_op(rng, ts.n));
    if (selfadjoint) t = cartesian(*in.space, t).first;
    in.mats.push_back(std::move(t));
  }
  return in;
}

inline Inputs sectorial_inputs(Rng& rng, const TrialSpec& ts, int count) {
  Inputs in;
  in.alpha = ts.alpha;
  in.gamma = ts.gamma;
  for (int k = 0; k < count; ++k) {
    in.mats.push_back(gen_sectorial(rng, ts.n, ts.alpha));
    in.alpha_true = std::max(in.alpha_true, sector_angle(in.mats.back()).alpha_min);
  }
  return in;
}

inline Inputs pd_inputs(Rng& rng, const TrialSpec& ts, int count) {
  Inputs in;
  in.gamma = ts.gamma;
  for (int k = 0; k < count; ++k) in.mats.push_back(random_pd(rng, ts.n));
  return in;
}

inline std::string power_name(double t) { return "power:" + format_double(t); }

}  // namespace gen_detail

inline std::vector<PredicateDef> section2_predicates() {
  using namespace gen_detail;
  std::vector<PredicateDef> defs;

  defs.push_back(PredicateDef{
      "P01", "|q| w_A(T) <= w_{q,A}(T) <= w_A(T) for A-self-adjoint T", "a_selfadjoint", Kind::sandwich, true,
      false, false, false, [](Rng& rng, const TrialSpec& ts) { return semi_operators(rng, ts, 1, true); },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const SemiSpace& sp = *in.space;
        const CMatrix& t = in.mats[0];
        const double wa = ctx.w(compress(sp, t).mat);
        const double wq = ctx.wq(sp, t, p.q);
        return Eval{{part("lower", p.q * wa, wq, true), part("upper", wq, wa, true)}};
      }});

  defs.push_back(PredicateDef{
      "P02", "|q|/2 ||T||_A <= w_{q,A}(T) <= ||T||_A", "general", Kind::sandwich, true, false, false, false,
      [](Rng& rng, const TrialSpec& ts) { return semi_operators(rng, ts, 1, false); },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const SemiSpace& sp = *in.space;
        const double nt = a_op_norm(sp, in.mats[0]);
        const double wq = ctx.wq(sp, in.mats[0], p.q);
        return Eval{{part("lower", 0.5 * p.q * nt, wq, true), part("upper", wq, nt)}};
      }});

  defs.push_back(PredicateDef{
      "P03",
      "|q|^2/4 ||T#T + TT#||_A <= w_{q,A}^2(T) <= (2 - |q|^2 + 4|q|sqrt(1-|q|^2))/2 ||TT# + T#T||_A", "general",
      Kind::sandwich, true, false, false, false,
      [](Rng& rng, const TrialSpec& ts) { return semi_operators(rng, ts, 1, false); },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const SemiSpace& sp = *in.space;
        const CMatrix& t = in.mats[0];
        const CMatrix ts = sharp(sp, t);
        const double nk = a_op_norm(sp, ts * t + t * ts);
        const double wq = ctx.wq(sp, t, p.q);
        const double q = p.q;
        const double c = (2.0 - q * q + 4.0 * q * std::sqrt(std::max(0.0, 1.0 - q * q))) / 2.0;
        return Eval{{part("lower", q * q / 4.0 * nk, wq * wq, true), part("upper", wq * wq, c * nk)}};
      }});

  defs.push_back(PredicateDef{
      "P04",
      "if w_{q,A}^2(T) = |q|^2/4 ||T#T + TT#||_A then |q|^2 ||Re_A(e^{i theta}T)||_A^2 = |q|^2 "
      "||Im_A(e^{i theta}T)||_A^2 = |q|^2/4 ||T#T + TT#||_A for all theta",
      "general", Kind::conditional, true, false, false, false,
      [](Rng& rng, const TrialSpec& ts) {
        Inputs in = semi_operators(rng, ts, 1, false);
        if (ts.index % 2 == 1) {
          // Near-equality case: a unitarily rotated multiple of E12 on the range.
          const SemiSpace& sp = *in.space;
          const Eigen::Index r = sp.rank;
          CMatrix j = CMatrix::Zero(r, r);
          j(0, 1) = rng.uniform(0.5, 2.0);
          const CMatrix u = rng.unitary(r);
          j = u * j * u.adjoint();
          in.mats[0] = sp.basis * sp.scale.cwiseInverse().asDiagonal() * j * sp.scale.asDiagonal() *
                       sp.basis.adjoint();
        }
        return in;
      },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const SemiSpace& sp = *in.space;
        const CMatrix& t = in.mats[0];
        const CMatrix ts = sharp(sp, t);
        const double nk = a_op_norm(sp, ts * t + t * ts);
        const double wq = ctx.wq(sp, t, p.q);
        const double target = p.q * p.q / 4.0 * nk;
        Eval ev;
        if (!(std::abs(wq * wq - target) < 1e-6)) {
          ev.vacuous = true;
          return ev;
        }
        double worst = 0.0;
        for (int k = 0; k < 32; ++k) {
          const cplx rot = std::polar(1.0, 2.0 * kPi * k / 32.0);
          const auto [re, im] = cartesian(sp, CMatrix(rot * t));
          const double nr = a_op_norm(sp, re);
          const double ni = a_op_norm(sp, im);
          worst = std::max(worst, std::abs(p.q * p.q * nr * nr - target));
          worst = std::max(worst, std::abs(p.q * p.q * ni * ni - target));
        }
        Part eq = part("theta_equalities", worst, 1e-4 * std::max(1.0, target));
        eq.scale = 0.0;
        ev.parts.push_back(eq);
        return ev;
      }});

  auto p05_eval = [](const Inputs& in, const Params& p, EvalCtx& ctx) {
    const CMatrix& t = in.mats[0];
    double wq, wa, nt;
    if (in.space) {
      const CMatrix tt = compress(*in.space, t).mat;
      wq = ctx.wq(*in.space, t, p.q);
      wa = ctx.w(tt);
      nt = spectral_norm(tt);
    } else {
      wq = ctx.wq(t, p.q);
      wa = ctx.w(t);
      nt = spectral_norm(t);
    }
    const double q = p.q;
    const double s = std::sqrt(std::max(0.0, 1.0 - q * q));
    const double bound = std::sqrt(q * q * wa * wa + (1.0 - q * q) * nt * nt + 2.0 * q * s * wa * nt);
    return Eval{{part("upper", wq, bound, true)}};
  };

  defs.push_back(PredicateDef{
      "P05", "w_{q,A}(T) <= (|q|^2 w_A^2(T) + (1-|q|^2)||T||_A^2 + 2|q|sqrt(1-|q|^2) w_A(T)||T||_A)^{1/2}",
      "general", Kind::upper, true, false, false, false,
      [](Rng& rng, const TrialSpec& ts) { return semi_operators(rng, ts, 1, false); }, p05_eval});

  defs.push_back(PredicateDef{
      "P06", "w_q(T) <= (|q|^2 w^2(T) + (1-|q|^2)||T||^2 + 2|q|sqrt(1-|q|^2) w(T)||T||)^{1/2}", "general",
      Kind::upper, true, false, false, false,
      [](Rng& rng, const TrialSpec& ts) {
        Inputs in;
        in.mats.push_back(ginibre_op(rng, ts.n));
        return in;
      },
      p05_eval});

  defs.push_back(PredicateDef{
      "P07", "|q|^2 w_{q,A}(TS) <= 4 w_{q,A}(T) w_{q,A}(S)", "general", Kind::upper, true, false, false, false,
      [](Rng& rng, const TrialSpec& ts) { return semi_operators(rng, ts, 2, false); },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const SemiSpace& sp = *in.space;
        const CMatrix& t = in.mats[0];
        const CMatrix& s = in.mats[1];
        const double wts = ctx.wq(sp, CMatrix(t * s), p.q);
        const double bound = 4.0 * ctx.wq(sp, t, p.q) * ctx.wq(sp, s, p.q);
        return Eval{{part("upper", p.q * p.q * wts, bound, true)}};
      }});

  defs.push_back(PredicateDef{
      "P08", "w_q(TS) <= 4 w_q(T) w_q(S) fails for T = [[0,1],[1,0]], S = 2I, q = 0.1", "fixed_demo",
      Kind::expected_fail, false, false, false, false,
      [](Rng&, const TrialSpec&) {
        Inputs in;
        CMatrix t(2, 2);
        t << 0.0, 1.0, 1.0, 0.0;
        in.mats = {t, CMatrix(2.0 * identity(2))};
        return in;
      },
      [](const Inputs& in, const Params&, EvalCtx& ctx) {
        constexpr double q = 0.1;
        const double wt = ctx.wq(in.mats[0], q);
        const double ws = ctx.wq(in.mats[1], q);
        const double wts = ctx.wq(CMatrix(in.mats[0] * in.mats[1]), q);
        // The unscaled product bound must be observed to break.
        return Eval{{part("violation_observed", 4.0 * wt * ws, wts)}};
      }});

  return defs;
}

inline std::vector<PredicateDef> section3_predicates() {
  using namespace gen_detail;
  std::vector<PredicateDef> defs;
  auto sect = [](int count) {
    return [count](Rng& rng, const TrialSpec& ts) { return sectorial_inputs(rng, ts, count); };
  };

  defs.push_back(PredicateDef{
      "P09", "|q| ||R(T)|| <= w_q(R(T)) <= ||R(T)||, and the same for I(T)", "general", Kind::sandwich, true, false,
      false, false,
      [](Rng& rng, const TrialSpec& ts) {
        Inputs in;
        in.mats.push_back(ginibre_op(rng, ts.n));
        return in;
      },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix re = re_part(in.mats[0]);
        const CMatrix im = im_part(in.mats[0]);
        const double nr = spectral_norm(re);
        const double ni = spectral_norm(im);
        const double wr = ctx.wq(re, p.q);
        const double wi = ctx.wq(im, p.q);
        return Eval{{part("re_lower", p.q * nr, wr, true), part("re_upper", wr, nr), part("im_lower", p.q * ni, wi, true),
                     part("im_upper", wi, ni)}};
      }});

  defs.push_back(PredicateDef{
      "P10", "cos(alpha) ||A|| <= ||R(A)|| <= ||A||", "sectorial", Kind::sandwich, false, false, false, false,
      sect(1), [](const Inputs& in, const Params&, EvalCtx&) {
        const double na = spectral_norm(in.mats[0]);
        const double nr = spectral_norm(re_part(in.mats[0]));
        return Eval{{part("lower", std::cos(in.alpha) * na, nr), part("upper", nr, na)}};
      }});

  defs.push_back(PredicateDef{
      "P11", "f(||R(A)||) <= ||R(f(A))|| <= sec^2(alpha) f(||R(A)||)", "sectorial", Kind::sandwich, false, false,
      true, false, sect(1), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const double fr = f(spectral_norm(re_part(in.mats[0])));
        const double mid = spectral_norm(re_part(ctx.apply(p.f, in.mats[0])));
        const double s = sec(in.alpha);
        return Eval{{part("lower", fr, mid), part("upper", mid, s * s * fr)}};
      }});

  defs.push_back(PredicateDef{
      "P12", "f(R(A)) <= R(f(A)) <= sec^2(alpha) f(R(A)) in the Loewner order", "sectorial", Kind::sandwich, false,
      false, true, false, sect(1), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix fr = apply_hermitian(ctx.fn(p.f), re_part(in.mats[0]));
        const CMatrix rf = re_part(ctx.apply(p.f, in.mats[0]));
        const double s = sec(in.alpha);
        const double scale = spectral_norm(fr) * s * s;
        Part lo = part("lower", 0.0, lambda_min(rf - fr));
        Part hi = part("upper", 0.0, lambda_min(s * s * fr - rf));
        lo.scale = hi.scale = scale;
        return Eval{{lo, hi}};
      }});

  defs.push_back(PredicateDef{
      "P13", "||f(A+B)|| <= ||f(A) + f(B)|| for positive A, B", "psd", Kind::upper, false, false, true, false,
      [](Rng& rng, const TrialSpec& ts) { return pd_inputs(rng, ts, 2); },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix sum = in.mats[0] + in.mats[1];
        const double l = spectral_norm(ctx.apply(p.f, sum));
        const double r = spectral_norm(ctx.apply(p.f, in.mats[0]) + ctx.apply(p.f, in.mats[1]));
        return Eval{{part("upper", l, r)}};
      }});

  defs.push_back(PredicateDef{
      "P14", "cos(alpha) w_q(A) <= ||R(A)|| and |q| cos(alpha) w_q(A) <= w_q(R(A))", "sectorial", Kind::upper, true,
      false, false, false, sect(1), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix re = re_part(in.mats[0]);
        const double c = std::cos(in.alpha);
        const double wa = ctx.wq(in.mats[0], p.q);
        return Eval{{part("a", c * wa, spectral_norm(re)), part("b", p.q * c * wa, ctx.wq(re, p.q), true)}};
      }});

  defs.push_back(PredicateDef{
      "P15", "|q|^2 cos(alpha) f(w_q(A)) <= |q| w_q(f(A)) <= sec^3(alpha) f(w_q(A))", "sectorial", Kind::sandwich,
      true, false, true, false, sect(1), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const double fw = f(ctx.wq(in.mats[0], p.q));
        const double mid = p.q * ctx.wq(ctx.apply(p.f, in.mats[0]), p.q);
        const double s3 = std::pow(sec(in.alpha), 3);
        return Eval{{part("lower", p.q * p.q * std::cos(in.alpha) * fw, mid, true), part("upper", mid, s3 * fw, true)}};
      }});

  defs.push_back(PredicateDef{
      "P16", "|q| w_q((1-g) f(A) + g f(B)) <= sec^3(alpha) f((1-g) w_q(A) + g w_q(B))", "sectorial", Kind::upper,
      true, false, true, false, sect(2), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const double g = in.gamma;
        const CMatrix mix = (1.0 - g) * ctx.apply(p.f, in.mats[0]) + g * ctx.apply(p.f, in.mats[1]);
        const double l = p.q * ctx.wq(mix, p.q);
        const double arg = (1.0 - g) * ctx.wq(in.mats[0], p.q) + g * ctx.wq(in.mats[1], p.q);
        return Eval{{part("upper", l, std::pow(sec(in.alpha), 3) * ctx.fn(p.f)(arg), true)}};
      }});

  defs.push_back(PredicateDef{
      "P17", "|q| w_q(f(A+B)) <= sec^3(alpha) w_q(f(A) + f(B))", "sectorial", Kind::upper, true, false, true, false,
      sect(2), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix sum = in.mats[0] + in.mats[1];
        const double l = p.q * ctx.wq(ctx.apply(p.f, sum), p.q);
        const CMatrix fs = ctx.apply(p.f, in.mats[0]) + ctx.apply(p.f, in.mats[1]);
        return Eval{{part("upper", l, std::pow(sec(in.alpha), 3) * ctx.wq(fs, p.q), true)}};
      }});

  defs.push_back(PredicateDef{
      "P18",
      "(a) |q|^2 cos(alpha) w_q^t(A) <= |q| w_q(A^t) <= sec^3(alpha) w_q^t(A); (b) |q| w_q((1-g)A^t + g B^t) <= "
      "sec^3(alpha) ((1-g) w_q(A) + g w_q(B))^t; (c) |q| w_q((A+B)^t) <= sec^3(alpha) w_q(A^t + B^t)",
      "sectorial", Kind::sandwich, true, true, false, false, sect(2),
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const std::string f = power_name(p.t);
        const CMatrix& a = in.mats[0];
        const CMatrix& b = in.mats[1];
        const double q = p.q;
        const double s3 = std::pow(sec(in.alpha), 3);
        const double wa = ctx.wq(a, q);
        const double wb = ctx.wq(b, q);
        const CMatrix& at = ctx.apply(f, a);
        const CMatrix& bt = ctx.apply(f, b);
        const double mid = q * ctx.wq(at, q);
        const double g = in.gamma;
        const double lb = q * ctx.wq(CMatrix((1.0 - g) * at + g * bt), q);
        const double lc = q * ctx.wq(ctx.apply(f, CMatrix(a + b)), q);
        return Eval{{part("a_lower", q * q * std::cos(in.alpha) * std::pow(wa, p.t), mid, true),
                     part("a_upper", mid, s3 * std::pow(wa, p.t), true),
                     part("b", lb, s3 * std::pow((1.0 - g) * wa + g * wb, p.t), true),
                     part("c", lc, s3 * ctx.wq(CMatrix(at + bt), q), true)}};
      }});

  defs.push_back(PredicateDef{
      "P19",
      "|q| w_q(A^t + B^t) <= 2^{1-t} sec^3(alpha) (w_q(A) + w_q(B))^t and |q| cos^3(alpha) w_q((A+B)^t) <= "
      "w_q(A^t + B^t) <= 2^{1-t} sec^3(alpha) (w_q(A) + w_q(B))^t / |q|",
      "sectorial", Kind::sandwich, true, true, false, false, sect(2),
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const std::string f = power_name(p.t);
        const CMatrix& a = in.mats[0];
        const CMatrix& b = in.mats[1];
        const double q = p.q;
        const double c = std::cos(in.alpha);
        const double bound = std::pow(2.0, 1.0 - p.t) / (c * c * c) * std::pow(ctx.wq(a, q) + ctx.wq(b, q), p.t);
        const double wsum = ctx.wq(CMatrix(ctx.apply(f, a) + ctx.apply(f, b)), q);
        const double wpow = ctx.wq(ctx.apply(f, CMatrix(a + b)), q);
        return Eval{{part("subadditive", q * wsum, bound, true), part("lower", q * c * c * c * wpow, wsum, true),
                     part("upper", wsum, bound / q, true)}};
      }});

  defs.push_back(PredicateDef{
      "P20",
      "positive A, B: (a) |q|^2 f(w_q(A)) <= |q| w_q(f(A)) <= f(w_q(A)); (b) |q| w_q((1-g) f(A) + g f(B)) <= "
      "f((1-g) w_q(A) + g w_q(B)); (c) |q| w_q((A+B)^t) <= w_q(A^t + B^t), also with (w_q(A+B))^t",
      "psd", Kind::sandwich, true, true, true, false,
      [](Rng& rng, const TrialSpec& ts) { return pd_inputs(rng, ts, 2); },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const std::string ft = power_name(p.t);
        const CMatrix& a = in.mats[0];
        const CMatrix& b = in.mats[1];
        const double q = p.q;
        const double g = in.gamma;
        const double wa = ctx.wq(a, q);
        const double wb = ctx.wq(b, q);
        const double mid = q * ctx.wq(ctx.apply(p.f, a), q);
        const CMatrix mix = (1.0 - g) * ctx.apply(p.f, a) + g * ctx.apply(p.f, b);
        const CMatrix sum = a + b;
        const double wsum_t = ctx.wq(CMatrix(ctx.apply(ft, a) + ctx.apply(ft, b)), q);
        return Eval{{part("a_lower", q * q * f(wa), mid, true), part("a_upper", mid, f(wa), true),
                     part("b", q * ctx.wq(mix, q), f((1.0 - g) * wa + g * wb), true),
                     part("c", q * ctx.wq(ctx.apply(ft, sum), q), wsum_t, true),
                     part("c_power_of_radius", q * std::pow(ctx.wq(sum, q), p.t), wsum_t, true)}};
      }});

  defs.push_back(PredicateDef{
      "P21", "R(A) <= R(C), R(B) <= R(D): |q| w_q(A sigma_f B) <= sec^3(alpha) w_q(C sigma_f D)",
      "dominated_quadruple", Kind::upper, true, false, true, false,
      [](Rng& rng, const TrialSpec& ts) {
        Inputs in;
        in.alpha = ts.alpha;
        const Quadruple quad = gen_dominated_quadruple(rng, ts.n, ts.alpha);
        in.mats.assign(quad.begin(), quad.end());
        for (const CMatrix& m : in.mats) in.alpha_true = std::max(in.alpha_true, sector_angle(m).alpha_min);
        return in;
      },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const auto& m = in.mats;
        const CMatrix& ab = ctx.memo("sigma:" + p.f, {&m[0], &m[1]}, [&] { return sigma_f(m[0], m[1], f, ctx.quad()); });
        const CMatrix& cd = ctx.memo("sigma:" + p.f, {&m[2], &m[3]}, [&] { return sigma_f(m[2], m[3], f, ctx.quad()); });
        const double l = p.q * ctx.wq(ab, p.q);
        const double r = ctx.wq(cd, p.q);
        const double s = sec(in.alpha);
        return Eval{{part("sec3", l, s * s * s * r, true), info("sec2", l, s * s * r)}};
      }});

  defs.push_back(PredicateDef{
      "P22", "|q|^2 w_q(A sigma_f B) <= sec^3(alpha) (w_q(A) sigma_f w_q(B))", "sectorial", Kind::upper, true, false,
      true, false, sect(2), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const auto& m = in.mats;
        const CMatrix& ab = ctx.memo("sigma:" + p.f, {&m[0], &m[1]}, [&] { return sigma_f(m[0], m[1], f, ctx.quad()); });
        const double l = p.q * p.q * ctx.wq(ab, p.q);
        const double r = std::pow(sec(in.alpha), 3) * scalar_sigma(f, ctx.wq(m[0], p.q), ctx.wq(m[1], p.q));
        return Eval{{part("upper", l, r, true)}};
      }});

  defs.push_back(PredicateDef{
      "P23",
      "(a) |q|^2 w_q(A #_t B) <= sec^3(alpha) w_q^{1-t}(A) w_q^t(B); (b) |q|^2 w_q(A !_t B) <= sec^3(alpha) "
      "(w_q(A) !_t w_q(B)), at t = 1/2 with sec^3",
      "sectorial", Kind::upper, true, true, false, false, sect(2),
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix& a = in.mats[0];
        const CMatrix& b = in.mats[1];
        const double q = p.q;
        const double t = p.t;
        const double s = sec(in.alpha);
        const double s3 = s * s * s;
        const double wa = ctx.wq(a, q);
        const double wb = ctx.wq(b, q);
        const CMatrix& g = ctx.memo("geo:" + format_double(t), {&a, &b}, [&] { return weighted_geomean(a, b, t, ctx.quad()); });
        const CMatrix h = harmonic(a, b, t);
        const double wh = ctx.wq(h, q);
        const double scalar_h = 1.0 / ((1.0 - t) / wa + t / wb);
        Eval ev;
        ev.parts.push_back(part("a", q * q * ctx.wq(g, q), s3 * std::pow(wa, 1.0 - t) * std::pow(wb, t), true));
        ev.parts.push_back(part("b", q * q * wh, s3 * scalar_h, true));
        const CMatrix inv_mix = (1.0 - t) * accretive_inv(a) + t * accretive_inv(b);
        ev.parts.push_back(info("b_literal", q * q * ctx.wq(inv_mix, q), s3 * ((1.0 - t) / wa + t / wb)));
        if (t == 0.5) {
          ev.parts.push_back(part("half_sec3", q * q * wh, s3 * scalar_h, true));
          ev.parts.push_back(info("half_sec2", q * q * wh, s * s * scalar_h));
          const CMatrix inv_sum = accretive_inv(a) + accretive_inv(b);
          ev.parts.push_back(info("half_literal_sec2", q * q * ctx.wq(inv_sum, q), s * s * (1.0 / wa + 1.0 / wb)));
        }
        return ev;
      }});

  defs.push_back(PredicateDef{
      "P24",
      "(a) |q|^2 w_q(L(A,B)) <= sec^3(alpha) L(w_q(A), w_q(B)); (b) |q|^2 w_q(H_t(A,B)) <= sec^3(alpha) "
      "H_t(w_q(A), w_q(B))",
      "sectorial", Kind::upper, true, true, false, false, sect(2),
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix& a = in.mats[0];
        const CMatrix& b = in.mats[1];
        const double q = p.q;
        const double s3 = std::pow(sec(in.alpha), 3);
        const double wa = ctx.wq(a, q);
        const double wb = ctx.wq(b, q);
        const CMatrix& l = ctx.memo("log", {&a, &b}, [&] { return log_mean(a, b, ctx.quad()); });
        const CMatrix& h = ctx.memo("heinz:" + format_double(p.t), {&a, &b}, [&] { return heinz(a, b, p.t, ctx.quad()); });
        return Eval{{part("a", q * q * ctx.wq(l, q), s3 * scalar_mean(MeanKind::logarithmic, wa, wb), true),
                     part("b", q * q * ctx.wq(h, q), s3 * scalar_mean(MeanKind::heinz, wa, wb, p.t), true)}};
      }});

  defs.push_back(PredicateDef{
      "P25", "|q|^2 cos^4(alpha) w_q(A # B) <= |q| w_q(H_t(A,B)) <= sec^4(alpha) w_q((A+B)/2)", "sectorial",
      Kind::sandwich, true, true, false, false, sect(2), [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix& a = in.mats[0];
        const CMatrix& b = in.mats[1];
        const double q = p.q;
        const double c4 = std::pow(std::cos(in.alpha), 4);
        const CMatrix& g = ctx.memo("drury", {&a, &b}, [&] { return drury_geomean(a, b, ctx.quad()); });
        const CMatrix& h = ctx.memo("heinz:" + format_double(p.t), {&a, &b}, [&] { return heinz(a, b, p.t, ctx.quad()); });
        const double mid = q * ctx.wq(h, q);
        const double wd = ctx.wq(CMatrix(0.5 * (a + b)), q);
        return Eval{{part("lower", q * q * c4 * ctx.wq(g, q), mid, true), part("upper", mid, wd / c4, true)}};
      }});

  return defs;
}

inline std::vector<PredicateDef> axiom_predicates() {
  using namespace gen_detail;
  std::vector<PredicateDef> defs;

  defs.push_back(PredicateDef{
      "MA1", "A <= C, B <= D positive: A sigma_f B <= C sigma_f D", "psd", Kind::property, false, false, true, true,
      [](Rng& rng, const TrialSpec& ts) {
        Inputs in;
        const CMatrix a = random_pd(rng, ts.n);
        const CMatrix b = random_pd(rng, ts.n);
        const Eigen::Index r1 = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(ts.n));
        const Eigen::Index r2 = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(ts.n));
        in.mats = {a, b, hermitize(a + random_psd(rng, ts.n, r1)), hermitize(b + random_psd(rng, ts.n, r2))};
        return in;
      },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const auto& m = in.mats;
        const CMatrix ab = sigma_f(m[0], m[1], f, ctx.quad());
        const CMatrix cd = sigma_f(m[2], m[3], f, ctx.quad());
        Part pt = part("monotone", 0.0, lambda_min(hermitize(cd - ab)));
        pt.tol_abs = 1e-8;
        pt.tol_rel = 0.0;
        pt.scale = 1.0;
        return Eval{{pt}};
      }});

  defs.push_back(PredicateDef{
      "MA2", "C*(A sigma_f B)C = (C*AC) sigma_f (C*BC) for invertible C", "psd", Kind::property, false, false, true,
      true,
      [](Rng& rng, const TrialSpec& ts) {
        Inputs in = pd_inputs(rng, ts, 2);
        in.mats.push_back(ginibre_op(rng, ts.n));
        return in;
      },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const MonotoneFn& f = ctx.fn(p.f);
        const auto& m = in.mats;
        const CMatrix& c = m[2];
        const CMatrix lhs = c.adjoint() * sigma_f(m[0], m[1], f, ctx.quad()) * c;
        const CMatrix rhs = sigma_f(CMatrix(c.adjoint() * m[0] * c), CMatrix(c.adjoint() * m[1] * c), f, ctx.quad());
        Part pt = part("congruence", (lhs - rhs).norm() / std::max(rhs.norm(), 1e-300), 0.0);
        pt.tol_abs = 1e-7;
        pt.tol_rel = 0.0;
        pt.scale = 1.0;
        return Eval{{pt}};
      }});

  defs.push_back(PredicateDef{
      "MA4", "I sigma_f I = I", "psd", Kind::property, false, false, true, true,
      [](Rng&, const TrialSpec& ts) {
        Inputs in;
        in.mats.push_back(identity(ts.n));
        return in;
      },
      [](const Inputs& in, const Params& p, EvalCtx& ctx) {
        const CMatrix& id = in.mats[0];
        const CMatrix s = sigma_f(id, id, ctx.fn(p.f), ctx.quad());
        Part pt = part("normalized", spectral_norm(s - id), 0.0);
        pt.tol_abs = 1e-10;
        pt.tol_rel = 0.0;
        pt.scale = 1.0;
        return Eval{{pt}};
      }});

  return defs;
}

/// All registered predicates in fixed id order.
inline const std::vector<PredicateDef>& registry() {
  static const std::vector<PredicateDef> all = [] {
    std::vector<PredicateDef> v = section2_predicates();
    for (auto& d : section3_predicates()) v.push_back(std::move(d));
    for (auto& d : axiom_predicates()) v.push_back(std::move(d));
    return v;
  }();
  return all;
}

inline const PredicateDef& find_predicate(std::string_view id) {
  for (const PredicateDef& d : registry())
    if (d.id == id) return d;
  throw Error(Errc::UnknownPredicate, "unknown predicate '" + std::string(id) + "'");
}

inline std::vector<std::string> suite_ids(std::string_view suite) {
  std::vector<std::string> ids;
  for (const PredicateDef& d : registry()) {
    const bool axiom = d.id.rfind("MA", 0) == 0;
    const int num = axiom ? 0 : std::stoi(d.id.substr(1));
    if ((suite == "all" && !axiom) || (suite == "section2" && !axiom && num <= 8) ||
        (suite == "section3" && !axiom && num >= 9) || (suite == "means-axioms" && axiom)) {
      ids.push_back(d.id);
    }
  }
  if (ids.empty()) throw Error(Errc::InvalidArgument, "unknown suite '" + std::string(suite) + "'");
  return ids;
}

}  // namespace qnrlab::harness
