#pragma once

// Trial machinery shared by every predicate: configuration, per-trial
// evaluation context with memoized radii and means, outcome classification.

#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qnrlab/means.hpp"
#include "qnrlab/qnr.hpp"
#include "qnrlab/random.hpp"
#include "qnrlab/sectorial.hpp"
#include "qnrlab/semi_hilbert.hpp"

namespace qnrlab::harness {

struct HarnessCfg {
  int trials = 200;
  std::vector<int> dims{2, 3, 4};
  std::vector<double> q_set{0.25, 0.5, 0.9, 1.0};
  std::vector<double> t_set{0.25, 0.5, 0.75};
  std::vector<double> gamma_set{0.25, 0.5, 0.75};
  std::vector<double> alpha_set{0.0, kPi / 8, kPi / 4, kPi / 3};
  std::vector<std::string> f_set{"power:0.5", "power:0.25"};
  std::vector<std::string> axiom_f_set{"power:0.5", "power:0.25", "arithmetic", "harmonic:0.5"};
  std::uint64_t seed = 0;
  int starts = 64;
  QuadCfg quad{};
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  double oracle_gap = 1e-6;
  int recheck_oracle_samples = 20000;
};

inline void validate(const HarnessCfg& cfg) {
  auto fail = [](const std::string& m) { throw Error(Errc::InvalidArgument, m); };
  if (cfg.trials < 0) fail("trials must be non-negative");
  if (cfg.dims.empty()) fail("dims must not be empty");
  for (int n : cfg.dims)
    if (n < 2 || n > 16) fail("dims must lie in [2, 16]");
  if (cfg.q_set.empty()) fail("q set must not be empty");
  for (double q : cfg.q_set)
    if (!(q > 0.0 && q <= 1.0)) fail("q values must lie in (0, 1]");
  for (double t : cfg.t_set)
    if (!(t > 0.0 && t < 1.0)) fail("t values must lie in (0, 1)");
  for (double g : cfg.gamma_set)
    if (!(g > 0.0 && g < 1.0)) fail("gamma values must lie in (0, 1)");
  for (double a : cfg.alpha_set)
    if (!(a >= 0.0 && a < kPi / 2)) fail("alpha values must lie in [0, pi/2)");
  if (cfg.t_set.empty() || cfg.gamma_set.empty() || cfg.alpha_set.empty() || cfg.f_set.empty()) {
    fail("parameter sets must not be empty");
  }
  if (cfg.starts < 1) fail("starts must be positive");
  validate(cfg.quad);
}

enum class Kind { upper, lower, sandwich, conditional, expected_fail, property };

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::upper: return "upper";
    case Kind::lower: return "lower";
    case Kind::sandwich: return "sandwich";
    case Kind::conditional: return "conditional";
    case Kind::expected_fail: return "expected_fail";
    case Kind::property: return "property";
  }
  return "?";
}

enum class Status { pass, fail, inconclusive };

/// One side-by-side comparison lhs <= rhs; `scale` sets the relative tolerance.
struct Part {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 1.0;
  bool wq_large = false;       // an optimized lower estimate sits on the large side
  bool informational = false;  // counted, never decides the status
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
};

inline Part part(std::string name, double lhs, double rhs, bool wq_large = false) {
  return Part{std::move(name), lhs, rhs, std::max(std::abs(lhs), std::abs(rhs)), wq_large, false, {}, {}};
}

inline Part info(std::string name, double lhs, double rhs) {
  Part p = part(std::move(name), lhs, rhs);
  p.informational = true;
  return p;
}

struct Eval {
  std::vector<Part> parts;
  bool vacuous = false;  // conditional hypothesis not met
};

/// What a trial's generator needs to know.
struct TrialSpec {
  int index = 0;
  int n = 2;
  double alpha = 0.0;
  double gamma = 0.5;
  int metric_kind = 0;  // 0: identity, 1: positive definite, 2: rank n-1
  std::uint64_t seed = 0;
};

struct Inputs {
  std::vector<CMatrix> mats;
  std::optional<SemiSpace> space;
  double alpha = 0.0;
  double gamma = 0.5;
  double alpha_true = 0.0;  // largest measured sector angle of the sectorial inputs
};

struct Params {
  double q = 1.0;
  double t = 0.5;
  std::string f;
};

inline std::uint64_t hash_bytes(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash_matrix(std::uint64_t h, const CMatrix& m) {
  const Eigen::Index dims[2] = {m.rows(), m.cols()};
  h = hash_bytes(h, dims, sizeof dims);
  return hash_bytes(h, m.data(), sizeof(cplx) * static_cast<std::size_t>(m.size()));
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

/// FNV-1a digest of the inputs and parameters of one outcome.
inline std::string digest(const Inputs& in, const Params& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const CMatrix& m : in.mats) h = hash_matrix(h, m);
  if (in.space) h = hash_matrix(h, in.space->metric);
  const double scalars[4] = {p.q, p.t, in.alpha, in.gamma};
  h = hash_bytes(h, scalars, sizeof scalars);
  h = hash_bytes(h, p.f.data(), p.f.size());
  return hex64(h);
}

/// Per-trial evaluation context. `effort` 2 doubles solver starts and
/// quadrature nodes and turns on the sampling oracle.
class EvalCtx {
 public:
  EvalCtx(const HarnessCfg& cfg, std::uint64_t seed, int effort = 1) : cfg_(cfg), seed_(seed), effort_(effort) {
    quad_ = effort > 1 ? cfg.quad.doubled() : cfg.quad;
  }

  int effort() const { return effort_; }
  const QuadCfg& quad() const { return quad_; }
  double max_gap() const { return max_gap_; }

  /// Classical (A = I) q-numerical radius.
  double wq(const CMatrix& t, double q) { return radius(nullptr, t, q); }

  /// A-weighted q-numerical radius.
  double wq(const SemiSpace& sp, const CMatrix& t, double q) { return radius(&sp, t, q); }

  /// Classical numerical radius (A-weighted through the compression).
  double w(const CMatrix& t) {
    const std::uint64_t key = hash_matrix(0x77ULL, t);
    auto it = classical_.find(key);
    if (it != classical_.end()) return it->second;
    const double v = classical_radius(t);
    classical_.emplace(key, v);
    return v;
  }

  const MonotoneFn& fn(const std::string& name) {
    auto it = fns_.find(name);
    if (it == fns_.end()) it = fns_.emplace(name, std::make_unique<MonotoneFn>(monotone_from_name(name))).first;
    return *it->second;
  }

  /// f(A) through the measure representation, memoized by input.
  const CMatrix& apply(const std::string& f, const CMatrix& a) {
    return memo("apply:" + f, {&a}, [&] { return monotone_apply(fn(f), a, quad_); });
  }

  /// Memoizes a matrix-valued computation keyed by a tag and its inputs.
  const CMatrix& memo(const std::string& tag, std::initializer_list<const CMatrix*> args,
                      const std::function<CMatrix()>& compute) {
    std::uint64_t h = hash_bytes(0xcbf29ce484222325ULL, tag.data(), tag.size());
    for (const CMatrix* m : args) h = hash_matrix(h, *m);
    auto it = matrices_.find(h);
    if (it == matrices_.end()) it = matrices_.emplace(h, compute()).first;
    return it->second;
  }

 private:
  double radius(const SemiSpace* sp, const CMatrix& t, double q) {
    std::uint64_t key = hash_matrix(0x51ULL, t);
    if (sp) key = hash_matrix(key, sp->metric);
    key = hash_bytes(key, &q, sizeof q);
    auto it = radii_.find(key);
    if (it != radii_.end()) return it->second;
    SolverCfg sc;
    sc.starts = cfg_.starts * effort_;
    sc.seed = derive_seed(seed_, key);
    sc.oracle_samples = effort_ > 1 ? cfg_.recheck_oracle_samples : 0;
    const QNRResult r = sp ? q_radius(*sp, t, q, sc) : q_radius(t, q, sc);
    if (sc.oracle_samples > 0) max_gap_ = std::max(max_gap_, r.value - r.oracle_lower);
    radii_.emplace(key, r.value);
    return r.value;
  }

  const HarnessCfg& cfg_;
  std::uint64_t seed_;
  int effort_;
  QuadCfg quad_;
  double max_gap_ = 0.0;
  std::unordered_map<std::uint64_t, double> radii_;
  std::unordered_map<std::uint64_t, double> classical_;
  std::unordered_map<std::uint64_t, CMatrix> matrices_;
  std::map<std::string, std::unique_ptr<MonotoneFn>> fns_;
};

struct PredicateDef {
  std::string id;
  std::string formula;
  std::string domain;
  Kind kind = Kind::upper;
  bool uses_q = true;
  bool uses_t = false;
  bool uses_f = false;
  bool axiom_f = false;  // f drawn from the axiom set instead of the inequality set
  std::function<Inputs(Rng&, const TrialSpec&)> generate;
  std::function<Eval(const Inputs&, const Params&, EvalCtx&)> evaluate;
};

struct TrialOutcome {
  Status status = Status::pass;
  double slack = 0.0;  // min over deciding parts of (rhs - lhs) / max(1, scale)
  std::uint64_t seed = 0;
  std::string inputs_digest;
  bool vacuous = false;
  std::string reason;  // inconclusive reason
  std::vector<std::string> info_violations;
  Params params;
};

inline double part_tol(const Part& p, const HarnessCfg& cfg) {
  return p.tol_abs.value_or(cfg.tol_abs) + p.tol_rel.value_or(cfg.tol_rel) * std::abs(p.scale);
}

inline bool violated(const Part& p, const HarnessCfg& cfg) {
  return !(p.rhs - p.lhs >= -part_tol(p, cfg));
}

inline double scaled_slack(const Part& p) { return (p.rhs - p.lhs) / std::max(1.0, std::abs(p.scale)); }

/// Evaluates once, re-evaluates suspected violations at doubled effort, and
/// labels the outcome.
inline TrialOutcome classify(const PredicateDef& def, const Inputs& in, const Params& p, std::uint64_t trial_seed,
                             const HarnessCfg& cfg, EvalCtx& ctx) {
  TrialOutcome out;
  out.seed = trial_seed;
  out.params = p;
  out.inputs_digest = digest(in, p);
  try {
    Eval ev = def.evaluate(in, p, ctx);
    auto any_violation = [&](const Eval& e) {
      for (const Part& pt : e.parts)
        if (!pt.informational && violated(pt, cfg)) return true;
      return false;
    };
    if (!ev.vacuous && any_violation(ev)) {
      EvalCtx strong(cfg, trial_seed, 2);
      ev = def.evaluate(in, p, strong);
      if (!ev.vacuous && any_violation(ev)) {
        bool doubtful = false;
        for (const Part& pt : ev.parts) {
          if (!pt.informational && violated(pt, cfg) && pt.wq_large && strong.max_gap() >= cfg.oracle_gap) {
            doubtful = true;
          }
        }
        out.status = doubtful ? Status::inconclusive : Status::fail;
        if (doubtful) out.reason = "optimizer gap on the large side";
      }
    }
    out.vacuous = ev.vacuous;
    out.slack = std::numeric_limits<double>::infinity();
    for (const Part& pt : ev.parts) {
      if (pt.informational) {
        if (violated(pt, cfg)) out.info_violations.push_back(pt.name);
        continue;
      }
      out.slack = std::min(out.slack, scaled_slack(pt));
    }
  } catch (const Error& e) {
    out.status = Status::inconclusive;
    out.reason = std::string(to_string(e.code()));
    out.slack = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace qnrlab::harness
