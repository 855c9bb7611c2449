#pragma once

// Suite runner, report serialization and the adversarial stress probe.

#include <chrono>
#include <ctime>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnrlab/harness/predicates.hpp"

namespace qnrlab::harness {

struct PredicateReport {
  std::string id;
  std::string formula;
  std::string domain;
  Kind kind = Kind::upper;
  int draws = 0;  // generated trial inputs
  int trials = 0;  // outcomes, one per (draw, parameter combination)
  int passes = 0;
  int fails = 0;
  int inconclusives = 0;
  int vacuous = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string worst_digest;
  Params worst_params;
  std::map<std::string, int> informational;  // violations of recorded-only variants
  std::map<std::string, int> inconclusive_reasons;
  double max_alpha_excess = -std::numeric_limits<double>::infinity();  // measured minus target angle
};

struct SuiteReport {
  std::string suite;
  HarnessCfg cfg;
  std::vector<PredicateReport> predicates;

  bool has_failures() const {
    for (const auto& p : predicates)
      if (p.kind != Kind::expected_fail && p.fails > 0) return true;
    return false;
  }
};

inline TrialSpec trial_spec(const PredicateDef& def, const HarnessCfg& cfg, int i) {
  const int nd = static_cast<int>(cfg.dims.size());
  TrialSpec ts;
  ts.index = i;
  ts.n = cfg.dims[static_cast<std::size_t>(i % nd)];
  ts.alpha = def.domain == "psd" ? 0.0 : cfg.alpha_set[static_cast<std::size_t>(i) % cfg.alpha_set.size()];
  ts.gamma = cfg.gamma_set[static_cast<std::size_t>(i / nd) % cfg.gamma_set.size()];
  ts.metric_kind = (i / nd) % 3;
  ts.seed = derive_seed(derive_seed(cfg.seed, hash_name(def.id)), static_cast<std::uint64_t>(i));
  return ts;
}

inline std::vector<Params> param_grid(const PredicateDef& def, const HarnessCfg& cfg) {
  std::vector<double> qs = def.uses_q ? cfg.q_set : std::vector<double>{1.0};
  std::vector<double> ts = def.uses_t ? cfg.t_set : std::vector<double>{0.5};
  std::vector<std::string> fs = def.uses_f ? (def.axiom_f ? cfg.axiom_f_set : cfg.f_set) : std::vector<std::string>{""};
  std::vector<Params> grid;
  for (double q : qs)
    for (double t : ts)
      for (const auto& f : fs) grid.push_back(Params{q, t, f});
  return grid;
}

inline void record(PredicateReport& rep, const TrialOutcome& o) {
  ++rep.trials;
  switch (o.status) {
    case Status::pass: ++rep.passes; break;
    case Status::fail: ++rep.fails; break;
    case Status::inconclusive:
      ++rep.inconclusives;
      ++rep.inconclusive_reasons[o.reason];
      break;
  }
  if (o.vacuous) ++rep.vacuous;
  for (const auto& name : o.info_violations) ++rep.informational[name];
  if (o.status != Status::inconclusive && !o.vacuous && o.slack < rep.min_slack) {
    rep.min_slack = o.slack;
    rep.worst_digest = o.inputs_digest;
    rep.worst_params = o.params;
  }
}

inline PredicateReport run_predicate(const PredicateDef& def, const HarnessCfg& cfg) {
  validate(cfg);
  PredicateReport rep;
  rep.id = def.id;
  rep.formula = def.formula;
  rep.domain = def.domain;
  rep.kind = def.kind;
  const std::vector<Params> grid = param_grid(def, cfg);
  for (int i = 0; i < cfg.trials; ++i) {
    const TrialSpec ts = trial_spec(def, cfg, i);
    ++rep.draws;
    Inputs in;
    try {
      Rng rng(ts.seed);
      in = def.generate(rng, ts);
    } catch (const Error& e) {
      for (const Params& p : grid) {
        TrialOutcome o;
        o.status = Status::inconclusive;
        o.reason = std::string("generation: ") + std::string(to_string(e.code()));
        o.params = p;
        record(rep, o);
      }
      continue;
    }
    if (def.domain == "sectorial" || def.domain == "dominated_quadruple") {
      rep.max_alpha_excess = std::max(rep.max_alpha_excess, in.alpha_true - in.alpha);
    }
    EvalCtx ctx(cfg, ts.seed);
    for (const Params& p : grid) record(rep, classify(def, in, p, ts.seed, cfg, ctx));
  }
  return rep;
}

inline PredicateReport run_predicate(std::string_view id, const HarnessCfg& cfg) {
  return run_predicate(find_predicate(id), cfg);
}

inline SuiteReport run_suite(std::string_view suite, const HarnessCfg& cfg) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = std::string(suite);
  rep.cfg = cfg;
  for (const std::string& id : suite_ids(suite)) rep.predicates.push_back(run_predicate(id, cfg));
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline nlohmann::json config_json(const HarnessCfg& cfg) {
  nlohmann::json j;
  j["trials"] = cfg.trials;
  j["dims"] = cfg.dims;
  j["q_set"] = cfg.q_set;
  j["t_set"] = cfg.t_set;
  j["gamma_set"] = cfg.gamma_set;
  j["alpha_set"] = cfg.alpha_set;
  j["f_set"] = cfg.f_set;
  j["axiom_f_set"] = cfg.axiom_f_set;
  j["seed"] = cfg.seed;
  j["starts"] = cfg.starts;
  j["quadrature"] = {{"nodes", cfg.quad.nodes},
                     {"outer_nodes", cfg.quad.outer_nodes},
                     {"trunc", cfg.quad.trunc},
                     {"tanh_rule", cfg.quad.tanh_rule},
                     {"conv_tol", cfg.quad.conv_tol}};
  j["tol_abs"] = cfg.tol_abs;
  j["tol_rel"] = cfg.tol_rel;
  j["oracle_gap"] = cfg.oracle_gap;
  return j;
}

inline nlohmann::json params_json(const Params& p) { return {{"q", p.q}, {"t", p.t}, {"f", p.f}}; }

/// Values recorded for the fixed product counterexample.
inline nlohmann::json product_demo_json(const HarnessCfg& cfg) {
  constexpr double q = 0.1;
  CMatrix t(2, 2);
  t << 0.0, 1.0, 1.0, 0.0;
  const CMatrix s = 2.0 * identity(2);
  EvalCtx ctx(cfg, derive_seed(cfg.seed, hash_name("P08-demo")), 2);
  const double wt = ctx.wq(t, q);
  const double ws = ctx.wq(s, q);
  const double wts = ctx.wq(CMatrix(t * s), q);
  nlohmann::json j;
  j["q"] = q;
  j["stated_values"] = {{"w_q(T)", q}, {"w_q(S)", 2 * q}, {"w_q(TS)", 2 * q}};
  j["computed_values"] = {{"w_q(T)", wt}, {"w_q(S)", ws}, {"w_q(TS)", wts}};
  j["product_bound"] = 4.0 * wt * ws;
  j["bound_violated"] = wts > 4.0 * wt * ws;
  return j;
}

inline nlohmann::json report_json(const SuiteReport& rep, bool with_timestamp = true) {
  nlohmann::json j;
  j["suite"] = rep.suite;
  j["config"] = config_json(rep.cfg);
  j["metadata"] = {
      {"q_domain", "q ranges over 0 < |q| <= 1 wherever the nonzero unit-disc parameter set is required"},
      {"heinz_scalar_mean", "the scalar Heinz mean on the right-hand side uses the same t as the matrix mean"},
      {"alpha", "alpha is the generator target, an upper bound on the measured sector angle"},
      {"slack", "(rhs - lhs) / max(1, scale); fail when rhs - lhs < -(tol_abs + tol_rel * scale)"}};
  nlohmann::json preds = nlohmann::json::array();
  bool has_demo = false;
  for (const PredicateReport& p : rep.predicates) {
    nlohmann::json e;
    e["id"] = p.id;
    e["paper_ref"] = p.formula;
    e["kind"] = std::string(to_string(p.kind));
    e["domain"] = p.domain;
    e["draws"] = p.draws;
    e["trials"] = p.trials;
    e["passes"] = p.passes;
    e["fails"] = p.fails;
    e["inconclusives"] = p.inconclusives;
    e["vacuous"] = p.vacuous;
    e["min_slack"] = finite_or_null(p.min_slack);
    e["worst_digest"] = p.worst_digest;
    e["worst_params"] = params_json(p.worst_params);
    e["informational"] = p.informational;
    e["inconclusive_reasons"] = p.inconclusive_reasons;
    if (std::isfinite(p.max_alpha_excess)) e["max_alpha_excess"] = p.max_alpha_excess;
    preds.push_back(std::move(e));
    if (p.id == "P08") has_demo = true;
  }
  j["predicates"] = std::move(preds);
  if (has_demo) j["product_demo"] = product_demo_json(rep.cfg);
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  return j;
}

/// One row per predicate.
inline void write_report_csv(std::ostream& os, const SuiteReport& rep) {
  os << "id,kind,domain,draws,trials,passes,fails,inconclusives,vacuous,min_slack,worst_digest\n";
  for (const PredicateReport& p : rep.predicates) {
    os << p.id << ',' << to_string(p.kind) << ',' << p.domain << ',' << p.draws << ',' << p.trials << ','
       << p.passes << ',' << p.fails << ',' << p.inconclusives << ',' << p.vacuous << ','
       << (std::isfinite(p.min_slack) ? format_double(p.min_slack) : std::string()) << ',' << p.worst_digest << '\n';
  }
}

// ---------------------------------------------------------------------------
// Stress probe

struct StressResult {
  std::string id;
  int iterations = 0;
  int accepted = 0;
  double alpha = 0.0;
  TrialOutcome worst;
  Inputs worst_inputs;
};

namespace stress_detail {

inline void normalize(CMatrix& m) {
  const double nm = spectral_norm(m);
  if (nm > 0.0) m /= nm;
}

/// Random step that keeps the inputs inside the predicate's domain.
inline Inputs perturb(const PredicateDef& def, const Inputs& in, Rng& rng, double step) {
  Inputs out = in;
  for (CMatrix& m : out.mats) {
    const Eigen::Index n = m.rows();
    CMatrix next = m + step * rng.ginibre(n, n);
    if (def.domain == "sectorial") {
      next = project_to_sector(next, in.alpha);
      normalize(next);
    } else if (def.domain == "psd") {
      next = herm_apply(herm_eig(hermitize(next)), [](double l) { return std::max(l, 0.05); });
    } else if (out.space) {
      next = gen_detail::make_a_bounded(*out.space, next);
      if (def.domain == "a_selfadjoint") next = cartesian(*out.space, next).first;
      normalize(next);
    } else {
      normalize(next);
    }
    m = std::move(next);
  }
  if (def.domain == "sectorial") {
    out.alpha_true = 0.0;
    for (const CMatrix& m : out.mats) out.alpha_true = std::max(out.alpha_true, sector_angle(m).alpha_min);
  }
  return out;
}

inline bool hill_climbable(const PredicateDef& def) {
  return def.domain == "sectorial" || def.domain == "psd" || def.domain == "general" ||
         def.domain == "a_selfadjoint";
}

}  // namespace stress_detail

/// Minimizes the slack of one predicate by hill climbing over its inputs and
/// parameters. Domains without a projection fall back to random restarts.
inline StressResult stress(std::string_view id, int iterations, std::uint64_t seed,
                           std::optional<double> alpha = std::nullopt, HarnessCfg cfg = {}) {
  const PredicateDef& def = find_predicate(id);
  if (def.kind == Kind::expected_fail) throw Error(Errc::InvalidArgument, "stress does not apply to " + def.id);
  if (iterations < 1) throw Error(Errc::InvalidArgument, "iterations must be positive");
  if (alpha) {
    if (!(*alpha >= 0.0 && *alpha < kPi / 2)) throw Error(Errc::InvalidArgument, "alpha must lie in [0, pi/2)");
    cfg.alpha_set = {*alpha};
  }
  cfg.starts = std::min(cfg.starts, 16);
  Rng rng(derive_seed(seed, hash_name(def.id)));
  const std::vector<Params> grid = param_grid(def, cfg);

  auto fresh = [&](int i) {
    TrialSpec ts = trial_spec(def, cfg, i);
    ts.seed = derive_seed(seed, static_cast<std::uint64_t>(i) + 0x5eedULL);
    Rng local(ts.seed);
    return def.generate(local, ts);
  };
  auto evaluate = [&](const Inputs& in, const Params& p, std::uint64_t s) {
    EvalCtx ctx(cfg, s);
    return classify(def, in, p, s, cfg, ctx);
  };
  auto usable = [](const TrialOutcome& o) { return o.status != Status::inconclusive && !o.vacuous; };

  StressResult res;
  res.id = def.id;
  res.alpha = cfg.alpha_set.front();
  Inputs cur = fresh(0);
  Params cur_p = grid[rng.next() % grid.size()];
  TrialOutcome cur_o = evaluate(cur, cur_p, seed);
  res.worst = cur_o;
  res.worst_inputs = cur;
  double step = 0.3;
  for (int it = 1; it < iterations; ++it) {
    Inputs cand;
    Params cand_p = cur_p;
    try {
      if (stress_detail::hill_climbable(def)) {
        cand = stress_detail::perturb(def, cur, rng, step);
        if (def.uses_q && rng.uniform() < 0.3) {
          cand_p.q = std::clamp(cur_p.q + step * rng.normal(), 1e-3, 1.0);
        }
        if (def.uses_t && rng.uniform() < 0.3) cand_p.t = std::clamp(cur_p.t + step * rng.normal(), 1e-3, 1.0 - 1e-3);
      } else {
        cand = fresh(it);
        cand_p = grid[rng.next() % grid.size()];
      }
    } catch (const Error&) {
      step = std::max(step * 0.9, 1e-6);
      continue;
    }
    const TrialOutcome o = evaluate(cand, cand_p, derive_seed(seed, static_cast<std::uint64_t>(it)));
    ++res.iterations;
    if (usable(o) && (!usable(cur_o) || o.slack <= cur_o.slack)) {
      cur = std::move(cand);
      cur_p = cand_p;
      cur_o = o;
      ++res.accepted;
      step = std::min(step * 1.1, 1.0);
      if (!usable(res.worst) || o.slack < res.worst.slack) {
        res.worst = o;
        res.worst_inputs = cur;
      }
    } else {
      step = std::max(step * 0.97, 1e-7);
    }
  }
  ++res.iterations;
  return res;
}

inline nlohmann::json stress_json(const StressResult& r) {
  return {{"id", r.id},
          {"iterations", r.iterations},
          {"accepted", r.accepted},
          {"alpha", r.alpha},
          {"min_slack", finite_or_null(r.worst.slack)},
          {"status", r.worst.status == Status::pass ? "pass" : r.worst.status == Status::fail ? "fail" : "inconclusive"},
          {"worst_digest", r.worst.inputs_digest},
          {"worst_params", params_json(r.worst.params)}};
}

}  // namespace qnrlab::harness
