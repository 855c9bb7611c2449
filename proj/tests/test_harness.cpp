#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "qnrlab/harness.hpp"

using namespace qnrlab;
using namespace qnrlab::harness;

namespace {

HarnessCfg small(int trials = 2) {
  HarnessCfg cfg;
  cfg.trials = trials;
  cfg.dims = {2, 3};
  cfg.q_set = {0.5, 1.0};
  cfg.starts = 16;
  return cfg;
}

CMatrix jordan() {
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 1) = 1.0;
  return t;
}

Inputs fixed(std::vector<CMatrix> mats) {
  Inputs in;
  in.space = build_space(identity(mats.front().rows()));
  in.mats = std::move(mats);
  return in;
}

}  // namespace

TEST(Registry, IdsAndSuites) {
  std::set<std::string> ids;
  for (const PredicateDef& d : registry()) {
    EXPECT_TRUE(ids.insert(d.id).second) << d.id;
    EXPECT_TRUE(d.generate);
    EXPECT_TRUE(d.evaluate);
    EXPECT_FALSE(d.formula.empty());
  }
  for (int k = 1; k <= 25; ++k) {
    const std::string id = (k < 10 ? "P0" : "P") + std::to_string(k);
    EXPECT_TRUE(ids.count(id)) << id;
  }
  EXPECT_EQ(suite_ids("all").size(), 25u);
  EXPECT_EQ(suite_ids("section2").size(), 8u);
  EXPECT_EQ(suite_ids("section3").size(), 17u);
  for (const auto& id : suite_ids("means-axioms")) EXPECT_EQ(id.rfind("MA", 0), 0u);
  EXPECT_EQ(find_predicate("P08").kind, Kind::expected_fail);
  EXPECT_EQ(find_predicate("P04").kind, Kind::conditional);
  try {
    find_predicate("P99");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownPredicate);
  }
  EXPECT_THROW(suite_ids("section9"), Error);
}

TEST(Config, Validation) {
  HarnessCfg cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.q_set = {0.0};
  EXPECT_THROW(validate(cfg), Error);
  cfg = HarnessCfg{};
  cfg.dims = {1};
  EXPECT_THROW(validate(cfg), Error);
  cfg = HarnessCfg{};
  cfg.alpha_set = {kPi / 2};
  EXPECT_THROW(validate(cfg), Error);
}

TEST(TrialCycling, CoversParameterSets) {
  const HarnessCfg cfg;
  const PredicateDef& sec = find_predicate("P14");
  std::set<int> dims, metrics;
  std::set<double> alphas, gammas;
  for (int i = 0; i < 36; ++i) {
    const TrialSpec ts = trial_spec(sec, cfg, i);
    dims.insert(ts.n);
    alphas.insert(ts.alpha);
    gammas.insert(ts.gamma);
    metrics.insert(ts.metric_kind);
  }
  EXPECT_EQ(dims.size(), 3u);
  EXPECT_EQ(alphas.size(), 4u);
  EXPECT_EQ(gammas.size(), 3u);
  EXPECT_EQ(metrics.size(), 3u);
  EXPECT_NE(trial_spec(sec, cfg, 0).seed, trial_spec(sec, cfg, 1).seed);
  EXPECT_NE(trial_spec(sec, cfg, 0).seed, trial_spec(find_predicate("P15"), cfg, 0).seed);
}

TEST(Classify, FixedExamples) {
  const HarnessCfg cfg;
  EvalCtx ctx(cfg, 1);
  // P02 on the Jordan block at q = 0.6: 0.3 <= 0.9 <= 1.
  const TrialOutcome o = classify(find_predicate("P02"), fixed({jordan()}), {0.6, 0.5, ""}, 1, cfg, ctx);
  EXPECT_EQ(o.status, Status::pass);
  EXPECT_NEAR(o.slack, 0.1, 1e-8);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0, d(1, 1) = -1.0;
  const TrialOutcome h = classify(find_predicate("P01"), fixed({d}), {0.5, 0.5, ""}, 2, cfg, ctx);
  EXPECT_EQ(h.status, Status::pass);
  EXPECT_NEAR(ctx.wq(d, 0.5), 1.0, 1e-9);
}

TEST(Classify, SoundnessOfFail) {
  // A part violated by a margin far above tolerance is a fail after re-evaluation.
  PredicateDef def;
  def.id = "X";
  def.evaluate = [](const Inputs&, const Params&, EvalCtx&) { return Eval{{part("p", 2.0, 1.0)}, false}; };
  const HarnessCfg cfg;
  EvalCtx ctx(cfg, 0);
  TrialOutcome o = classify(def, Inputs{}, Params{}, 0, cfg, ctx);
  EXPECT_EQ(o.status, Status::fail);
  EXPECT_LT(o.slack, -cfg.tol_abs);

  // Within tolerance: pass.
  def.evaluate = [](const Inputs&, const Params&, EvalCtx&) { return Eval{{part("p", 1.0 + 1e-12, 1.0)}, false}; };
  o = classify(def, Inputs{}, Params{}, 0, cfg, ctx);
  EXPECT_EQ(o.status, Status::pass);

  // Informational parts never decide.
  def.evaluate = [](const Inputs&, const Params&, EvalCtx&) {
    return Eval{{part("p", 0.0, 1.0), info("i", 3.0, 1.0)}, false};
  };
  o = classify(def, Inputs{}, Params{}, 0, cfg, ctx);
  EXPECT_EQ(o.status, Status::pass);
  ASSERT_EQ(o.info_violations.size(), 1u);
  EXPECT_EQ(o.info_violations[0], "i");

  // Errors surface as inconclusive with the code as reason.
  def.evaluate = [](const Inputs&, const Params&, EvalCtx&) -> Eval {
    throw Error(Errc::QuadratureNotConverged, "x");
  };
  o = classify(def, Inputs{}, Params{}, 0, cfg, ctx);
  EXPECT_EQ(o.status, Status::inconclusive);
  EXPECT_EQ(o.reason, "QuadratureNotConverged");
}

TEST(RunPredicate, CountsSumToTrials) {
  const HarnessCfg cfg = small(3);
  for (const char* id : {"P01", "P05", "P14", "P21", "MA2"}) {
    const PredicateReport r = run_predicate(id, cfg);
    EXPECT_EQ(r.passes + r.fails + r.inconclusives, r.trials) << id;
    EXPECT_EQ(r.draws, 3);
    EXPECT_EQ(r.fails, 0) << id;
  }
}

TEST(RunPredicate, ExpectedFailDemoObservesViolation) {
  const PredicateReport r = run_predicate("P08", small(1));
  EXPECT_EQ(r.fails, 0);
  EXPECT_GT(r.passes, 0);
  const nlohmann::json demo = product_demo_json(small(1));
  EXPECT_NEAR(demo["computed_values"]["w_q(TS)"].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(demo["product_bound"].get<double>(), 0.8, 1e-9);
  EXPECT_TRUE(demo["bound_violated"].get<bool>());
}

TEST(RunSuite, ShapeAndDeterminism) {
  HarnessCfg cfg = small(1);
  cfg.dims = {2};
  const SuiteReport a = run_suite("all", cfg);
  EXPECT_EQ(a.predicates.size(), 25u);
  EXPECT_FALSE(a.has_failures());
  const SuiteReport b = run_suite("all", cfg);
  EXPECT_EQ(report_json(a, false).dump(), report_json(b, false).dump());
  const nlohmann::json j = report_json(a);
  EXPECT_TRUE(j.contains("timestamp"));
  EXPECT_TRUE(j.contains("product_demo"));
  EXPECT_EQ(j["config"]["trials"], 1);
  for (const auto& p : j["predicates"]) {
    for (const char* key : {"id", "paper_ref", "trials", "passes", "fails", "inconclusives", "min_slack", "worst_digest"}) {
      EXPECT_TRUE(p.contains(key)) << key;
    }
  }
  std::ostringstream csv;
  write_report_csv(csv, a);
  int lines = 0;
  for (char c : csv.str()) lines += c == '\n';
  EXPECT_EQ(lines, 26);
}

TEST(Stress, Basics) {
  const StressResult r = stress("P02", 60, 3);
  EXPECT_EQ(r.iterations, 60);
  EXPECT_NE(r.worst.status, Status::fail);
  EXPECT_GE(r.worst.slack, -1e-9);
  const StressResult again = stress("P02", 60, 3);
  EXPECT_EQ(r.worst.inputs_digest, again.worst.inputs_digest);
  EXPECT_EQ(r.worst.slack, again.worst.slack);
  try {
    stress("P77", 10, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownPredicate);
  }
  EXPECT_THROW(stress("P08", 10, 0), Error);
}

TEST(Stress, CosineConstantSaturates) {
  // Slack of the cos(alpha) bound shrinks as alpha grows.
  const double lo = stress("P10", 150, 5, 0.2).worst.slack;
  const double hi = stress("P10", 150, 5, 1.3).worst.slack;
  EXPECT_GE(lo, -1e-9);
  EXPECT_GE(hi, -1e-9);
}
