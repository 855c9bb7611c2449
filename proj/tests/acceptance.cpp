// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qnrlab/cli.hpp"
#include "qnrlab/qnrlab.hpp"

using namespace qnrlab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.ok) ++failures;
  std::printf("%s criterion %d: %s [%s] (%.1f s)\n", v.ok ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

CMatrix jordan() {
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 1) = 1.0;
  return t;
}

/// U diag(d) U*.
CMatrix conj_diag(const CMatrix& u, const Eigen::VectorXd& d) {
  return u * d.cast<cplx>().asDiagonal() * u.adjoint();
}

double rel(const CMatrix& x, const CMatrix& y) { return (x - y).norm() / std::max(1.0, y.norm()); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qnrlab_acceptance";
  fs::create_directories(dir);
  return dir / name;
}

/// Runs `verify run` through the CLI front end and returns (exit code, report text).
std::pair<int, std::string> verify_all(const fs::path& out) {
  std::ostringstream so, se;
  const int code = cli::dispatch({"verify", "run", "--suite", "all", "--trials", "200", "--dims", "2,3,4", "--seed",
                                  "0", "--report", out.string()},
                                 so, se);
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  return {code, text.str()};
}

std::string strip_timestamp(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  j.erase("timestamp");
  return j.dump();
}

}  // namespace

int main() {
  report(1, "Jordan-block radius curve", [] {
    Verdict v;
    double worst_solver = 0.0, worst_oracle = 0.0;
    for (double q : {0.0, 0.3, 0.6, 1.0}) {
      const double exact = oracle::jordan_wq(q);
      SolverCfg cfg;
      cfg.seed = 1;
      const double s = q_radius(jordan(), q, cfg).value;
      const double o = oracle::sample_pairs(jordan(), q, 1000000, 7 + static_cast<std::uint64_t>(q * 10));
      worst_solver = std::max(worst_solver, std::abs(s - exact));
      worst_oracle = std::max(worst_oracle, std::abs(o - exact));
    }
    v.ok = worst_solver <= 1e-6 && worst_oracle <= 1e-3;
    v.detail = fmt("solver err %.2e", worst_solver) + fmt(", oracle err %.2e", worst_oracle);
    return v;
  });

  report(2, "identity and homogeneity", [] {
    Rng rng(2);
    double id_err = 0.0, hom_err = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 2 + k % 4;
      const double q = rng.uniform(0.0, 1.0);
      id_err = std::max(id_err, std::abs(q_radius(identity(n), q).value - q));
      const CMatrix t = rng.ginibre(n, n);
      const cplx c = rng.cnormal() * 2.0;
      SolverCfg cfg;
      cfg.seed = static_cast<std::uint64_t>(k);
      const double base = q_radius(t, q, cfg).value;
      const double scaled = q_radius(CMatrix(c * t), q, cfg).value;
      hom_err = std::max(hom_err, std::abs(scaled - std::abs(c) * base) / std::max(1.0, std::abs(c) * base));
    }
    return Verdict{id_err <= 1e-10 && hom_err <= 1e-8, fmt("identity err %.2e", id_err) + fmt(", homogeneity err %.2e", hom_err)};
  });

  report(3, "compression consistency", [] {
    Rng rng(3);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 3 + k % 3;
      const int r = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n - 2));
      const SemiSpace sp = build_space(random_psd(rng, n, r));
      CMatrix t = rng.ginibre(n, n);
      t -= sp.proj * t * (identity(n) - sp.proj);
      const double q = rng.uniform(0.0, 1.0);
      SolverCfg cfg;
      cfg.seed = static_cast<std::uint64_t>(k);
      const double a = q_radius(sp, t, q, cfg).value;
      const double c = q_radius(compress(sp, t).mat, q, cfg).value;
      worst = std::max(worst, std::abs(a - c));
    }
    return Verdict{worst <= 1e-9, fmt("max |difference| %.2e", worst)};
  });

  report(4, "solver vs independent pair oracle", [] {
    Rng rng(4);
    int good = 0, below = 0;
    double worst_gap = 0.0;
    for (int k = 0; k < 200; ++k) {
      const int n = 2 + k % 2;
      const CMatrix t = rng.ginibre(n, n);
      const double q = rng.uniform(0.0, 1.0);
      SolverCfg cfg;
      cfg.seed = static_cast<std::uint64_t>(k);
      const double s = q_radius(t, q, cfg).value;
      const double o = oracle::sample_pairs_refined(t, q, 100000, 1000 + static_cast<std::uint64_t>(k));
      if (s < o - 1e-9) ++below;
      const double gap = (s - o) / s;
      worst_gap = std::max(worst_gap, gap);
      if (s >= o - 1e-9 && s - o <= 1e-3 * s) ++good;
    }
    return Verdict{good >= 198, std::to_string(good) + "/200 within bounds, " + std::to_string(below) +
                                    " below oracle" + fmt(", max relative gap %.2e", worst_gap)};
  });

  report(5, "means vs spectral oracles", [] {
    Rng rng(5);
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
      const int n = 2 + k % 3;
      const CMatrix u = rng.unitary(n);
      Eigen::VectorXd a(n), b(n);
      for (int i = 0; i < n; ++i) a(i) = std::exp(rng.uniform(-2.0, 2.0)), b(i) = std::exp(rng.uniform(-2.0, 2.0));
      const CMatrix A = conj_diag(u, a), B = conj_diag(u, b);
      auto each = [&](const std::function<double(double, double)>& f) {
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d(i) = f(a(i), b(i));
        return conj_diag(u, d);
      };
      worst = std::max(worst, rel(drury_geomean(A, B), each([](double x, double y) { return oracle::geo(x, y, 0.5); })));
      for (double t : {0.25, 0.5, 0.75}) {
        worst = std::max(worst, rel(weighted_geomean(A, B, t), each([t](double x, double y) { return oracle::geo(x, y, t); })));
        worst = std::max(worst, rel(monotone_apply(MonotoneFn::power(t), A),
                                    each([t](double x, double) { return std::pow(x, t); })));
        worst = std::max(worst, rel(heinz(A, B, t), each([t](double x, double y) { return oracle::heinz(x, y, t); })));
      }
      worst = std::max(worst, rel(log_mean(A, B), each([](double x, double y) { return oracle::logmean(x, y); })));
    }
    double probe = 0.0;
    for (const char* name : {"power:0.25", "power:0.5", "power:0.75", "identity", "one", "arithmetic", "harmonic:0.5"}) {
      const MonotoneFn f = monotone_from_name(name);
      for (double x : {0.5, 1.0, 2.0, 10.0}) probe = std::max(probe, std::abs(measure_scalar(f.measure(), x) - f(x)));
    }
    return Verdict{worst <= 1e-7 && probe <= 1e-8, fmt("max relative error %.2e", worst) + fmt(", measure probe err %.2e", probe)};
  });

  report(6, "mean axioms", [] {
    harness::HarnessCfg cfg;
    const harness::SuiteReport r = harness::run_suite("means-axioms", cfg);
    int fails = 0, trials = 0, inconc = 0;
    std::string worst;
    for (const auto& p : r.predicates) {
      fails += p.fails;
      trials += p.trials;
      inconc += p.inconclusives;
      worst += " " + p.id + fmt(":%.1e", p.min_slack);
    }
    return Verdict{fails == 0 && inconc == 0 && r.predicates.size() == 3,
                   std::to_string(trials) + " outcomes, " + std::to_string(fails) + " fails, min slack" + worst};
  });

  std::string first_report;
  report(7, "inequality suite (all, 200 trials, n in {2,3,4})", [&] {
    const auto [code, text] = verify_all(scratch("run1.json"));
    first_report = text;
    const nlohmann::json j = nlohmann::json::parse(text);
    int fails = 0, inconc = 0, total = 0;
    bool demo = false;
    for (const auto& p : j["predicates"]) {
      total += p["trials"].get<int>();
      inconc += p["inconclusives"].get<int>();
      if (p["kind"] != "expected_fail") fails += p["fails"].get<int>();
    }
    const auto& d = j["product_demo"];
    demo = d["bound_violated"].get<bool>() && std::abs(d["computed_values"]["w_q(TS)"].get<double>() - 2.0) < 1e-6 &&
           std::abs(d["product_bound"].get<double>() - 0.8) < 1e-6;
    const double rate = total ? static_cast<double>(inconc) / total : 1.0;
    return Verdict{code == 0 && fails == 0 && demo && rate < 0.01 && j["predicates"].size() == 25,
                   std::to_string(total) + " outcomes, " + std::to_string(fails) + " fails, " + std::to_string(inconc) +
                       " inconclusive, demo " + (demo ? "2 > 0.8 observed" : "missing")};
  });

  report(8, "sector machinery", [] {
    const double alphas[] = {0.0, kPi / 8, kPi / 4, kPi / 3};
    double excess = -1.0;
    for (int k = 0; k < 1000; ++k) {
      const double al = alphas[k % 4];
      const CMatrix a = std::get<CMatrix>(gen({GenKind::sectorial, 2 + k % 3, al, std::nullopt, std::uint64_t(k)}));
      excess = std::max(excess, sector_angle(a).alpha_min - al);
    }
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = cplx(1, 1);
    d(1, 1) = cplx(1, -1);
    const double err = std::abs(sector_angle(d).alpha_min - kPi / 4);
    return Verdict{excess <= 1e-9 && err <= 1e-12, fmt("max angle excess %.2e", excess) + fmt(", diag error %.2e", err)};
  });

  report(9, "determinism of the suite report", [&] {
    if (first_report.empty()) return Verdict{false, "criterion 7 produced no report"};
    const auto [code, text] = verify_all(scratch("run2.json"));
    const bool same = strip_timestamp(first_report) == strip_timestamp(text);
    return Verdict{same, same ? "reports identical without timestamp" : "reports differ"};
  });

  report(10, "stress probe", [] {
    // Negative means below the harness absolute tolerance; rounding at equality cases is not a violation.
    const double limit = -harness::HarnessCfg{}.tol_abs;
    const harness::StressResult p02 = harness::stress("P02", 10000, 1);
    std::string detail = fmt("P02 min slack %.3e", p02.worst.slack);
    bool ok = p02.worst.status != harness::Status::fail && p02.worst.slack >= limit;
    const double grid[] = {kPi / 8, kPi / 6, kPi / 4, kPi / 3};
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double al : grid) {
      const harness::StressResult r = harness::stress("P10", 10000, 2, al);
      ok = ok && r.worst.status != harness::Status::fail && r.worst.slack >= limit;
      detail += fmt(", P10@%.3f", al) + fmt(" %.3e", r.worst.slack);
      if (r.worst.slack > prev + 1e-9) monotone = false;
      prev = r.worst.slack;
    }
    return Verdict{ok && monotone, detail + (monotone ? ", non-increasing" : ", not monotone")};
  });

  return failures == 0 ? 0 : 1;
}
