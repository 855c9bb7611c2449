#pragma once

// Command-line front end. `dispatch` takes the argument list without the
// program name and writes results to `out`, diagnostics to `err`.
//
// Exit codes: 0 success, 2 verification failures, 3 invalid input,
// 4 numerical non-convergence.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnrlab/qnrlab.hpp"

namespace qnrlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitNoConvergence = 4;

/// Parses "0.6", "0.3+0.4i", "-0.2-0.1i" or "0.5i".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto to_num = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "cannot parse complex number '" + text + "'");
    }
    if (used != part.size()) throw Error(Errc::ParseError, "cannot parse complex number '" + text + "'");
    return v;
  };
  if (s.empty()) throw Error(Errc::ParseError, "empty complex number");
  if (s.back() != 'i') return {to_num(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_num(s)};
  return {to_num(s.substr(0, split)), to_num(s.substr(split))};
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "cannot parse integer list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(Errc::ParseError, "empty integer list");
  return out;
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "cannot parse number list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(Errc::ParseError, "empty number list");
  return out;
}

/// Writes through a temporary file and renames, so readers never see a partial file.
inline void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error(Errc::InvalidArgument, "cannot write " + path);
    os << content;
    if (!os) throw Error(Errc::InvalidArgument, "cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::InvalidArgument, "cannot write " + path + ": " + ec.message());
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct QArg {
  double modulus = 0.0;
  nlohmann::json note;
};

inline QArg normalize_q(const std::string& text) {
  const cplx q = parse_complex(text);
  QParam checked(q);  // validates |q| <= 1
  QArg out{checked.modulus(), nullptr};
  if (q.imag() != 0.0 || q.real() < 0.0) {
    out.note = "q = " + text + " replaced by |q| = " + format_double(out.modulus) + "; w_q depends on |q| only";
  }
  return out;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qnrlab: q-numerical radius, sectorial means and inequality checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  // mat gen
  auto* mat = app.add_subcommand("mat", "Matrix utilities")->require_subcommand(1);
  auto* mat_gen = mat->add_subcommand("gen", "Generate a seeded random matrix or quadruple");
  std::string g_kind = "psd";
  int g_n = 2;
  double g_alpha = 0.0;
  int g_rank = 0;
  std::uint64_t g_seed = 0;
  std::string g_out;
  mat_gen->add_option("--kind", g_kind, "psd|sectorial|accretive|hermitian|ginibre|dominated_quadruple")->required();
  mat_gen->add_option("--n", g_n, "Dimension")->required();
  mat_gen->add_option("--alpha", g_alpha, "Sector half-angle in radians");
  mat_gen->add_option("--rank", g_rank, "Rank for psd");
  mat_gen->add_option("--seed", g_seed, "Seed")->required();
  mat_gen->add_option("-o,--out", g_out, "Output file (default: standard output)");

  // qnr radius / range
  auto* qnr = app.add_subcommand("qnr", "q-numerical radius and range")->require_subcommand(1);
  auto* q_rad = qnr->add_subcommand("radius", "Compute w_q(T) or w_{q,A}(T)");
  auto* q_rng = qnr->add_subcommand("range", "Sample W_q(T) to CSV");
  std::string q_matrix, q_metric, q_value = "1", q_out;
  int q_starts = 64, q_oracle = 0, q_samples = 1000;
  std::uint64_t q_seed = 0;
  double q_rank_tol = kDefaultRankTol;
  for (auto* sc : {q_rad, q_rng}) {
    sc->add_option("--matrix", q_matrix, "Operator T (matrix JSON)")->required();
    sc->add_option("--metric", q_metric, "Positive semidefinite metric A (matrix JSON)");
    sc->add_option("--q", q_value, "q as a real or re+imi")->required();
    sc->add_option("--seed", q_seed, "Seed");
    sc->add_option("--rank-tol", q_rank_tol, "Relative rank threshold for the metric");
  }
  q_rad->add_option("--starts", q_starts, "Multistart count");
  q_rad->add_option("--oracle-samples", q_oracle, "Sampling oracle size");
  q_rng->add_option("--samples", q_samples, "Number of points");
  q_rng->add_option("-o,--out", q_out, "CSV output (default: standard output)");

  // sector angle
  auto* sector = app.add_subcommand("sector", "Sector machinery")->require_subcommand(1);
  auto* s_angle = sector->add_subcommand("angle", "Minimal sector angle");
  std::string s_matrix;
  s_angle->add_option("--matrix", s_matrix, "Accretive matrix (matrix JSON)")->required();

  // means compute
  auto* means = app.add_subcommand("means", "Matrix means")->require_subcommand(1);
  auto* m_comp = means->add_subcommand("compute", "Compute a mean of two accretive matrices");
  std::string m_op, m_a, m_b, m_f = "power:0.5";
  double m_t = 0.5;
  int m_nodes = 64;
  bool m_tanh = false;
  m_comp->add_option("--op", m_op, "harmonic|geometric|weighted_geometric|sigma|log|heinz|arithmetic")->required();
  m_comp->add_option("--t", m_t, "Weight t");
  m_comp->add_option("--f", m_f, "Monotone function for --op sigma");
  m_comp->add_option("--a", m_a, "A (matrix JSON)")->required();
  m_comp->add_option("--b", m_b, "B (matrix JSON)")->required();
  m_comp->add_option("--nodes", m_nodes, "Quadrature nodes");
  m_comp->add_flag("--tanh", m_tanh, "Use the tanh substitution rule");

  // funcalc
  auto* fc = app.add_subcommand("funcalc", "f(A) for an operator monotone f and accretive A");
  std::string fc_f = "power:0.5", fc_measure, fc_matrix;
  int fc_nodes = 64;
  fc->add_option("--f", fc_f, "power:t|identity|one|arithmetic|harmonic:t");
  fc->add_option("--measure", fc_measure, "Representing measure JSON (overrides --f)");
  fc->add_option("--matrix", fc_matrix, "A (matrix JSON)")->required();
  fc->add_option("--nodes", fc_nodes, "Quadrature nodes");

  // verify
  auto* verify = app.add_subcommand("verify", "Inequality harness")->require_subcommand(1);
  auto* v_run = verify->add_subcommand("run", "Run a predicate suite");
  auto* v_list = verify->add_subcommand("list", "List registered predicates");
  auto* v_stress = verify->add_subcommand("stress", "Adversarial slack search for one predicate");
  std::string v_suite = "all", v_dims = "2,3,4", v_report, v_format = "json", v_qset, v_ids;
  int v_trials = 200, v_starts = 64, v_nodes = 64;
  std::uint64_t v_seed = 0;
  v_run->add_option("--suite", v_suite, "all|section2|section3|means-axioms");
  v_run->add_option("--ids", v_ids, "Comma-separated predicate ids (overrides --suite)");
  v_run->add_option("--trials", v_trials, "Trials per predicate");
  v_run->add_option("--dims", v_dims, "Comma-separated dimensions");
  v_run->add_option("--q-set", v_qset, "Comma-separated q values");
  v_run->add_option("--seed", v_seed, "Seed");
  v_run->add_option("--starts", v_starts, "Solver starts");
  v_run->add_option("--nodes", v_nodes, "Quadrature nodes");
  v_run->add_option("--report", v_report, "Report file");
  v_run->add_option("--format", v_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  std::string st_id, st_alpha;
  int st_iters = 10000;
  std::uint64_t st_seed = 0;
  v_stress->add_option("--id", st_id, "Predicate id")->required();
  v_stress->add_option("--iterations", st_iters, "Iterations");
  v_stress->add_option("--seed", st_seed, "Seed");
  v_stress->add_option("--alpha", st_alpha, "Sector angle target in radians");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  auto emit = [&](const std::string& path, const std::string& content) {
    if (path.empty()) {
      out << content;
    } else {
      write_file(path, content);
    }
  };

  try {
    if (*mat_gen) {
      const auto kind = parse_gen_kind(g_kind);
      if (!kind) throw Error(Errc::InvalidSpec, "unknown kind '" + g_kind + "'");
      GenSpec spec{*kind, g_n, g_alpha, g_rank > 0 ? std::optional<int>(g_rank) : std::nullopt, g_seed};
      const GenResult res = gen(spec);
      nlohmann::json j;
      if (const auto* m = std::get_if<CMatrix>(&res)) {
        j = matrix_to_json(*m);
      } else {
        j = nlohmann::json::array();
        for (const CMatrix& m : std::get<Quadruple>(res)) j.push_back(matrix_to_json(m));
      }
      emit(g_out, dump(j));
      return kExitOk;
    }

    if (*q_rad || *q_rng) {
      const CMatrix t = read_matrix_file(q_matrix);
      const QArg q = normalize_q(q_value);
      std::optional<SemiSpace> sp;
      if (!q_metric.empty()) sp = build_space(read_matrix_file(q_metric), q_rank_tol);
      if (*q_rad) {
        if (q_starts < 1) throw Error(Errc::InvalidArgument, "--starts must be positive");
        if (q_oracle < 0) throw Error(Errc::InvalidArgument, "--oracle-samples must be non-negative");
        SolverCfg cfg;
        cfg.starts = q_starts;
        cfg.oracle_samples = q_oracle;
        cfg.seed = q_seed;
        const QNRResult r = sp ? q_radius(*sp, t, q.modulus, cfg) : q_radius(t, q.modulus, cfg);
        nlohmann::json j;
        j["value"] = r.value;
        j["q"] = q.modulus;
        if (!q.note.is_null()) j["note"] = q.note;
        j["witness"] = {{"x", vector_to_json(r.witness.x)}, {"y", vector_to_json(r.witness.y)}};
        j["oracle_lower"] = r.oracle_lower;
        j["starts"] = r.starts;
        j["converged"] = r.converged;
        j["iterations"] = r.iterations;
        j["config"] = {{"matrix", q_matrix}, {"metric", q_metric}, {"q", q_value}, {"starts", q_starts},
                       {"oracle_samples", q_oracle}, {"seed", q_seed}, {"rank_tol", q_rank_tol}};
        out << dump(j);
      } else {
        if (q_samples < 0) throw Error(Errc::InvalidArgument, "--samples must be non-negative");
        const PointCloud cloud =
            sp ? q_range_sample(*sp, t, q.modulus, q_samples, q_seed) : q_range_sample(t, q.modulus, q_samples, q_seed);
        std::ostringstream csv;
        write_point_cloud_csv(csv, cloud);
        emit(q_out, csv.str());
        if (!q.note.is_null()) err << "note: " << q.note.get<std::string>() << "\n";
      }
      return kExitOk;
    }

    if (*s_angle) {
      const SectorCert c = sector_angle(read_matrix_file(s_matrix));
      out << dump({{"alpha_min", c.alpha_min}, {"re_min_eig", c.re_min_eig}, {"rho", c.rho},
                   {"config", {{"matrix", s_matrix}}}});
      return kExitOk;
    }

    if (*m_comp) {
      const CMatrix a = read_matrix_file(m_a);
      const CMatrix b = read_matrix_file(m_b);
      QuadCfg qc;
      qc.nodes = m_nodes;
      qc.tanh_rule = m_tanh;
      CMatrix r;
      if (m_op == "harmonic") {
        r = harmonic(a, b, m_t);
      } else if (m_op == "geometric") {
        r = drury_geomean(a, b, qc);
      } else if (m_op == "weighted_geometric") {
        r = weighted_geomean(a, b, m_t, qc);
      } else if (m_op == "sigma") {
        r = sigma_f(a, b, monotone_from_name(m_f), qc);
      } else if (m_op == "log") {
        r = log_mean(a, b, qc);
      } else if (m_op == "heinz") {
        r = heinz(a, b, m_t, qc);
      } else if (m_op == "arithmetic") {
        r = sigma_f(a, b, MonotoneFn::arithmetic(), qc);
      } else {
        throw Error(Errc::InvalidArgument, "unknown mean '" + m_op + "'");
      }
      out << dump({{"result", matrix_to_json(r)},
                   {"config", {{"op", m_op}, {"t", m_t}, {"f", m_f}, {"a", m_a}, {"b", m_b}, {"nodes", m_nodes},
                               {"tanh", m_tanh}}}});
      return kExitOk;
    }

    if (*fc) {
      const CMatrix a = read_matrix_file(fc_matrix);
      const MonotoneFn f =
          fc_measure.empty() ? monotone_from_name(fc_f) : monotone_from_json(read_json_file(fc_measure), fc_measure);
      QuadCfg qc;
      qc.nodes = fc_nodes;
      const CMatrix r = monotone_apply(f, a, qc);
      out << dump({{"result", matrix_to_json(r)},
                   {"config", {{"f", f.id()}, {"matrix", fc_matrix}, {"nodes", fc_nodes}}}});
      return kExitOk;
    }

    if (*v_list) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& d : harness::registry()) {
        j.push_back({{"id", d.id}, {"paper_ref", d.formula}, {"domain", d.domain},
                     {"kind", std::string(harness::to_string(d.kind))}, {"uses_q", d.uses_q},
                     {"uses_t", d.uses_t}, {"uses_f", d.uses_f}});
      }
      out << dump(j);
      return kExitOk;
    }

    if (*v_run) {
      harness::HarnessCfg cfg;
      cfg.trials = v_trials;
      cfg.dims = parse_int_list(v_dims);
      if (!v_qset.empty()) cfg.q_set = parse_double_list(v_qset);
      cfg.seed = v_seed;
      cfg.starts = v_starts;
      cfg.quad.nodes = v_nodes;
      harness::validate(cfg);
      harness::SuiteReport rep;
      if (!v_ids.empty()) {
        rep.suite = "custom";
        rep.cfg = cfg;
        std::stringstream ss(v_ids);
        std::string id;
        while (std::getline(ss, id, ',')) rep.predicates.push_back(harness::run_predicate(id, cfg));
      } else {
        rep = harness::run_suite(v_suite, cfg);
      }
      std::string body;
      if (v_format == "csv") {
        std::ostringstream csv;
        harness::write_report_csv(csv, rep);
        body = csv.str();
      } else {
        body = dump(harness::report_json(rep));
      }
      if (v_report.empty()) {
        out << body;
      } else {
        write_file(v_report, body);
        int fails = 0, inconclusive = 0, total = 0;
        for (const auto& p : rep.predicates) {
          if (p.kind != harness::Kind::expected_fail) fails += p.fails;
          inconclusive += p.inconclusives;
          total += p.trials;
        }
        out << dump({{"suite", rep.suite}, {"predicates", rep.predicates.size()}, {"outcomes", total},
                     {"fails", fails}, {"inconclusives", inconclusive}, {"report", v_report}});
      }
      return rep.has_failures() ? kExitVerifyFail : kExitOk;
    }

    if (*v_stress) {
      std::optional<double> alpha;
      if (!st_alpha.empty()) alpha = parse_double_list(st_alpha).at(0);
      const harness::StressResult r = harness::stress(st_id, st_iters, st_seed, alpha);
      nlohmann::json j = harness::stress_json(r);
      j["config"] = {{"id", st_id}, {"iterations", st_iters}, {"seed", st_seed}};
      out << dump(j);
      return r.worst.status == harness::Status::fail ? kExitVerifyFail : kExitOk;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == Errc::QuadratureNotConverged ? kExitNoConvergence : kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error [ParseError]: " << e.what() << "\n";
    return kExitInvalid;
  }
  err << "error: no command given\n";
  return kExitInvalid;
}

}  // namespace qnrlab::cli
