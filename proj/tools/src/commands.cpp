#include "fracsing_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#include "fracsing/classify.hpp"
#include "fracsing/compose.hpp"
#include "fracsing/errors.hpp"
#include "fracsing/green_operator.hpp"
#include "fracsing/halpha_form.hpp"
#include "fracsing/mountain_pass.hpp"
#include "fracsing/operator_io.hpp"
#include "fracsing/picard.hpp"
#include "fracsing/spectral.hpp"
#include "fracsing/stability.hpp"
#include "fracsing_cli/io.hpp"

namespace fracsing::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) {
  if (std::isfinite(v)) {
    return v;
  }
  return format_double(v);
}

/// Grid, operator and the measured constants every command reports.
struct Workspace {
  RunConfig cfg;
  std::string command;
  GridPtr grid;
  std::optional<GreenOperator> op;
  std::optional<std::filesystem::path> cache;
  double c2 = kNaN;
  double lambda1 = kNaN;

  Workspace(const RunConfig& config, std::string name, std::ostream& log)
      : cfg(config), command(std::move(name)) {
    cfg.validate();
    grid = make_shared_grid(cfg.grid, cfg.params.dim);
    cache = cache_directory_from_env();
    AssemblyOptions opts;
    opts.threads = cfg.threads;
    log << "[" << command << "] assembling " << grid->size() << "-node operator (N="
        << cfg.params.dim << ", alpha=" << cfg.params.alpha << ")"
        << (cache ? " with cache " + cache->string() : std::string()) << "\n";
    op.emplace(cached_assemble(grid, cfg.params, opts, cache));
    if (cfg.params.subcritical()) {
      c2 = measure_c2(*op, cfg.params.p);
    }
    lambda1 = first_eigenpair(*op, cfg.tolerances.eig_tol).lambda1;
  }

  [[nodiscard]] std::filesystem::path out(const std::string& file) const {
    return cfg.output.directory / file;
  }

  [[nodiscard]] json provenance() const {
    return {
        {"version", FRACSING_VERSION},
        {"command", command},
        {"config_hash", config_hash(cfg)},
        {"config", to_json(cfg)},
        {"grid", {{"n_nodes", grid->size()}, {"grading", cfg.grid.grading},
                  {"boundary_grading", cfg.grid.effective_boundary_grading()},
                  {"r_min", grid->nodes().front()}, {"r_max", grid->nodes().back()}}},
        {"c2", number(c2)},
        {"lambda1", number(lambda1)},
        {"operator_cache", cache ? json(cache->string()) : json(nullptr)},
    };
  }

  [[nodiscard]] json csv_header() const {
    return {{"format", "fracsing-csv"}, {"version", FRACSING_VERSION}, {"command", command},
            {"config_hash", config_hash(cfg)}};
  }

  [[nodiscard]] SolveOptions solve_options() const {
    SolveOptions o;
    o.tol = cfg.tolerances.picard_tol;
    o.max_iter = cfg.tolerances.max_iter;
    return o;
  }

  void write_table(const std::string& file, const Table& table, json extra = json::object()) const {
    if (!cfg.wants("csv")) {
      return;
    }
    json header = csv_header();
    header.merge_patch(extra);
    write_csv(out(file), header, table);
  }

  void write_report(const std::string& file, json doc) const {
    if (!cfg.wants("json")) {
      return;
    }
    doc["provenance"] = provenance();
    write_json(out(file), doc);
  }

  void write_plot(const std::string& name, const std::vector<std::string>& series,
                  const std::vector<std::vector<double>>& xs,
                  const std::vector<std::vector<double>>& ys) const {
    if (!cfg.emit_plots) {
      return;
    }
    json header = csv_header();
    header["series"] = series;
    write_csv(out("plot_" + name + ".csv"), header, long_format(series, xs, ys));
  }
};

json solve_json(const SolveReport& rep) {
  return {
      {"status", to_string(rep.status)},
      {"iterations", rep.iterations},
      {"sup_residual", number(rep.sup_residual)},
      {"fixed_point_residual", number(rep.fixed_point_residual)},
      {"monotone", rep.monotone},
      {"barrier_certified", rep.barrier_certified},
      {"singular_coeff", rep.profile.singular_coeff()},
      {"note", rep.note},
  };
}

json classification_json(const ClassificationReport& c) {
  return {
      {"k_estimate", number(c.k_estimate)}, {"k_spread", number(c.k_spread)},
      {"exponent_fit", number(c.exponent_fit)}, {"limit_ratio", number(c.limit_ratio)},
      {"verdict", to_string(c.verdict)}, {"supercritical", c.supercritical},
      {"fit_window", {c.fit_r_lo, c.fit_r_hi}},
  };
}

json bracket_json(const KStarBracket& br) {
  json probes = json::array();
  for (const auto& p : br.probes) {
    probes.push_back({{"k", p.k}, {"status", to_string(p.status)}, {"iterations", p.iterations}});
  }
  return {{"k_lo", br.k_lo}, {"k_hi", br.k_hi}, {"width", br.k_hi - br.k_lo},
          {"k_p", br.k_p}, {"c2", br.c2}, {"probes", probes}};
}

std::vector<double> column(const std::span<const double> s) { return {s.begin(), s.end()}; }

double profile_norm(const RadialFunction& u, double beta) {
  return u.grid()->weighted_sup(u.total(), beta);
}

bool reject_supercritical(const Workspace& ws, std::ostream& log, const std::string& what) {
  if (ws.cfg.params.subcritical()) {
    return false;
  }
  log << "[" << ws.command << "] nonexistence: p = " << ws.cfg.params.p
      << " >= N/(N-2 alpha) = " << ws.cfg.params.critical_exponent()
      << "; no solution with a Dirac source exists, so " << what << "\n";
  ws.write_report(ws.command + ".json",
                  {{"status", "Nonexistence"},
                   {"note", "supercritical regime p >= N/(N-2 alpha): only k = 0 is admissible"}});
  return true;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  Workspace ws(cfg, "solve", log);
  const auto& params = ws.cfg.params;
  SolveReport rep;
  json barrier = json::object();
  if (params.subcritical() && params.k > 0.0) {
    const auto cert = barrier_certificate(params, *ws.op, ws.c2, ws.solve_options());
    barrier = {{"t_p", cert.t_star}, {"k_p", cert.k_p}, {"condition_lhs", cert.condition_lhs},
               {"condition_rhs", cert.condition_rhs}, {"certified", cert.certified},
               {"max_excess", number(cert.max_excess)}};
    rep = cert.condition_lhs <= cert.condition_rhs ? cert.solve
                                                   : iterate_minimal(params, *ws.op, ws.solve_options());
  } else {
    rep = iterate_minimal(params, *ws.op, ws.solve_options());
  }
  json report = solve_json(rep);
  report["barrier"] = barrier;
  log << "[solve] " << to_string(rep.status) << " after " << rep.iterations
      << " iterations, residual " << rep.sup_residual << "\n";
  if (!rep.note.empty()) {
    log << "[solve] " << rep.note << "\n";
  }
  if (rep.status != SolveStatus::Converged) {
    ws.write_report("report.json", report);
    return kExitNonexistence;
  }

  ws.write_table("solution.csv", profile_table(rep.profile),
                 {{"singular_coeff", format_double(rep.profile.singular_coeff())},
                  {"singular_exponent", format_double(rep.profile.singular_exponent())}});
  json classification;
  try {
    classification = classification_json(classify(rep.profile, params, *ws.op));
  } catch (const std::exception& e) {
    classification = {{"error", e.what()}};
  }
  report["classification"] = classification;
  ws.write_report("report.json", report);
  ws.write_report("classification.json", classification);

  const auto t = profile_table(rep.profile);
  std::vector<double> r, total, smooth;
  for (const auto& row : t.rows) {
    r.push_back(row[0]);
    total.push_back(row[1]);
    smooth.push_back(row[2]);
  }
  ws.write_plot("solution", {"u_total", "u_smooth"}, {r, r}, {total, smooth});
  return kExitSuccess;
}

int cmd_kstar(const RunConfig& cfg, std::ostream& log) {
  Workspace ws(cfg, "kstar", log);
  if (reject_supercritical(ws, log, "k* = 0")) {
    return kExitNonexistence;
  }
  const auto& params = ws.cfg.params;
  const auto br = find_kstar(params, *ws.op, ws.cfg.tolerances.bracket_tol, ws.solve_options());
  const auto eig = first_eigenpair(*ws.op, ws.cfg.tolerances.eig_tol);
  const double c_upper = br.k_hi * std::pow(eig.lambda1, 1.0 / (params.p - 1.0));
  const auto bound = extremal_bound(br.profile_lo, eig, params.p);
  json report = bracket_json(br);
  report["lambda1"] = eig.lambda1;
  report["upper_bound_constant"] = c_upper;
  report["extremal_bound"] = {{"lhs", bound.lhs}, {"rhs", bound.rhs}, {"holds", bound.holds()}};
  log << "[kstar] k* in [" << br.k_lo << ", " << br.k_hi << "], k_p = " << br.k_p << "\n";
  ws.write_report("kstar.json", report);
  ws.write_table("extremal.csv", profile_table(br.profile_lo),
                 {{"k", format_double(br.k_lo)},
                  {"singular_coeff", format_double(br.profile_lo.singular_coeff())},
                  {"singular_exponent", format_double(br.profile_lo.singular_exponent())}});
  return kExitSuccess;
}

int cmd_stability(const RunConfig& cfg, std::ostream& log) {
  Workspace ws(cfg, "stability", log);
  if (reject_supercritical(ws, log, "there is no minimal branch to analyse")) {
    return kExitNonexistence;
  }
  const auto& params = ws.cfg.params;
  const auto br = find_kstar(params, *ws.op, ws.cfg.tolerances.bracket_tol, ws.solve_options());
  const auto scan = stability_gap_scan(params, *ws.op, br, ws.cfg.scan_samples, ws.solve_options());
  Table t;
  t.columns = {"k", "sigma1", "gap", "distance"};
  std::vector<double> ks, sig;
  for (const auto& s : scan.samples) {
    t.rows.push_back({s.k, s.sigma1, s.gap, s.distance});
    ks.push_back(s.k);
    sig.push_back(s.sigma1);
  }
  ws.write_table("stability.csv", t);
  json report = {{"bracket", bracket_json(br)}, {"slope", scan.slope},
                 {"nonincreasing", scan.nonincreasing}};
  if (params.k > 0.0) {
    auto rep = iterate_minimal(params, *ws.op, ws.solve_options());
    if (rep.status == SolveStatus::Converged) {
      const auto st = sigma1(rep.profile, params, *ws.op);
      report["at_k"] = {{"k", params.k}, {"sigma1", st.sigma1}, {"gap", st.gap},
                        {"stable", st.stable()}};
    } else {
      report["at_k"] = {{"k", params.k}, {"status", to_string(rep.status)}};
    }
  }
  ws.write_report("stability.json", report);
  ws.write_plot("stability", {"sigma1"}, {ks}, {sig});
  log << "[stability] " << scan.samples.size() << " samples, gap slope " << scan.slope << "\n";
  return kExitSuccess;
}

int cmd_mountain_pass(const RunConfig& cfg, std::ostream& log) {
  Workspace ws(cfg, "mountain-pass", log);
  if (reject_supercritical(ws, log, "no second solution exists")) {
    return kExitNonexistence;
  }
  const auto& params = ws.cfg.params;
  if (!(params.k > 0.0)) {
    throw InvalidArgument("mountain-pass needs k > 0 (set params.k)");
  }
  const auto br = find_kstar(params, *ws.op, ws.cfg.tolerances.bracket_tol, ws.solve_options());
  if (params.k >= br.k_lo) {
    log << "[mountain-pass] k = " << params.k << " is not below k_lo = " << br.k_lo << "\n";
    ws.write_report("mountain_pass.json",
                    {{"status", "InvalidRegime"}, {"bracket", bracket_json(br)}});
    return kExitNonexistence;
  }
  auto base = iterate_minimal(params, *ws.op, ws.solve_options());
  if (base.status != SolveStatus::Converged) {
    log << "[mountain-pass] minimal solution did not converge\n";
    return kExitNonexistence;
  }
  const auto form = build_form(*ws.op);
  MountainPassOptions mp;
  mp.segments = ws.cfg.segments;
  mp.seed = ws.cfg.seed;

  json report = {{"bracket", bracket_json(br)}, {"minimal", solve_json(base)}};
  std::optional<MountainPassResult> results[2];
  const SecondSolutionMethod methods[2] = {SecondSolutionMethod::MountainPassAlgorithm,
                                           SecondSolutionMethod::DeflatedNewton};
  Table trace;
  trace.columns = {"method", "iteration", "energy", "residual"};
  for (int m = 0; m < 2; ++m) {
    const std::string name = to_string(methods[m]);
    try {
      results[m] = find_second_solution(params, *ws.op, form, base.profile, methods[m], mp);
      const auto& r = *results[m];
      const auto weak = verify_weak_identity(r.second_solution, params, *ws.op);
      report[name] = {{"status", "Found"},
                      {"iterations", r.iterations},
                      {"energy", r.energy},
                      {"beta", r.level_lower_bound},
                      {"sigma0", r.level.sigma0},
                      {"fixed_point_residual", r.fixed_point_residual},
                      {"weak_identity_relative_residual", weak.relative_residual}};
      for (std::size_t i = 0; i < r.residual_trace.size(); ++i) {
        const double e = i < r.energy_trace.size() ? r.energy_trace[i] : kNaN;
        trace.rows.push_back({static_cast<double>(m), static_cast<double>(i + 1), e,
                              r.residual_trace[i]});
      }
    } catch (const SecondSolutionNotFound& e) {
      report[name] = {{"status", "NotFound"}, {"reason", e.what()}, {"trace", e.trace()}};
    }
  }
  if (!results[0] && !results[1]) {
    ws.write_report("mountain_pass.json", report);
    log << "[mountain-pass] no second solution found\n";
    return kExitNonexistence;
  }
  if (results[0] && results[1]) {
    double diff = 0.0;
    for (int i = 0; i < ws.op->size(); ++i) {
      diff = std::max(diff, std::abs(results[0]->v.total(i) - results[1]->v.total(i)));
    }
    report["method_agreement"] = diff;
  }
  const auto& best = results[0] ? *results[0] : *results[1];
  Table sol;
  sol.columns = {"r", "u_min", "w", "v_mpa", "v_newton"};
  for (int i = 0; i < ws.op->size(); ++i) {
    sol.rows.push_back({ws.grid->node(i), base.profile.total(i), best.second_solution.total(i),
                        results[0] ? results[0]->v.total(i) : kNaN,
                        results[1] ? results[1]->v.total(i) : kNaN});
  }
  ws.write_table("solutions.csv", sol);
  json th = {{"methods", {to_string(methods[0]), to_string(methods[1])}}};
  ws.write_table("energy_trace.csv", trace, th);
  ws.write_report("mountain_pass.json", report);
  ws.write_plot("solutions", {"u_min", "w"},
                {column(ws.grid->nodes()), column(ws.grid->nodes())},
                {base.profile.total(), best.second_solution.total()});
  log << "[mountain-pass] E(v) = " << best.energy << ", beta = " << best.level_lower_bound << "\n";
  return kExitSuccess;
}

int cmd_classify(const RunConfig& cfg, std::ostream& log) {
  if (cfg.profile.empty()) {
    throw InvalidArgument("classify needs a profile CSV (--profile PATH or profile=PATH)");
  }
  Workspace ws(cfg, "classify", log);
  const auto u = load_profile_csv(ws.cfg.profile, ws.grid);
  const auto& params = ws.cfg.params;
  const auto rep = classify(u, params, *ws.op);
  json report = classification_json(rep);
  report["profile"] = ws.cfg.profile.string();
  const auto integ = lp_integrability(u, params.p);
  report["lp_integrable"] = integ.integrable;
  report["lp_quadrature"] = number(integ.quadrature);
  ws.write_report("classification.json", report);
  log << "[classify] verdict " << to_string(rep.verdict) << ", k ~ " << rep.k_estimate << "\n";
  return kExitSuccess;
}

int cmd_eigen(const RunConfig& cfg, std::ostream& log) {
  Workspace ws(cfg, "eigen", log);
  const auto eig = first_eigenpair(*ws.op, ws.cfg.tolerances.eig_tol);
  const double dense = 1.0 / dense_dominant_eigenpair(ws.op->symmetric_matrix()).first;
  ws.write_report("eigen.json", {{"lambda1", eig.lambda1},
                                 {"mu1", eig.mu1},
                                 {"iterations", eig.iterations},
                                 {"lambda1_dense", dense},
                                 {"relative_difference", std::abs(eig.lambda1 / dense - 1.0)}});
  Table t;
  t.columns = {"r", "phi1"};
  for (int i = 0; i < ws.op->size(); ++i) {
    t.rows.push_back({ws.grid->node(i), eig.phi1.values()[static_cast<std::size_t>(i)]});
  }
  ws.write_table("eigenfunction.csv", t);
  ws.write_plot("eigenfunction", {"phi1"}, {column(ws.grid->nodes())},
                {column(eig.phi1.values())});
  log << "[eigen] lambda1 = " << eig.lambda1 << "\n";
  return kExitSuccess;
}

int cmd_bifurcation(const RunConfig& cfg, std::ostream& log) {
  Workspace ws(cfg, "bifurcation", log);
  if (reject_supercritical(ws, log, "the bifurcation diagram is empty")) {
    return kExitNonexistence;
  }
  const auto& params = ws.cfg.params;
  const double beta = params.singular_exponent();
  const auto br = find_kstar(params, *ws.op, ws.cfg.tolerances.bracket_tol, ws.solve_options());
  const auto form = build_form(*ws.op);
  MountainPassOptions mp;
  mp.segments = ws.cfg.segments;
  mp.seed = ws.cfg.seed;

  Table t;
  t.columns = {"k", "u_norm", "sigma1", "w_norm", "energy", "beta"};
  std::vector<double> ks, un, wn;
  RadialFunction warm;
  const int n = ws.cfg.scan_samples;
  for (int j = 0; j < n; ++j) {
    const double k = br.k_lo * (j + 1.0) / n;
    auto o = ws.solve_options();
    o.warm_start = j > 0 ? &warm : nullptr;
    const auto pk = params.with_k(k);
    auto rep = iterate_minimal(pk, *ws.op, o);
    if (rep.status != SolveStatus::Converged) {
      throw NumericalError("minimal iteration failed inside the bracket at k = " + std::to_string(k));
    }
    const auto st = sigma1(rep.profile, pk, *ws.op);
    double w_norm = kNaN;
    double level = kNaN;
    double lower = kNaN;
    if (j + 1 < n) {
      try {
        const auto mpr = find_second_solution(pk, *ws.op, form, rep.profile,
                                              SecondSolutionMethod::MountainPassAlgorithm, mp);
        w_norm = profile_norm(mpr.second_solution, beta);
        level = mpr.energy;
        lower = mpr.level_lower_bound;
      } catch (const std::exception& e) {
        log << "[bifurcation] no second solution at k = " << k << ": " << e.what() << "\n";
      }
    } else {
      // At k_lo the two branches meet: the upper branch coincides with u_k.
      w_norm = profile_norm(rep.profile, beta);
      level = 0.0;
      lower = 0.0;
    }
    const double u_norm = profile_norm(rep.profile, beta);
    t.rows.push_back({k, u_norm, st.sigma1, w_norm, level, lower});
    ks.push_back(k);
    un.push_back(u_norm);
    wn.push_back(w_norm);
    warm = std::move(rep.profile);
  }
  ws.write_table("bifurcation.csv", t);
  ws.write_report("bifurcation.json", {{"bracket", bracket_json(br)}, {"samples", n}});
  ws.write_plot("bifurcation", {"u_k", "w_k"}, {ks, ks}, {un, wn});
  log << "[bifurcation] " << n << " samples up to k_lo = " << br.k_lo << "\n";
  return kExitSuccess;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"solve", "kstar", "stability", "mountain-pass",
                                                 "classify", "eigen", "bifurcation"};
  return names;
}

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  try {
    if (command == "solve") return cmd_solve(cfg, log);
    if (command == "kstar") return cmd_kstar(cfg, log);
    if (command == "stability") return cmd_stability(cfg, log);
    if (command == "mountain-pass") return cmd_mountain_pass(cfg, log);
    if (command == "classify") return cmd_classify(cfg, log);
    if (command == "eigen") return cmd_eigen(cfg, log);
    if (command == "bifurcation") return cmd_bifurcation(cfg, log);
    log << "unknown command '" << command << "'\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidRegime& e) {
    log << "nonexistence: " << e.what() << "\n";
    return kExitNonexistence;
  } catch (const NumericalError& e) {
    log << "non-convergence: " << e.what() << "\n";
    return kExitNonexistence;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "I/O error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fracsing::cli
