#include "pqnehari/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pqnehari/config.hpp"
#include "pqnehari/report.hpp"

namespace pqnehari {

namespace {

namespace fs = std::filesystem;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig effective_config(const RunManifest& m) {
  RunConfig config = m.config_path.empty() ? RunConfig{} : load_config(m.config_path);
  for (const auto& o : m.overrides) apply_override(config, o);
  if (m.seed) config.solver.seed = *m.seed;
  config.solver.threads = m.threads;
  return config;
}

// Any rejection while validating and sampling the configuration is a
// configuration error.
Problem build_problem(const ProblemConfig& config, ProblemOptions options = {}) {
  try {
    return Problem(config, options);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("output directory '" + dir + "' is not writable");
  }
  return fs::path(dir);
}

Json header(const std::string& command, const RunConfig& config) {
  return Json{{"command", command},
              {"seed", config.solver.seed},
              {"effective_config", format_config(config)}};
}

int run_solve(const RunManifest&, const RunConfig& config, const fs::path& dir, std::ostream& out) {
  const Problem problem = build_problem(config.problem);
  const MultiStartResult result = multistart_ground_state(problem, config.solver);
  const SolveReport& best = result.best();
  Json report = header("solve", config);
  report["best"] = to_json(best);
  Json runs = Json::array();
  for (const auto& r : result.runs) runs.push_back(to_json(r));
  report["runs"] = std::move(runs);
  const fs::path json_path = dir / "solve.json";
  write_text(json_path, dump(report));
  if (!best.converged) {
    out << "solve did not converge (" << best.status << "); trace written to "
        << json_path.string() << "\n";
    return kExitFailure;
  }
  write_csv((dir / "u.csv").string(), best.state.u);
  write_csv((dir / "v.csv").string(), best.state.v);
  out << "energy " << format_real(best.energy_value) << " gradient_norm "
      << format_real(best.gradient_norm) << " mass_fraction_u " << format_real(best.mass_fraction_u)
      << "\n";
  return kExitOk;
}

GridField load_field(const std::string& path, const GridSpec& grid) {
  if (path.empty()) return GridField(grid);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file '" + path + "'");
  return read_csv(in, grid);
}

int run_project(const RunManifest& m, const RunConfig& config, const fs::path& dir,
                std::ostream& out) {
  const Problem problem = build_problem(config.problem);
  CoupledState state;
  if (m.u_path.empty() && m.v_path.empty()) {
    Rng rng(config.solver.seed);
    state = random_state(problem.grid(), rng, RandomStateKind::kSigned);
  } else {
    state = {load_field(m.u_path, problem.grid()), load_field(m.v_path, problem.grid())};
  }
  const Projection proj = project(state, problem);
  Json report = header("project", config);
  report["fibering"] = to_json(proj.report);
  report["energy"] = energy(proj.state, problem);
  report["nehari_residual"] = nehari_residual(proj.state, problem);
  write_text(dir / "project.json", dump(report));
  write_csv((dir / "u.csv").string(), proj.state.u);
  write_csv((dir / "v.csv").string(), proj.state.v);
  out << "t0 " << format_real(proj.report.t0) << "\n";
  return kExitOk;
}

int run_verify(const RunManifest& m, const RunConfig& config, const fs::path& dir,
               std::ostream& out) {
  // Rejects malformed configurations up front; an infeasible coupling
  // budget is reported by the battery instead.
  build_problem(config.problem,
                {.allow_infeasible_budget = true, .allow_hypothesis_violations = true});
  VerifyOptions options;
  options.seed = config.solver.seed;
  options.n_samples = config.verify_samples;
  options.solver = config.solver;
  options.perturbations = config.asymptotic;
  options.threads = m.threads;
  const VerificationReport result = run_all(config.problem, options);
  Json report = header("verify", config);
  report["report"] = to_json(result);
  write_text(dir / "verify.json", dump(report));
  for (const auto& c : result.checks) {
    out << c.name << ": " << to_string(c.verdict);
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  return result.any_failed() ? kExitFailure : kExitOk;
}

int run_compare(const RunManifest&, const RunConfig& config, const fs::path& dir,
                std::ostream& out) {
  const Problem problem = build_problem(config.problem);
  SolverOptions inner = config.solver;
  const ScalarReport sa = solve_scalar(Side::kA, problem, inner);
  const ScalarReport sb = solve_scalar(Side::kB, problem, inner);
  const MultiStartResult coupled = solve_coupled_with_insertions(problem, inner, sa, sb);
  const SemitrivialVerdict semitrivial =
      compare_semitrivial(coupled.best(), family_fingerprint(config.problem), sa, sb);
  const TestStateBound bound = semitrivial_test_state_bound(problem, sa.field, sb.field);

  ProblemConfig periodic = config.problem;
  periodic.a = periodic_part(periodic.a);
  periodic.b = periodic_part(periodic.b);
  periodic.lambda = periodic_part(periodic.lambda);
  const PeriodicComparison levels =
      compare_periodic_asymptotic(periodic, config.asymptotic, config.solver);

  Json comparisons;
  comparisons["semitrivial"] = Json{{"scalar_a", to_json(sa)},
                                    {"scalar_b", to_json(sb)},
                                    {"coupled", to_json(coupled.best())},
                                    {"verdict", to_json(semitrivial)},
                                    {"test_state_bound", to_json(bound)}};
  comparisons["periodic_asymptotic"] = to_json(levels);
  if (config.sweep.threshold_steps > 0) {
    comparisons["lambda_threshold"] =
        to_json(locate_lambda_threshold(config.problem, config.sweep.lambda_max,
                                        config.sweep.ball_radius, config.solver,
                                        config.sweep.threshold_steps));
  }
  Json report = header("compare", config);
  report["comparisons"] = std::move(comparisons);
  write_text(dir / "compare.json", dump(report));
  out << "semitrivial: " << semitrivial.verdict << "\n"
      << "periodic_asymptotic: " << (levels.passed() ? "pass" : "fail") << "\n";
  return levels.passed() ? kExitOk : kExitFailure;
}

int run_sweep(const RunManifest& m, const RunConfig& config, const fs::path& dir,
              std::ostream& out) {
  if (m.sweep_steps < 1) throw ConfigError("--steps must be at least 1");
  std::vector<double> values(static_cast<std::size_t>(m.sweep_steps));
  for (int k = 0; k < m.sweep_steps; ++k) {
    values[static_cast<std::size_t>(k)] =
        m.sweep_steps == 1 ? m.sweep_from
                           : m.sweep_from + (m.sweep_to - m.sweep_from) * k / (m.sweep_steps - 1);
  }
  build_problem(config.problem, {.allow_infeasible_budget = true});
  std::vector<LambdaSweepPoint> rows;
  if (m.sweep_param == "lambda0") {
    if (!(config.sweep.ball_radius > 0.0)) throw ConfigError("sweep.ball_radius must be positive");
    rows = sweep_lambda_floor(config.problem, values, config.sweep.ball_radius, config.solver);
  } else if (m.sweep_param == "delta") {
    rows = sweep_levels(config.problem, values, with_coupling_budget, config.solver);
  } else {
    throw ConfigError("--param must be lambda0 or delta, got '" + m.sweep_param + "'");
  }
  std::ostringstream csv;
  csv << m.sweep_param << ",coupled_level,min_scalar_level,verdict\n";
  for (const auto& r : rows) {
    csv << format_real(r.lambda0) << ',' << format_real(r.coupled_level) << ','
        << format_real(r.min_scalar_level) << ',' << r.verdict << '\n';
  }
  write_text(dir / "sweep.csv", csv.str());
  out << csv.str();
  return kExitOk;
}

}  // namespace

int run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = effective_config(m);
    const fs::path dir = prepare_out_dir(m.out_dir);
    write_text(dir / "effective.cfg", format_config(config));
    switch (m.command) {
      case Command::kSolve: return run_solve(m, config, dir, out);
      case Command::kProject: return run_project(m, config, dir, out);
      case Command::kVerify: return run_verify(m, config, dir, out);
      case Command::kCompare: return run_compare(m, config, dir, out);
      case Command::kSweep: return run_sweep(m, config, dir, out);
    }
    return kExitFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Ground states of coupled (p,q)-Laplacian systems on the Nehari manifold"};
  app.require_subcommand(1);
  RunManifest m;

  auto common = [&m](CLI::App* sub) {
    sub->add_option("--config", m.config_path, "INI config file (defaults when omitted)");
    sub->add_option("--out", m.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--set", m.overrides, "Override section.key=value (repeatable)");
    sub->add_option_function<std::uint64_t>("--seed", [&m](const std::uint64_t& s) { m.seed = s; },
                                            "Seed for random inits and samples");
    sub->add_option("--threads", m.threads, "Worker threads, 0 = all cores")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "Multi-start ground-state solve");
  CLI::App* proj = app.add_subcommand("project", "Project one state onto the Nehari manifold");
  CLI::App* verify = app.add_subcommand("verify", "Run the verification battery");
  CLI::App* compare = app.add_subcommand("compare", "Semitrivial and periodic level comparisons");
  CLI::App* sweep = app.add_subcommand("sweep", "Levels and verdicts over lambda0 or delta");
  for (CLI::App* sub : {solve, proj, verify, compare, sweep}) common(sub);
  proj->add_option("--u", m.u_path, "CSV dump of the u component");
  proj->add_option("--v", m.v_path, "CSV dump of the v component");
  sweep->add_option("--param", m.sweep_param, "lambda0 or delta")->capture_default_str();
  sweep->add_option("--from", m.sweep_from, "First value")->capture_default_str();
  sweep->add_option("--to", m.sweep_to, "Last value")->capture_default_str();
  sweep->add_option("--steps", m.sweep_steps, "Number of values")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (solve->parsed()) m.command = Command::kSolve;
  if (proj->parsed()) m.command = Command::kProject;
  if (verify->parsed()) m.command = Command::kVerify;
  if (compare->parsed()) m.command = Command::kCompare;
  if (sweep->parsed()) m.command = Command::kSweep;
  return run(m, std::cout, std::cerr);
}

}  // namespace pqnehari
