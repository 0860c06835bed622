#include "pqnehari/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "pqnehari/parallel.hpp"

namespace pqnehari {

namespace {

void put(std::ostringstream& out, const PotentialSpec& s) {
  out << static_cast<int>(s.family) << ' ' << s.base_level << ' ' << s.modulation_amplitude << ' '
      << s.decay.amplitude << ' ' << s.decay.rate << ' ' << static_cast<int>(s.decay.shape) << ' '
      << s.ball_floor << ' ' << s.ball_radius << ';';
}

void put(std::ostringstream& out, const NonlinearitySpec& s) {
  out << static_cast<int>(s.kind) << ' ' << s.gamma << ' ' << s.power << ' ' << s.table.size();
  for (const auto& [t, y] : s.table) out << ' ' << t << ' ' << y;
  out << ';';
}

std::string side_name(Side side) { return side == Side::kA ? "a" : "b"; }

}  // namespace

std::string family_fingerprint(const ProblemConfig& c) {
  std::ostringstream out;
  out << std::hexfloat;
  out << c.exponents.p << ' ' << c.exponents.q << ' ' << c.exponents.alpha << ' '
      << c.exponents.beta << ' ' << c.dimension_proxy << ';';
  out << c.grid.dimension << ' ' << c.grid.half_width << ' ' << c.grid.nodes_per_axis << ';';
  put(out, c.a);
  put(out, c.b);
  put(out, c.f);
  put(out, c.g);
  return out.str();
}

ScalarReport solve_scalar(Side side, const Problem& problem, const SolverOptions& options,
                          const std::vector<GridField>& extra_inits) {
  SolverOptions opts = options;
  opts.pin = side == Side::kA ? PinnedComponent::kV : PinnedComponent::kU;
  std::vector<CoupledState> inits;
  for (const auto& field : extra_inits) {
    if (field.is_zero()) throw PreconditionError("scalar solve needs nonzero inits");
    const GridField zero(problem.grid());
    inits.push_back(side == Side::kA ? CoupledState{field, zero} : CoupledState{zero, field});
  }
  const MultiStartResult result = multistart_ground_state(problem, opts, inits);
  const SolveReport& best = result.best();
  if (best.state.u.size() == 0) {
    throw NumericError("scalar " + side_name(side) + "-side solve failed: " + best.status);
  }
  ScalarReport out;
  out.side = side;
  out.field = side == Side::kA ? best.state.u : best.state.v;
  out.level = best.energy_value;
  out.residual = best.nehari_residual;
  out.gradient_norm = best.gradient_norm;
  out.converged = best.converged;
  out.fingerprint = family_fingerprint(problem.config());
  return out;
}

MultiStartResult solve_coupled_with_insertions(const Problem& problem,
                                               const SolverOptions& options,
                                               const ScalarReport& sa, const ScalarReport& sb) {
  const GridField zero(problem.grid());
  std::vector<CoupledState> inits{{sa.field, zero}, {zero, sb.field}, {sa.field, sb.field}};
  return multistart_ground_state(problem, options, inits);
}

SemitrivialVerdict compare_semitrivial(const SolveReport& coupled,
                                       const std::string& coupled_fingerprint,
                                       const ScalarReport& sa, const ScalarReport& sb,
                                       double slack) {
  if (sa.fingerprint != coupled_fingerprint || sb.fingerprint != coupled_fingerprint) {
    throw ComparisonError("scalar and coupled reports come from different configurations");
  }
  if (sa.side != Side::kA || sb.side != Side::kB) {
    throw ComparisonError("scalar reports must be the a-side and the b-side solves");
  }
  SemitrivialVerdict v;
  v.coupled_level = coupled.energy_value;
  v.scalar_level_a = sa.level;
  v.scalar_level_b = sb.level;
  const double min_level = std::min(sa.level, sb.level);
  v.gap = min_level - coupled.energy_value;
  v.mass_fraction_u = coupled.mass_fraction_u;
  v.mass_fraction_v = coupled.mass_fraction_v;
  const bool below = coupled.energy_value < min_level - slack;
  const bool u_alive = coupled.mass_fraction_u >= kMassFractionThreshold;
  const bool v_alive = coupled.mass_fraction_v >= kMassFractionThreshold;
  v.fully_nontrivial = below && u_alive && v_alive;
  v.verdict = v.fully_nontrivial ? "fully-nontrivial" : "semitrivial-risk";
  if (!below) {
    v.binding = std::string("coupled level not below the ") +
                (sa.level <= sb.level ? "a-side" : "b-side") + " scalar level";
  } else if (!u_alive) {
    v.binding = "mass fraction of u below 1e-6";
  } else if (!v_alive) {
    v.binding = "mass fraction of v below 1e-6";
  }
  return v;
}

TestStateBound semitrivial_test_state_bound(const Problem& problem, const GridField& ua,
                                            const GridField& vb) {
  const auto& e = problem.exponents();
  const CoupledState s{ua, vb};
  const Projection proj = project(s, problem);
  TestStateBound out;
  out.t0 = proj.report.t0;
  out.energy = energy(proj.state, problem);
  const EnergyTerms terms = assemble_terms(s, problem);
  const GridSpec& grid = problem.grid();
  const double radius = problem.config().lambda.ball_radius;
  std::vector<double> ball(grid.node_count(), 0.0);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto x = grid.coordinates(i);
    double r2 = 0.0;
    for (int k = 0; k < grid.dimension; ++k) r2 += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
    if (r2 <= radius * radius) {
      ball[i] = std::pow(std::abs(ua[i]), e.alpha) * std::pow(std::abs(vb[i]), e.beta);
    }
  }
  const double lambda0 = problem.config().lambda.ball_floor;
  out.bound = out.t0 * (terms.norm_u / e.p + terms.norm_v / e.q - lambda0 * integrate(grid, ball));
  out.holds = out.energy <= out.bound + 1e-12 * std::max(1.0, std::abs(out.bound));
  return out;
}

PeriodicComparison compare_periodic_asymptotic(
    const ProblemConfig& periodic, const std::array<DecayPerturbation, 3>& perturbations,
    const SolverOptions& options) {
  constexpr double kStrictSlack = 1e-8;
  constexpr double kDirectSlack = 1e-6;
  const PotentialTriple triple = make_asymptotic_pair(
      {periodic.a, periodic.b, periodic.lambda}, perturbations, periodic.grid);
  ProblemConfig perturbed = periodic;
  perturbed.a = triple.a;
  perturbed.b = triple.b;
  perturbed.lambda = triple.lambda;

  const Problem periodic_problem(periodic);
  const Problem perturbed_problem(perturbed);
  const MultiStartResult base = multistart_ground_state(periodic_problem, options);
  const SolveReport& best = base.best();
  if (!best.converged) throw NumericError("periodic solve did not converge: " + best.status);

  PeriodicComparison out;
  out.periodic_level = best.energy_value;
  const AbsolutizeResult nonneg = absolutize_project(best.state, periodic_problem);
  const Projection moved = project(nonneg.projection.state, perturbed_problem);
  out.upper_bound = energy(moved.state, perturbed_problem);
  const MultiStartResult direct =
      multistart_ground_state(perturbed_problem, options, {moved.state});
  out.asymptotic_level = direct.best().energy_value;
  out.strict = out.upper_bound < out.periodic_level - kStrictSlack;
  out.direct_below = out.asymptotic_level <= out.upper_bound + kDirectSlack;
  return out;
}

ProblemConfig with_lambda_floor(const ProblemConfig& config, double lambda0, double radius) {
  ProblemConfig out = config;
  out.lambda.ball_floor = lambda0;
  out.lambda.ball_radius = radius;
  return out;
}

ProblemConfig with_coupling_budget(const ProblemConfig& config, double delta) {
  ProblemConfig out = config;
  const GridSpec& grid = config.grid;
  const std::vector<double> a = sample_potential(config.a, grid);
  const std::vector<double> b = sample_potential(config.b, grid);
  const std::vector<double> lambda = sample_potential(config.lambda, grid);
  const Exponents& e = config.exponents;
  double current = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (grid.is_boundary(i) || lambda[i] == 0.0) continue;
    current = std::max(current, std::abs(lambda[i]) /
                                    (std::pow(a[i], e.alpha / e.p) * std::pow(b[i], e.beta / e.q)));
  }
  if (!(current > 0.0)) throw ConfigError("cannot rescale an identically zero coupling field");
  const double factor = delta / current;
  out.lambda.base_level *= factor;
  out.lambda.modulation_amplitude *= factor;
  out.lambda.decay.amplitude *= factor;
  out.lambda.ball_floor *= factor;
  return out;
}

std::vector<LambdaSweepPoint> sweep_levels(const ProblemConfig& config,
                                           const std::vector<double>& values,
                                           const ConfigTransform& transform,
                                           const SolverOptions& options) {
  SolverOptions inner = options;
  inner.threads = 1;
  const Problem base(config, {.allow_infeasible_budget = true});
  const ScalarReport sa = solve_scalar(Side::kA, base, inner);
  const ScalarReport sb = solve_scalar(Side::kB, base, inner);
  std::vector<LambdaSweepPoint> out(values.size());
  parallel_for(values.size(), options.threads, [&](std::size_t i) {
    LambdaSweepPoint& point = out[i];
    point.lambda0 = values[i];
    point.min_scalar_level = std::min(sa.level, sb.level);
    const ProblemConfig cfg = transform(config, values[i]);
    std::optional<Problem> problem;
    try {
      problem.emplace(cfg);
    } catch (const ConfigError&) {
      point.feasible = false;
      point.verdict = "infeasible";
      point.coupled_level = std::nan("");
      return;
    }
    const MultiStartResult coupled = solve_coupled_with_insertions(*problem, inner, sa, sb);
    const SemitrivialVerdict v =
        compare_semitrivial(coupled.best(), family_fingerprint(cfg), sa, sb);
    point.coupled_level = v.coupled_level;
    point.verdict = v.verdict;
  });
  return out;
}

std::vector<LambdaSweepPoint> sweep_lambda_floor(const ProblemConfig& config,
                                                 const std::vector<double>& values,
                                                 double radius, const SolverOptions& options) {
  return sweep_levels(
      config, values,
      [radius](const ProblemConfig& c, double lambda0) { return with_lambda_floor(c, lambda0, radius); },
      options);
}

LambdaThreshold locate_lambda_threshold(const ProblemConfig& config, double lambda_max,
                                        double radius, const SolverOptions& options,
                                        int bisection_steps) {
  SolverOptions inner = options;
  inner.threads = 1;
  const Problem base(config, {.allow_infeasible_budget = true});
  const ScalarReport sa = solve_scalar(Side::kA, base, inner);
  const ScalarReport sb = solve_scalar(Side::kB, base, inner);
  auto nontrivial = [&](double lambda0) {
    const ProblemConfig cfg = with_lambda_floor(config, lambda0, radius);
    const Problem problem(cfg);
    const MultiStartResult coupled = solve_coupled_with_insertions(problem, inner, sa, sb);
    return compare_semitrivial(coupled.best(), family_fingerprint(cfg), sa, sb).fully_nontrivial;
  };
  LambdaThreshold out;
  out.lower = 0.0;
  out.upper = lambda_max;
  if (nontrivial(0.0) || !nontrivial(lambda_max)) return out;
  out.bracketed = true;
  for (int k = 0; k < bisection_steps; ++k) {
    const double mid = 0.5 * (out.lower + out.upper);
    if (nontrivial(mid)) {
      out.upper = mid;
    } else {
      out.lower = mid;
    }
  }
  return out;
}

}  // namespace pqnehari
