#include "pqnehari/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "pqnehari/parallel.hpp"
#include "pqnehari/scalar.hpp"

namespace pqnehari {

namespace {

constexpr std::array<std::string_view, 11> kRegistry{
    "hypotheses_f",        "hypotheses_g",          "ar_non_requirement",
    "young_margin",        "gradient_consistency",  "fibering_uniqueness",
    "nehari_floor",        "nonnegative_ground_state", "positivity",
    "semitrivial_exclusion", "level_comparison"};

constexpr double kGradientTolerance = 1e-6;
constexpr double kPositivityTolerance = 1e-10;
constexpr int kAuditProbes = 121;

// Inputs shared by several checks, computed once on first use.
class Context {
 public:
  Context(const ProblemConfig& config, const VerifyOptions& options)
      : config_(config), options_(options) {
    solver_ = options.solver;
    solver_.seed = mix_seed(options.seed, 0xC0FFEE);
    solver_.threads = 1;
  }

  const ProblemConfig& config() const { return config_; }
  const VerifyOptions& options() const { return options_; }
  const SolverOptions& solver() const { return solver_; }

  std::uint64_t check_seed(std::size_t index) const { return mix_seed(options_.seed, index); }

  const Problem& problem() const {
    std::call_once(problem_once_, [&] {
      problem_.emplace(config_, ProblemOptions{.allow_infeasible_budget = true,
                                               .allow_hypothesis_violations = true});
    });
    return *problem_;
  }

  struct Scalars {
    ScalarReport a;
    ScalarReport b;
  };

  const Scalars& scalars() const {
    once(scalars_once_, scalars_error_, [&] {
      scalars_.emplace(Scalars{solve_scalar(Side::kA, problem(), solver_),
                               solve_scalar(Side::kB, problem(), solver_)});
    });
    return *scalars_;
  }

  // Coupled multi-start seeded with the scalar minimizers.
  const MultiStartResult& ground() const {
    once(ground_once_, ground_error_, [&] {
      const Scalars& s = scalars();
      ground_.emplace(solve_coupled_with_insertions(problem(), solver_, s.a, s.b));
    });
    return *ground_;
  }

  const AbsolutizeResult& nonnegative() const {
    once(nonneg_once_, nonneg_error_, [&] {
      const SolveReport& best = ground().best();
      if (!best.converged) throw NumericError("coupled ground state did not converge: " + best.status);
      nonneg_.emplace(absolutize_project(best.state, problem()));
    });
    return *nonneg_;
  }

 private:
  // call_once that replays the first failure to every later caller.
  template <class Body>
  static void once(std::once_flag& flag, std::exception_ptr& error, Body body) {
    std::call_once(flag, [&] {
      try {
        body();
      } catch (...) {
        error = std::current_exception();
      }
    });
    if (error) std::rethrow_exception(error);
  }

  const ProblemConfig& config_;
  const VerifyOptions& options_;
  SolverOptions solver_;
  mutable std::once_flag problem_once_, scalars_once_, ground_once_, nonneg_once_;
  mutable std::optional<Problem> problem_;
  mutable std::optional<Scalars> scalars_;
  mutable std::optional<MultiStartResult> ground_;
  mutable std::optional<AbsolutizeResult> nonneg_;
  mutable std::exception_ptr scalars_error_, ground_error_, nonneg_error_;
};

using CheckBody = std::function<void(const Context&, std::size_t, CheckResult&)>;

void finish(CheckResult& r, bool pass, double margin) {
  r.verdict = pass ? CheckVerdict::kPass : CheckVerdict::kFail;
  r.margin = margin;
}

void hypotheses(const NonlinearitySpec& base, double exponent, double dimension, CheckResult& r) {
  NonlinearitySpec spec = base;
  spec.exponent = exponent;
  spec.dimension = dimension;
  const std::vector<double> probes = log_spaced(1e-3, 1e3, kAuditProbes);
  const ConditionReport audit = audit_conditions(spec, probes);
  double margin = std::numeric_limits<double>::infinity();
  std::string failed;
  for (const auto& v : audit.verdicts) {
    margin = std::min(margin, v.worst_margin);
    if (!v.pass) failed += (failed.empty() ? "" : ", ") + v.name;
  }
  r.samples = kAuditProbes;
  r.detail = failed.empty() ? "" : "failed: " + failed;
  r.metrics.emplace_back("sup_log_derivative", audit.sup_log_derivative);
  finish(r, audit.all_pass(), margin);
}

void ar_exhibit(const NonlinearitySpec& base, double exponent, double dimension,
                const std::string& label, CheckResult& r, double& margin, bool& pass) {
  NonlinearitySpec spec = base;
  spec.exponent = exponent;
  spec.dimension = dimension;
  const std::array<double, 3> thetas{exponent + 0.1, exponent + 1.0, exponent + 3.0};
  for (const ArExhibit& ex : exhibit_ar_failure(spec, thetas)) {
    ++r.samples;
    pass = pass && ex.found;
    margin = std::min(margin, ex.found ? ex.excess : 0.0);
    std::ostringstream key;
    key << label << "_theta_" << ex.theta << "_t";
    r.metrics.emplace_back(key.str(), ex.found ? ex.t : std::nan(""));
  }
}

const std::map<std::string_view, CheckBody>& implementations() {
  static const std::map<std::string_view, CheckBody> table{
      {"hypotheses_f",
       [](const Context& c, std::size_t, CheckResult& r) {
         const auto& cfg = c.config();
         hypotheses(cfg.f, cfg.exponents.p, cfg.dimension_proxy, r);
       }},
      {"hypotheses_g",
       [](const Context& c, std::size_t, CheckResult& r) {
         const auto& cfg = c.config();
         hypotheses(cfg.g, cfg.exponents.q, cfg.dimension_proxy, r);
       }},
      {"ar_non_requirement",
       [](const Context& c, std::size_t, CheckResult& r) {
         const auto& cfg = c.config();
         if (cfg.f.kind != NonlinearityKind::kLogPower || cfg.g.kind != NonlinearityKind::kLogPower) {
           r.verdict = CheckVerdict::kSkipped;
           r.detail = "failure exhibit is defined for the log-power family only";
           return;
         }
         double margin = std::numeric_limits<double>::infinity();
         bool pass = true;
         ar_exhibit(cfg.f, cfg.exponents.p, cfg.dimension_proxy, "f", r, margin, pass);
         ar_exhibit(cfg.g, cfg.exponents.q, cfg.dimension_proxy, "g", r, margin, pass);
         if (!pass) r.detail = "some theta admits no violating t on the probe range";
         finish(r, pass, margin);
       }},
      {"young_margin",
       [](const Context& c, std::size_t index, CheckResult& r) {
         const Problem& problem = c.problem();
         const auto& e = problem.exponents();
         const CouplingBudget& budget = problem.budget();
         r.metrics.emplace_back("delta", budget.delta);
         r.metrics.emplace_back("budget_margin", budget.margin);
         if (!(budget.margin > 0.0)) {
           r.detail = "coupling margin 1/q - delta max(alpha/p, beta/q) is not positive";
           finish(r, false, budget.margin);
           return;
         }
         const double weight = budget.delta * std::max(e.alpha / e.p, e.beta / e.q);
         double margin = std::numeric_limits<double>::infinity();
         const int n = c.options().n_samples;
         for (int i = 0; i < n; ++i) {
           Rng rng(mix_seed(c.check_seed(index), static_cast<std::uint64_t>(i)));
           const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
           const EnergyTerms t = assemble_terms(s, problem);
           const double bound = weight * (t.norm_u + t.norm_v);
           margin = std::min(margin, (bound - t.coupling) / bound);
         }
         r.samples = n;
         finish(r, margin >= 0.0, margin);
       }},
      {"gradient_consistency",
       [](const Context& c, std::size_t index, CheckResult& r) {
         const Problem& problem = c.problem();
         double worst = 0.0;
         double worst_pairing = 0.0;
         const int n = c.options().n_samples;
         for (int i = 0; i < n; ++i) {
           Rng rng(mix_seed(c.check_seed(index), static_cast<std::uint64_t>(i)));
           const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
           const CoupledState w = random_state(problem.grid(), rng, RandomStateKind::kSigned);
           const GradientProbe probe = probe_gradient(s, multiplicative_direction(s, w), problem);
           worst = std::max(worst, probe.relative_error);
           // Second route to the Nehari value: pairing of the gradient with
           // the fiber direction against the direct assembly.
           const double direct = nehari_residual(s, problem);
           const double paired = nehari_pairing(s, energy_gradient(s, problem), problem);
           const EnergyTerms t = assemble_terms(s, problem);
           const double scale = t.norm_u / problem.exponents().p + t.norm_v / problem.exponents().q;
           worst_pairing = std::max(worst_pairing, std::abs(direct - paired) / scale);
         }
         r.samples = n;
         r.metrics.emplace_back("max_relative_error", worst);
         r.metrics.emplace_back("max_pairing_error", worst_pairing);
         const double err = std::max(worst, worst_pairing);
         finish(r, err <= kGradientTolerance, kGradientTolerance - err);
       }},
      {"fibering_uniqueness",
       [](const Context& c, std::size_t index, CheckResult& r) {
         const Problem& problem = c.problem();
         double margin = std::numeric_limits<double>::infinity();
         bool pass = true;
         const int n = c.options().n_samples;
         for (int i = 0; i < n; ++i) {
           Rng rng(mix_seed(c.check_seed(index), static_cast<std::uint64_t>(i)));
           const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
           const Projection proj = project(s, problem);
           const FiberScan scan = scan_fiber(s, problem, proj.report.t0, 6.0, 121);
           pass = pass && scan.sign_changes == 1 && scan.rhs_increasing;
           margin = std::min(margin, scan.min_rhs_increment);
         }
         r.samples = n;
         finish(r, pass, margin);
       }},
      {"nehari_floor",
       [](const Context& c, std::size_t index, CheckResult& r) {
         const NormFloor floor =
             norm_lower_bound_probe(c.problem(), c.options().n_samples, c.check_seed(index));
         r.samples = c.options().n_samples;
         r.metrics.emplace_back("floor", floor.floor);
         finish(r, floor.floor > 0.0, floor.floor);
       }},
      {"nonnegative_ground_state",
       [](const Context& c, std::size_t, CheckResult& r) {
         const AbsolutizeResult& nonneg = c.nonnegative();
         r.samples = static_cast<int>(c.ground().runs.size());
         r.metrics.emplace_back("signed_energy", nonneg.signed_energy);
         r.metrics.emplace_back("absolutized_energy", nonneg.energy);
         const double gap = nonneg.signed_energy - nonneg.energy;
         finish(r, gap >= -1e-12 * std::max(1.0, std::abs(nonneg.signed_energy)), gap);
       }},
      {"positivity",
       [](const Context& c, std::size_t, CheckResult& r) {
         const PositivityReport p = check_positivity(c.nonnegative().projection.state,
                                                     kPositivityTolerance);
         r.samples = 2;
         r.detail = p.verdict;
         r.metrics.emplace_back("core_min_u", p.u.core_min);
         r.metrics.emplace_back("core_min_v", p.v.core_min);
         double margin = std::numeric_limits<double>::infinity();
         if (p.u.status != "identically-zero") margin = std::min(margin, p.u.core_min);
         if (p.v.status != "identically-zero") margin = std::min(margin, p.v.core_min);
         finish(r, p.verdict != "fail", margin);
       }},
      {"semitrivial_exclusion",
       [](const Context& c, std::size_t, CheckResult& r) {
         const auto& s = c.scalars();
         const SolveReport& best = c.ground().best();
         const SemitrivialVerdict v =
             compare_semitrivial(best, family_fingerprint(c.config()), s.a, s.b);
         const TestStateBound bound = semitrivial_test_state_bound(c.problem(), s.a.field, s.b.field);
         r.samples = static_cast<int>(c.ground().runs.size());
         r.detail = v.verdict + (v.binding.empty() ? "" : ": " + v.binding);
         if (!bound.holds) r.detail += "; test-state bound violated";
         r.metrics.emplace_back("coupled_level", v.coupled_level);
         r.metrics.emplace_back("scalar_level_a", v.scalar_level_a);
         r.metrics.emplace_back("scalar_level_b", v.scalar_level_b);
         r.metrics.emplace_back("mass_fraction_u", v.mass_fraction_u);
         r.metrics.emplace_back("mass_fraction_v", v.mass_fraction_v);
         r.metrics.emplace_back("test_state_t0", bound.t0);
         r.metrics.emplace_back("test_state_energy", bound.energy);
         r.metrics.emplace_back("test_state_bound", bound.bound);
         finish(r, v.fully_nontrivial && bound.holds, v.gap - kLevelSlack);
       }},
      {"level_comparison",
       [](const Context& c, std::size_t, CheckResult& r) {
         ProblemConfig periodic = c.config();
         std::array<DecayPerturbation, 3> perturbations = c.options().perturbations;
         const bool asymptotic = periodic.a.family == PotentialFamily::kAsymptoticallyPeriodic ||
                                 periodic.b.family == PotentialFamily::kAsymptoticallyPeriodic ||
                                 periodic.lambda.family == PotentialFamily::kAsymptoticallyPeriodic;
         if (asymptotic) {
           perturbations = {periodic.a.decay, periodic.b.decay, periodic.lambda.decay};
           periodic.a = periodic_part(periodic.a);
           periodic.b = periodic_part(periodic.b);
           periodic.lambda = periodic_part(periodic.lambda);
         }
         const PeriodicComparison cmp = compare_periodic_asymptotic(periodic, perturbations, c.solver());
         r.samples = 2;
         r.metrics.emplace_back("periodic_level", cmp.periodic_level);
         r.metrics.emplace_back("upper_bound", cmp.upper_bound);
         r.metrics.emplace_back("asymptotic_level", cmp.asymptotic_level);
         if (!cmp.strict) r.detail = "projected bound not strictly below the periodic level";
         if (!cmp.direct_below) r.detail += (r.detail.empty() ? "" : "; ") + std::string("direct solve above the bound");
         finish(r, cmp.passed(), cmp.periodic_level - cmp.upper_bound - 1e-8);
       }},
  };
  return table;
}

const std::map<std::string_view, std::string_view>& anchors() {
  static const std::map<std::string_view, std::string_view> table{
      {"hypotheses_f", "growth, superlinearity and monotonicity conditions on f"},
      {"hypotheses_g", "growth, superlinearity and monotonicity conditions on g"},
      {"ar_non_requirement", "f and g violate the Ambrosetti-Rabinowitz condition"},
      {"young_margin", "Young bound on the coupling term with a positive margin"},
      {"gradient_consistency", "assembled gradient matches finite differences"},
      {"fibering_uniqueness", "fibering map has exactly one critical point"},
      {"nehari_floor", "projected states stay away from zero"},
      {"nonnegative_ground_state", "absolutizing a minimizer does not raise its level"},
      {"positivity", "nonnegative minimizer is strictly positive in the interior"},
      {"semitrivial_exclusion", "coupled level lies below both scalar levels"},
      {"level_comparison", "asymptotically periodic level lies below the periodic level"},
  };
  return table;
}

}  // namespace

std::string to_string(CheckVerdict verdict) {
  switch (verdict) {
    case CheckVerdict::kPass: return "pass";
    case CheckVerdict::kFail: return "fail";
    case CheckVerdict::kSkipped: return "skipped";
  }
  return "unknown";
}

bool VerificationReport::any_failed() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.verdict == CheckVerdict::kFail; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::span<const std::string_view> check_registry() { return kRegistry; }

std::vector<std::string> registry_self_test() {
  std::vector<std::string> problems;
  for (std::string_view name : kRegistry) {
    if (!implementations().contains(name)) problems.push_back("unimplemented: " + std::string(name));
    if (!anchors().contains(name)) problems.push_back("no anchor: " + std::string(name));
  }
  for (const auto& [name, body] : implementations()) {
    if (std::find(kRegistry.begin(), kRegistry.end(), name) == kRegistry.end()) {
      problems.push_back("unregistered: " + std::string(name));
    }
  }
  return problems;
}

VerificationReport run_all(const ProblemConfig& config, const VerifyOptions& options) {
  if (options.n_samples < 10) throw PreconditionError("verification needs n_samples >= 10");
  const Context context(config, options);
  VerificationReport report;
  report.seed = options.seed;
  report.n_samples = options.n_samples;
  report.checks.resize(kRegistry.size());
  for (std::size_t i = 0; i < kRegistry.size(); ++i) {
    report.checks[i].name = std::string(kRegistry[i]);
    report.checks[i].anchor = std::string(anchors().at(kRegistry[i]));
  }

  auto run_one = [&](std::size_t i) {
    CheckResult& r = report.checks[i];
    try {
      implementations().at(kRegistry[i])(context, i, r);
    } catch (const std::exception& e) {
      r.verdict = CheckVerdict::kFail;
      r.margin.reset();
      r.detail = std::string("error: ") + e.what();
    }
  };

  // The coupling margin gates everything after it.
  const std::size_t gate = static_cast<std::size_t>(
      std::find(kRegistry.begin(), kRegistry.end(), "young_margin") - kRegistry.begin());
  bool margin_ok = true;
  try {
    margin_ok = context.problem().budget().margin > 0.0;
  } catch (const std::exception& e) {
    for (std::size_t i = 0; i < kRegistry.size(); ++i) {
      report.checks[i].verdict = CheckVerdict::kFail;
      report.checks[i].detail = std::string("error: configuration rejected: ") + e.what();
    }
    return report;
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < kRegistry.size(); ++i) {
    if (!margin_ok && i > gate) {
      report.checks[i].verdict = CheckVerdict::kSkipped;
      report.checks[i].detail = "coupling margin is not positive";
    } else {
      active.push_back(i);
    }
  }
  parallel_for(active.size(), options.threads, [&](std::size_t k) { run_one(active[k]); });
  return report;
}

GradientProbe probe_gradient(const CoupledState& s, const CoupledState& d, const Problem& problem) {
  const CoupledState grad = energy_gradient(s, problem);
  GradientProbe out;
  out.analytic = inner_product(grad, d);

  auto shifted = [&](double step) {
    auto move = [&](const GridField& x, const GridField& dx) {
      std::vector<double> vals(x.size());
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = x[i] + step * dx[i];
      return GridField(x.grid(), std::move(vals));
    };
    return energy(CoupledState{move(s.u, d.u), move(s.v, d.v)}, problem);
  };
  auto central = [&](double step) { return (shifted(step) - shifted(-step)) / (2.0 * step); };
  constexpr double kStep = 1e-3;
  out.finite_difference = (4.0 * central(0.5 * kStep) - central(kStep)) / 3.0;

  const double scale = std::sqrt(inner_product(grad, grad) * inner_product(d, d));
  const double denom = std::max(std::abs(out.analytic), 1e-2 * scale);
  out.relative_error = denom > 0.0 ? std::abs(out.analytic - out.finite_difference) / denom : 0.0;
  return out;
}

CoupledState multiplicative_direction(const CoupledState& s, const CoupledState& weights) {
  auto product = [](const GridField& x, const GridField& w) {
    std::vector<double> vals(x.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = x[i] * w[i];
    return GridField(x.grid(), std::move(vals));
  };
  return {product(s.u, weights.u), product(s.v, weights.v)};
}

FiberScan scan_fiber(const CoupledState& s, const Problem& problem, double t0, double decades,
                     int points) {
  if (points < 3 || !(t0 > 0.0) || !(decades > 0.0)) {
    throw PreconditionError("fiber scan needs t0 > 0, decades > 0 and at least 3 points");
  }
  const Fiber fiber(s, problem);
  const double half = std::pow(10.0, 0.5 * decades);
  const std::vector<double> ts = log_spaced(t0 / half, t0 * half, points);
  FiberScan out;
  out.rhs_increasing = true;
  out.min_rhs_increment = std::numeric_limits<double>::infinity();
  double prev_rhs = fiber.rhs(ts.front());
  double prev_sign = std::copysign(1.0, fiber.lhs() - prev_rhs);
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const double rhs = fiber.rhs(ts[k]);
    const double sign = std::copysign(1.0, fiber.lhs() - rhs);
    if (sign != prev_sign) ++out.sign_changes;
    const double increment = (rhs - prev_rhs) / std::abs(prev_rhs);
    out.min_rhs_increment = std::min(out.min_rhs_increment, increment);
    if (!(rhs > prev_rhs)) out.rhs_increasing = false;
    prev_rhs = rhs;
    prev_sign = sign;
  }
  return out;
}

PositivityReport check_positivity(const CoupledState& s, double tol, int collar) {
  auto component = [&](const GridField& x) {
    ComponentPositivity c;
    if (x.is_zero()) {
      c.status = "identically-zero";
      return c;
    }
    const GridSpec& grid = x.grid();
    c.interior_min = std::numeric_limits<double>::infinity();
    c.core_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int dist = grid.boundary_distance(i);
      if (dist > 0) c.interior_min = std::min(c.interior_min, x[i]);
      if (dist > collar) c.core_min = std::min(c.core_min, x[i]);
    }
    c.status = c.interior_min >= -tol && c.core_min > 0.0 ? "positive" : "not-positive";
    return c;
  };
  PositivityReport out;
  out.u = component(s.u);
  out.v = component(s.v);
  const bool u_pos = out.u.status == "positive";
  const bool v_pos = out.v.status == "positive";
  const bool u_zero = out.u.status == "identically-zero";
  const bool v_zero = out.v.status == "identically-zero";
  if (u_pos && v_pos) {
    out.verdict = "pass";
  } else if ((u_pos && v_zero) || (v_pos && u_zero)) {
    out.verdict = "semitrivial-positive";
  } else {
    out.verdict = "fail";
  }
  return out;
}

}  // namespace pqnehari
