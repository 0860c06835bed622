#include <gtest/gtest.h>

#include <cmath>

#include "pqnehari/errors.hpp"
#include "pqnehari/nehari.hpp"
#include "test_support.hpp"

namespace pqnehari {
namespace {

using testing::bump;
using testing::mass2;
using testing::mass4;
using testing::max_abs_diff;
using testing::quartic_config;
using testing::scaled;
using testing::slope_energy;
using testing::small_default_config;

// The quartic closed form: h(t) = tA/2 - t^2 B/4 with A the summed squared
// norms and B the summed quartic masses.
struct QuarticFiber {
  double A;
  double B;
};

QuarticFiber quartic_fiber(const CoupledState& s) {
  return {slope_energy(s.u) + mass2(s.u) + slope_energy(s.v) + mass2(s.v),
          mass4(s.u) + mass4(s.v)};
}

CoupledState quartic_state(const GridSpec& grid) {
  return {bump(grid, 0.5, 1.2, 0.8), bump(grid, -1.0, 0.9, 1.4)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  }
  return out;
}

TEST(Fibering, QuarticClosedForm) {
  const Problem problem(quartic_config(256));
  const CoupledState s = quartic_state(problem.grid());
  const auto [A, B] = quartic_fiber(s);
  EXPECT_EQ(fibering_value(s, problem, 0.0), 0.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const double h = t * A / 2.0 - t * t * B / 4.0;
    const double hprime = A / 2.0 - t * B / 2.0;
    EXPECT_NEAR(fibering_value(s, problem, t), h, 1e-12 * std::max(1.0, std::abs(h)));
    EXPECT_NEAR(fibering_derivative(s, problem, t), hprime, 1e-12 * std::max(1.0, A));
  }
  EXPECT_NEAR(fibering_value(s, problem, 1.0), energy(s, problem), 1e-12);
}

TEST(Fibering, NegativeScaleRejected) {
  const Problem problem(quartic_config(64));
  const CoupledState s = quartic_state(problem.grid());
  EXPECT_THROW(fibering_value(s, problem, -0.1), ParameterError);
  EXPECT_THROW(fibering_derivative(s, problem, 0.0), ParameterError);
}

TEST(Fibering, DerivativeMatchesFiniteDifferences) {
  const Problem problem(small_default_config(256));
  Rng rng(3);
  for (int k = 0; k < 5; ++k) {
    const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
    for (double t : {0.1, 0.7, 1.0, 3.0}) {
      const double step = 1e-5 * t;
      const double fd =
          (fibering_value(s, problem, t + step) - fibering_value(s, problem, t - step)) /
          (2.0 * step);
      const double exact = fibering_derivative(s, problem, t);
      EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << "t = " << t;
    }
  }
}

TEST(Fibering, PositiveNearZero) {
  const Problem problem(small_default_config(256));
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
    for (double t : {1e-8, 1e-6, 1e-4}) EXPECT_GT(fibering_derivative(s, problem, t), 0.0);
  }
}

TEST(Fibering, ScaleOnFiberUsesSeparateExponents) {
  const ProblemConfig c = small_default_config(64);
  const CoupledState s{bump(c.grid, 0.0, 1.0, 1.0), bump(c.grid, 0.0, 1.0, 1.0)};
  const CoupledState t = scale_on_fiber(s, 8.0, c.exponents);
  const std::size_t mid = c.grid.node_count() / 2;
  EXPECT_NEAR(t.u[mid], std::sqrt(8.0) * s.u[mid], 1e-14);
  EXPECT_NEAR(t.v[mid], 2.0 * s.v[mid], 1e-14);
}

TEST(Project, QuarticRootIsTheRatio) {
  const Problem problem(quartic_config(256));
  const CoupledState s = quartic_state(problem.grid());
  const auto [A, B] = quartic_fiber(s);
  const Projection proj = project(s, problem);
  EXPECT_NEAR(proj.report.t0, A / B, 1e-10 * A / B);
  EXPECT_LT(proj.report.t_lo, proj.report.t0);
  EXPECT_GT(proj.report.t_hi, proj.report.t0);
  EXPECT_GT(fibering_derivative(s, problem, proj.report.t_lo), 0.0);
  EXPECT_LT(fibering_derivative(s, problem, proj.report.t_hi), 0.0);
}

TEST(Project, ResidualWithinScaledTolerance) {
  const Problem problem(small_default_config(256));
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
    const Projection proj = project(s, problem);
    const EnergyTerms t = assemble_terms(proj.state, problem);
    EXPECT_LE(std::abs(nehari_residual(proj.state, problem)), 1e-9 * (t.norm_u + t.norm_v));
  }
}

TEST(Project, ManifoldPointsStayPut) {
  const Problem problem(small_default_config(256));
  Rng rng(10);
  const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kPositiveBumps);
  const Projection once = project(s, problem);
  const Projection twice = project(once.state, problem);
  EXPECT_NEAR(twice.report.t0, 1.0, 1e-9);
  EXPECT_NEAR(fibering_derivative(once.state, problem, 1.0), 0.0,
              1e-9 * combined_norm(once.state, problem));
}

TEST(Project, FiberScalingInvariance) {
  const Problem problem(small_default_config(256));
  const Exponents& e = problem.exponents();
  Rng rng(12);
  const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
  const Projection base = project(s, problem);
  for (double c : {1e-3, 0.25, 7.0, 1e3}) {
    const Projection other = project(scale_on_fiber(s, c, e), problem);
    const double scale_u = testing::max_abs(base.state.u.values());
    const double scale_v = testing::max_abs(base.state.v.values());
    EXPECT_LE(max_abs_diff(other.state.u.values(), base.state.u.values()), 1e-9 * scale_u);
    EXPECT_LE(max_abs_diff(other.state.v.values(), base.state.v.values()), 1e-9 * scale_v);
  }
}

TEST(Project, TrailRhsIsIncreasing) {
  const Problem problem(small_default_config(256));
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
    const Projection proj = project(s, problem);
    ASSERT_GE(proj.report.samples.size(), 2u);
    for (std::size_t i = 1; i < proj.report.samples.size(); ++i) {
      EXPECT_GT(proj.report.samples[i].t, proj.report.samples[i - 1].t);
      EXPECT_GT(proj.report.samples[i].rhs, proj.report.samples[i - 1].rhs);
    }
  }
}

TEST(Project, SemitrivialStateSolvesTheScalarEquation) {
  const Problem problem(small_default_config(256));
  const GridField u = bump(problem.grid(), 0.0, 1.5, 2.0);
  const Projection proj = project({u, GridField(problem.grid())}, problem);
  EXPECT_TRUE(proj.state.v.is_zero());
  // Scalar Nehari equation ||w||^p = int f(w) w, assembled from the grid and
  // nonlinearity primitives directly.
  const double p = problem.exponents().p;
  const GridField& w = proj.state.u;
  std::vector<double> source(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) source[i] = eval_f(problem.config().f, w[i]) * w[i];
  const double norm = weighted_norm_p(w, problem.a(), p);
  EXPECT_NEAR(norm, integrate(problem.grid(), source), 1e-9 * norm);
}

TEST(Project, ErrorsOnZeroStateAndMissingBracket) {
  const Problem problem(small_default_config(64));
  EXPECT_THROW(project({GridField(problem.grid()), GridField(problem.grid())}, problem),
               PreconditionError);
  // r = p: the right-hand side is constant along the fiber, so h' never
  // changes sign.
  ProblemConfig c = quartic_config(64);
  c.f.power = 2.0;
  c.g.power = 2.0;
  const Problem degenerate(c, {.allow_hypothesis_violations = true});
  EXPECT_THROW(project(quartic_state(degenerate.grid()), degenerate), ProjectionError);
}

TEST(Fibering, SingleSignChangeOverSixDecades) {
  const Problem problem(small_default_config(256));
  Rng rng(42);
  for (int k = 0; k < 50; ++k) {
    const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
    const double t0 = project(s, problem).report.t0;
    int changes = 0;
    double previous = 0.0;
    for (double t : log_grid(t0 * 1e-3, t0 * 1e3, 121)) {
      const double d = fibering_derivative(s, problem, t);
      if (previous != 0.0 && (d > 0.0) != (previous > 0.0)) ++changes;
      previous = d;
    }
    EXPECT_EQ(changes, 1) << "draw " << k;
  }
}

TEST(Minimize, DescentTraceIsNonIncreasingAndStationary) {
  const Problem problem(small_default_config(256));
  Rng rng(21);
  const CoupledState init = random_state(problem.grid(), rng, RandomStateKind::kPositiveBumps);
  const SolveReport report = minimize_ground_state(init, problem, SolverOptions{});
  ASSERT_TRUE(report.converged) << report.status;
  ASSERT_FALSE(report.trace.empty());
  for (std::size_t i = 1; i < report.trace.size(); ++i) {
    EXPECT_LE(report.trace[i].energy,
              report.trace[i - 1].energy + 1e-12 * std::max(1.0, std::abs(report.trace[i - 1].energy)));
  }
  EXPECT_LE(report.gradient_norm, 1e-6);
  EXPECT_LE(std::abs(report.nehari_residual), 1e-6);
  EXPECT_NEAR(report.energy_value, energy(report.state, problem), 1e-12);
}

TEST(Minimize, InvariantSubspaceWithoutCoupling) {
  ProblemConfig c = small_default_config(256);
  c.lambda.base_level = 0.0;
  const Problem problem(c);
  const CoupledState init{bump(problem.grid(), 0.0, 1.0, 1.0), GridField(problem.grid())};
  const SolveReport report = minimize_ground_state(init, problem, SolverOptions{});
  EXPECT_TRUE(report.converged) << report.status;
  EXPECT_TRUE(report.state.v.is_zero());
  EXPECT_TRUE(report.semitrivial);
}

TEST(Minimize, ZeroInitRejected) {
  const Problem problem(small_default_config(64));
  EXPECT_THROW(minimize_ground_state({GridField(problem.grid()), GridField(problem.grid())},
                                     problem, SolverOptions{}),
               PreconditionError);
}

TEST(MultiStart, IndependentOfThreadCount) {
  const Problem problem(small_default_config(128));
  SolverOptions one;
  one.multistart = 4;
  one.seed = 77;
  SolverOptions three = one;
  three.threads = 3;
  const MultiStartResult a = multistart_ground_state(problem, one);
  const MultiStartResult b = multistart_ground_state(problem, three);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].energy_value, b.runs[i].energy_value);
    EXPECT_EQ(a.runs[i].init_seed, b.runs[i].init_seed);
    EXPECT_EQ(max_abs_diff(a.runs[i].state.u.values(), b.runs[i].state.u.values()), 0.0);
  }
  // Runs are ordered by energy; the best is the lowest converged one.
  for (std::size_t i = 1; i < a.runs.size(); ++i) {
    if (a.runs[i].converged) {
      EXPECT_LE(a.runs[i - 1].energy_value, a.runs[i].energy_value);
    }
  }
  EXPECT_EQ(a.best().energy_value, a.runs.front().energy_value);
}

TEST(Absolutize, NonnegativeManifoldStateIsFixed) {
  const Problem problem(small_default_config(256));
  Rng rng(30);
  const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kPositiveBumps);
  const Projection proj = project(s, problem);
  const AbsolutizeResult abs = absolutize_project(proj.state, problem);
  EXPECT_NEAR(abs.projection.report.t0, 1.0, 1e-9);
}

TEST(Absolutize, SignFlippedLobesDoNotRaiseTheEnergy) {
  ProblemConfig c = small_default_config(256);
  c.lambda.base_level = 0.2;
  const Problem problem(c);
  const GridSpec& grid = problem.grid();
  const CoupledState s{testing::field_from(grid,
                                           [](double x) { return std::sin(x) * std::exp(-x * x / 8); }),
                       bump(grid, 0.5, 1.0, 1.0)};
  const AbsolutizeResult abs = absolutize_project(s, problem);
  for (double x : abs.projection.state.u.values()) EXPECT_GE(x, 0.0);
  for (double x : abs.projection.state.v.values()) EXPECT_GE(x, 0.0);
  EXPECT_LE(abs.energy, abs.signed_energy);
  EXPECT_NEAR(abs.signed_energy, energy(project(s, problem).state, problem), 1e-12);
}

TEST(Absolutize, NegatedComponentMatchesThePositiveProjection) {
  const Problem problem(small_default_config(256));
  const GridField u = bump(problem.grid(), 0.0, 1.0, 1.0);
  const GridField v = bump(problem.grid(), 1.0, 1.5, 0.6);
  const CoupledState negated = scaled({u, v}, -1.0, 1.0);
  const AbsolutizeResult abs = absolutize_project(negated, problem);
  const Projection direct = project({u, v}, problem);
  EXPECT_EQ(max_abs_diff(abs.projection.state.u.values(), direct.state.u.values()), 0.0);
  EXPECT_EQ(max_abs_diff(abs.projection.state.v.values(), direct.state.v.values()), 0.0);
}

TEST(Absolutize, NegativeCouplingRejected) {
  ProblemConfig c = small_default_config(128);
  c.lambda.family = PotentialFamily::kPeriodicTrig;
  c.lambda.base_level = 0.05;
  c.lambda.modulation_amplitude = 0.1;
  const Problem problem(c);
  const CoupledState s{bump(problem.grid(), 0.0, 1.0, 1.0), bump(problem.grid(), 0.0, 1.0, 1.0)};
  EXPECT_THROW(absolutize_project(s, problem), PreconditionError);
}

TEST(NormFloor, DefaultConfigIsBoundedAway) {
  const Problem problem(small_default_config(256));
  const NormFloor floor = norm_lower_bound_probe(problem, 50, 42);
  EXPECT_EQ(floor.norms.size(), 50u);
  EXPECT_GE(floor.floor, 1e-4);
  for (double n : floor.norms) EXPECT_GE(n, floor.floor);
  EXPECT_THROW(norm_lower_bound_probe(problem, 5, 42), PreconditionError);
}

TEST(NormFloor, ScaledCopiesShareTheManifoldPoint) {
  const Problem problem(small_default_config(256));
  Rng rng(31);
  const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
  const double reference = combined_norm(project(s, problem).state, problem);
  // With p != q a scaled-down copy stays on the fiber only when each
  // component shrinks with its own exponent.
  for (double c : {1e-3, 1e-2, 0.5}) {
    const CoupledState copy = scale_on_fiber(s, c, problem.exponents());
    const double norm = combined_norm(project(copy, problem).state, problem);
    EXPECT_NEAR(norm, reference, 1e-9 * reference) << "c = " << c;
  }
}

TEST(NormFloor, ThreadCountDoesNotChangeTheFloor) {
  const Problem problem(small_default_config(128));
  EXPECT_EQ(norm_lower_bound_probe(problem, 12, 5, 1).floor,
            norm_lower_bound_probe(problem, 12, 5, 3).floor);
}

TEST(SobolevSmooth, SolvesTheShiftedLaplacian) {
  for (const GridSpec& grid : {testing::line_grid(4.0, 64),
                               GridSpec{.dimension = 2, .half_width = 2.0, .nodes_per_axis = 20}}) {
    std::vector<double> r(grid.node_count());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = grid.is_boundary(i) ? 0.0 : std::cos(0.7 * i);
    const std::vector<double> z = sobolev_smooth(grid, r);
    const double k = 1.0 / (grid.spacing() * grid.spacing());
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (grid.is_boundary(i)) {
        EXPECT_EQ(z[i], 0.0);
        continue;
      }
      double lhs = (1.0 + 2.0 * grid.dimension * k) * z[i];
      for (int axis = 0; axis < grid.dimension; ++axis) {
        const std::size_t s = grid.stride(axis);
        lhs -= k * (z[i - s] + z[i + s]);
      }
      EXPECT_NEAR(lhs, r[i], 1e-9) << "node " << i;
    }
  }
}

TEST(DescentMetric, NamesRoundTrip) {
  for (auto m : {DescentMetric::kL2, DescentMetric::kSobolev, DescentMetric::kQuasiNewton}) {
    EXPECT_EQ(descent_metric_from_string(to_string(m)), m);
  }
  EXPECT_THROW(descent_metric_from_string("newton"), ConfigError);
}

}  // namespace
}  // namespace pqnehari
