#include "pqnehari/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pqnehari/parallel.hpp"

namespace pqnehari {

CoupledState scale_on_fiber(const CoupledState& s, double t, const Exponents& e) {
  const double su = std::pow(t, 1.0 / e.p);
  const double sv = std::pow(t, 1.0 / e.q);
  std::vector<double> u(s.u.values().begin(), s.u.values().end());
  std::vector<double> v(s.v.values().begin(), s.v.values().end());
  for (auto& x : u) x *= su;
  for (auto& x : v) x *= sv;
  return {GridField(s.u.grid(), std::move(u)), GridField(s.v.grid(), std::move(v))};
}

Fiber::Fiber(const CoupledState& s, const Problem& problem) : state_(s), problem_(problem) {
  const auto& e = problem.exponents();
  const EnergyTerms terms = assemble_terms(s, problem);
  lhs_ = terms.norm_u / e.p + terms.norm_v / e.q - terms.coupling;
}

double Fiber::value(double t) const {
  if (!(t >= 0.0)) throw ParameterError("fibering value needs t >= 0");
  if (t == 0.0) return 0.0;
  const auto& e = problem_.exponents();
  const GridSpec& grid = problem_.grid();
  const double su = std::pow(t, 1.0 / e.p);
  const double sv = std::pow(t, 1.0 / e.q);
  std::vector<double> fu(grid.node_count()), gv(grid.node_count());
  for (std::size_t i = 0; i < fu.size(); ++i) {
    fu[i] = problem_.f().primitive(su * state_.u[i]);
    gv[i] = problem_.g().primitive(sv * state_.v[i]);
  }
  return t * lhs_ - integrate(grid, fu) - integrate(grid, gv);
}

double Fiber::rhs(double t) const {
  if (!(t > 0.0)) throw ParameterError("fibering derivative needs t > 0");
  const auto& e = problem_.exponents();
  const GridSpec& grid = problem_.grid();
  const double su = std::pow(t, 1.0 / e.p);
  const double sv = std::pow(t, 1.0 / e.q);
  std::vector<double> fu(grid.node_count()), gv(grid.node_count());
  for (std::size_t i = 0; i < fu.size(); ++i) {
    const double x = su * state_.u[i];
    const double y = sv * state_.v[i];
    fu[i] = problem_.f().f(x) * x;
    gv[i] = problem_.g().f(y) * y;
  }
  // f(t^(1/p) u) u / t^(1-1/p) = f(x) x / t with x = t^(1/p) u.
  return integrate(grid, fu) / (e.p * t) + integrate(grid, gv) / (e.q * t);
}

double fibering_value(const CoupledState& s, const Problem& problem, double t) {
  return Fiber(s, problem).value(t);
}

double fibering_derivative(const CoupledState& s, const Problem& problem, double t) {
  return Fiber(s, problem).derivative(t);
}

Projection project(const CoupledState& s, const Problem& problem) {
  problem.check_state(s);
  if (s.is_zero()) throw PreconditionError("cannot project the zero state");
  const Fiber fiber(s, problem);
  constexpr int kMaxExpansions = 60;

  FiberingReport report;
  std::vector<FiberSample> trail;
  auto sample = [&](double t) {
    const double r = fiber.rhs(t);
    trail.push_back({t, fiber.value(t), fiber.lhs() - r, r});
    return trail.back().hprime;
  };

  double t_lo = 1.0;
  double d_lo = sample(t_lo);
  double t_hi = 1.0;
  double d_hi = d_lo;
  for (int k = 0; d_lo <= 0.0; ++k) {
    if (k == kMaxExpansions) {
      throw ProjectionError("h' stays non-positive down to t = 2^-60; the coupling margin "
                            "does not dominate near the origin");
    }
    t_lo *= 0.5;
    d_lo = sample(t_lo);
  }
  for (int k = 0; d_hi >= 0.0; ++k) {
    if (k == kMaxExpansions) {
      throw ProjectionError("h' stays non-negative up to t = 2^60; the nonlinearity is not "
                            "superlinear on this state");
    }
    t_hi *= 2.0;
    d_hi = sample(t_hi);
  }
  std::sort(trail.begin(), trail.end(),
            [](const FiberSample& x, const FiberSample& y) { return x.t < y.t; });
  trail.erase(std::unique(trail.begin(), trail.end(),
                          [](const FiberSample& x, const FiberSample& y) { return x.t == y.t; }),
              trail.end());
  for (std::size_t i = 1; i < trail.size(); ++i) {
    if (!(trail[i].rhs > trail[i - 1].rhs)) {
      std::ostringstream msg;
      msg << "RHS of the fibering equation is not increasing between t = " << trail[i - 1].t
          << " and t = " << trail[i].t;
      throw ProjectionError(msg.str());
    }
  }

  report.t_lo = t_lo;
  report.t_hi = t_hi;
  double lo = t_lo;
  double hi = t_hi;
  int iterations = 0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fiber.derivative(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  report.t0 = 0.5 * (lo + hi);
  report.iterations = iterations;

  Projection out{scale_on_fiber(s, report.t0, problem.exponents()), {}};
  const auto& e = problem.exponents();
  const EnergyTerms terms = assemble_terms(out.state, problem);
  report.residual_at_t0 = terms.norm_u / e.p + terms.norm_v / e.q - terms.coupling -
                          terms.source_u / e.p - terms.source_v / e.q;
  const double scale = terms.norm_u + terms.norm_v;
  if (!(std::abs(report.residual_at_t0) <= 1e-9 * scale)) {
    std::ostringstream msg;
    msg << "projected residual " << report.residual_at_t0 << " exceeds 1e-9 * " << scale;
    throw ProjectionError(msg.str());
  }
  const double r0 = fiber.rhs(report.t0);
  trail.push_back({report.t0,
                   terms.norm_u / e.p + terms.norm_v / e.q - terms.coupling -
                       terms.primitive_u - terms.primitive_v,
                   fiber.lhs() - r0, r0});
  std::sort(trail.begin(), trail.end(),
            [](const FiberSample& x, const FiberSample& y) { return x.t < y.t; });
  report.samples = std::move(trail);
  out.report = std::move(report);
  return out;
}

std::string to_string(DescentMetric metric) {
  switch (metric) {
    case DescentMetric::kL2:
      return "l2";
    case DescentMetric::kSobolev:
      return "sobolev";
    case DescentMetric::kQuasiNewton:
      return "lbfgs";
  }
  return "unknown";
}

DescentMetric descent_metric_from_string(const std::string& name) {
  if (name == "l2") return DescentMetric::kL2;
  if (name == "sobolev") return DescentMetric::kSobolev;
  if (name == "lbfgs") return DescentMetric::kQuasiNewton;
  throw ConfigError("unknown descent metric '" + name + "' (expected l2, sobolev or lbfgs)");
}

namespace {

// Thomas algorithm for the 1-D operator (1 + 2/h^2) z_i - (z_{i-1} + z_{i+1})/h^2.
std::vector<double> sobolev_smooth_1d(const GridSpec& grid, std::span<const double> r) {
  const std::size_t n = r.size();
  const double k = 1.0 / (grid.spacing() * grid.spacing());
  const double diag = 1.0 + 2.0 * k;
  std::vector<double> z(n, 0.0), c(n, 0.0), d(n, 0.0);
  // Interior unknowns are nodes 1..n-2.
  c[1] = -k / diag;
  d[1] = r[1] / diag;
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double m = diag + k * c[i - 1];
    c[i] = -k / m;
    d[i] = (r[i] + k * d[i - 1]) / m;
  }
  z[n - 2] = d[n - 2];
  for (std::size_t i = n - 2; i-- > 1;) z[i] = d[i] - c[i] * z[i + 1];
  return z;
}

std::vector<double> apply_shifted_laplacian(const GridSpec& grid, std::span<const double> z) {
  const double k = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<double> out(z.size(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (grid.is_boundary(i)) continue;
    double acc = (1.0 + 2.0 * grid.dimension * k) * z[i];
    for (int axis = 0; axis < grid.dimension; ++axis) {
      const std::size_t s = grid.stride(axis);
      acc -= k * (z[i - s] + z[i + s]);
    }
    out[i] = acc;
  }
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = x[i] * y[i];
  return pairwise_sum(t);
}

// Conjugate gradients for d > 1; the operator is symmetric positive definite.
std::vector<double> sobolev_smooth_cg(const GridSpec& grid, std::span<const double> r) {
  const std::size_t n = r.size();
  std::vector<double> z(n, 0.0), res(r.begin(), r.end()), dir(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (grid.is_boundary(i)) res[i] = 0.0;
  }
  dir = res;
  double rr = dot(res, res);
  const double stop = 1e-24 * std::max(rr, 1e-300);
  for (int it = 0; it < 10000 && rr > stop; ++it) {
    const auto ad = apply_shifted_laplacian(grid, dir);
    const double alpha = rr / dot(dir, ad);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] += alpha * dir[i];
      res[i] -= alpha * ad[i];
    }
    const double rr_new = dot(res, res);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) dir[i] = res[i] + beta * dir[i];
  }
  return z;
}

double mass(const GridField& x) {
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = x[i] * x[i];
  return integrate(x.grid(), sq);
}

void zero_pinned(CoupledState& s, PinnedComponent pin) {
  if (pin == PinnedComponent::kU) s.u = GridField(s.u.grid());
  if (pin == PinnedComponent::kV) s.v = GridField(s.v.grid());
}

CoupledState direction(const CoupledState& residual, DescentMetric metric) {
  if (metric == DescentMetric::kL2) return residual;
  const GridSpec& grid = residual.u.grid();
  return {GridField(grid, sobolev_smooth(grid, residual.u.values())),
          GridField(grid, sobolev_smooth(grid, residual.v.values()))};
}

CoupledState axpy(const CoupledState& s, double tau, const CoupledState& d) {
  std::vector<double> u(s.u.values().begin(), s.u.values().end());
  std::vector<double> v(s.v.values().begin(), s.v.values().end());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] += tau * d.u[i];
    v[i] += tau * d.v[i];
  }
  GridField fu(s.u.grid());
  GridField fv(s.v.grid());
  std::copy(u.begin(), u.end(), fu.mutable_values().begin());
  std::copy(v.begin(), v.end(), fv.mutable_values().begin());
  fu.enforce_boundary();
  fv.enforce_boundary();
  return {std::move(fu), std::move(fv)};
}

struct Stationarity {
  double gradient_norm = 0.0;
  CoupledState residual;
};

Stationarity stationarity(const CoupledState& s, const Problem& problem, PinnedComponent pin) {
  CoupledState r = energy_gradient(s, problem);
  CoupledState n = nehari_normal(s, problem);
  zero_pinned(r, pin);
  zero_pinned(n, pin);
  const double nn = inner_product(n, n);
  const double mu = nn > 0.0 ? inner_product(r, n) / nn : 0.0;
  const CoupledState tangent = axpy(r, -mu, n);
  return {std::sqrt(std::max(0.0, inner_product(tangent, tangent))), std::move(r)};
}

}  // namespace

std::vector<double> sobolev_smooth(const GridSpec& grid, std::span<const double> r) {
  if (r.size() != grid.node_count()) throw PreconditionError("smoothing input size mismatch");
  if (grid.dimension == 1) return sobolev_smooth_1d(grid, r);
  return sobolev_smooth_cg(grid, r);
}

namespace {

// Two-loop recursion over the stored correction pairs with the smoothing
// operator as initial inverse Hessian.
struct CorrectionPair {
  CoupledState s;
  CoupledState y;
  double rho = 0.0;
};

CoupledState smoothed(const CoupledState& x) {
  const GridSpec& grid = x.u.grid();
  return {GridField(grid, sobolev_smooth(grid, x.u.values())),
          GridField(grid, sobolev_smooth(grid, x.v.values()))};
}

CoupledState quasi_newton_direction(const CoupledState& residual,
                                    const std::vector<CorrectionPair>& pairs) {
  CoupledState q = residual;
  std::vector<double> coeff(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    coeff[k] = pairs[k].rho * inner_product(pairs[k].s, q);
    q = axpy(q, -coeff[k], pairs[k].y);
  }
  CoupledState r = smoothed(q);
  if (!pairs.empty()) {
    const auto& last = pairs.back();
    const double yhy = inner_product(last.y, smoothed(last.y));
    if (yhy > 0.0) {
      const double gamma = 1.0 / (last.rho * yhy);
      r = axpy(CoupledState{GridField(r.u.grid()), GridField(r.v.grid())}, gamma, r);
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double b = pairs[k].rho * inner_product(pairs[k].y, r);
    r = axpy(r, coeff[k] - b, pairs[k].s);
  }
  return r;
}

CoupledState difference(const CoupledState& x, const CoupledState& y) { return axpy(x, -1.0, y); }

}  // namespace

SolveReport minimize_ground_state(const CoupledState& init, const Problem& problem,
                                  const SolverOptions& options) {
  problem.check_state(init);
  if (!(options.tol > 0.0) || options.max_iters < 0 || options.max_halvings < 1 ||
      options.memory < 1) {
    throw ParameterError(
        "solver options need tol > 0, max_iters >= 0, max_halvings >= 1, memory >= 1");
  }
  CoupledState start = init;
  zero_pinned(start, options.pin);
  if (start.is_zero()) throw PreconditionError("initial state must be nonzero");

  constexpr double kBlowUp = -1e12;
  const bool quasi_newton = options.metric == DescentMetric::kQuasiNewton;
  SolveReport report;
  CoupledState s = project(start, problem).state;
  double e_cur = energy(s, problem);
  double step = 1.0;
  std::vector<CorrectionPair> pairs;
  CoupledState prev_state;
  CoupledState prev_residual;
  bool have_prev = false;

  for (int k = 0;; ++k) {
    Stationarity st = stationarity(s, problem, options.pin);
    report.trace.push_back({k, e_cur, nehari_residual(s, problem), st.gradient_norm, step});
    report.iterations = k;
    report.gradient_norm = st.gradient_norm;
    if (st.gradient_norm <= options.tol) {
      report.converged = true;
      report.status = "converged";
      break;
    }
    if (k >= options.max_iters) {
      report.status = "max_iters";
      break;
    }
    if (quasi_newton && have_prev) {
      CorrectionPair pair{difference(s, prev_state), difference(st.residual, prev_residual), 0.0};
      const double sy = inner_product(pair.s, pair.y);
      if (sy > 1e-16 * std::sqrt(inner_product(pair.s, pair.s) * inner_product(pair.y, pair.y))) {
        pair.rho = 1.0 / sy;
        pairs.push_back(std::move(pair));
        if (pairs.size() > static_cast<std::size_t>(options.memory)) pairs.erase(pairs.begin());
      }
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      CoupledState d;
      if (quasi_newton) {
        d = quasi_newton_direction(st.residual, pairs);
      } else {
        d = direction(st.residual, options.metric);
      }
      double slope = inner_product(st.residual, d);
      if (!(slope > 0.0)) {
        pairs.clear();
        d = smoothed(st.residual);
        slope = inner_product(st.residual, d);
      }
      const double slack = 1e-14 * std::max(1.0, std::abs(e_cur));
      double tau = quasi_newton ? 1.0 : std::min(2.0 * step, 1e6);
      for (int halving = 0; halving <= options.max_halvings; ++halving, tau *= 0.5) {
        CoupledState trial = axpy(s, -tau, d);
        if (trial.is_zero()) continue;
        CoupledState projected;
        try {
          projected = project(trial, problem).state;
        } catch (const ProjectionError&) {
          continue;
        }
        const double e_trial = energy(projected, problem);
        if (e_trial < kBlowUp) {
          throw BlowUpError("energy fell below -1e12 at iteration " + std::to_string(k));
        }
        if (e_trial <= e_cur - options.armijo * tau * slope + slack) {
          prev_state = std::move(s);
          prev_residual = std::move(st.residual);
          have_prev = true;
          s = std::move(projected);
          e_cur = e_trial;
          step = tau;
          accepted = true;
          break;
        }
      }
      // A failed quasi-Newton direction gets one retry along the smoothed residual.
      if (!accepted && quasi_newton && !pairs.empty()) {
        pairs.clear();
        continue;
      }
      break;
    }
    if (!accepted) {
      throw StalledError("line search failed after " + std::to_string(options.max_halvings) +
                             " halvings at iteration " + std::to_string(k),
                         std::move(report.trace));
    }
  }

  report.energy_value = e_cur;
  report.nehari_residual = report.trace.back().residual;
  const double mu = mass(s.u);
  const double mv = mass(s.v);
  const double total = mu + mv;
  report.mass_fraction_u = total > 0.0 ? mu / total : 0.0;
  report.mass_fraction_v = total > 0.0 ? mv / total : 0.0;
  report.semitrivial = report.mass_fraction_u < kMassFractionThreshold ||
                       report.mass_fraction_v < kMassFractionThreshold;
  report.state = std::move(s);
  return report;
}


CoupledState random_state(const GridSpec& grid, Rng& rng, RandomStateKind kind) {
  const double reach = grid.half_width / 8.0;
  struct Bump {
    std::array<double, 3> centre{0.0, 0.0, 0.0};
    double width = 1.0;
    double amplitude = 1.0;
  };
  auto draw = [&](double sign) {
    Bump b;
    for (int k = 0; k < grid.dimension; ++k) b.centre[static_cast<std::size_t>(k)] = rng.uniform(-reach, reach);
    b.width = rng.uniform(0.5, 2.0);
    b.amplitude = sign * rng.uniform(0.5, 2.0);
    return b;
  };
  std::vector<Bump> bumps_u, bumps_v;
  if (kind == RandomStateKind::kPositiveBumps) {
    Bump bu = draw(1.0);
    Bump bv = bu;
    bv.width = rng.uniform(0.5, 2.0);
    bv.amplitude = rng.uniform(0.5, 2.0);
    bumps_u.push_back(bu);
    bumps_v.push_back(bv);
  } else {
    for (int j = 0; j < 3; ++j) bumps_u.push_back(draw(rng.uniform() < 0.5 ? -1.0 : 1.0));
    for (int j = 0; j < 3; ++j) bumps_v.push_back(draw(rng.uniform() < 0.5 ? -1.0 : 1.0));
  }
  auto evaluate = [&](const std::vector<Bump>& bumps) {
    GridField field(grid);
    auto vals = field.mutable_values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const auto x = grid.coordinates(i);
      double taper = 1.0;
      for (int k = 0; k < grid.dimension; ++k) {
        taper *= std::cos(0.5 * std::numbers::pi * x[static_cast<std::size_t>(k)] / grid.half_width);
      }
      double acc = 0.0;
      for (const auto& b : bumps) {
        double r2 = 0.0;
        for (int k = 0; k < grid.dimension; ++k) {
          const double dx = x[static_cast<std::size_t>(k)] - b.centre[static_cast<std::size_t>(k)];
          r2 += dx * dx;
        }
        acc += b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width));
      }
      vals[i] = acc * std::max(0.0, taper);
    }
    field.enforce_boundary();
    return field;
  };
  return {evaluate(bumps_u), evaluate(bumps_v)};
}

const SolveReport& MultiStartResult::best() const {
  if (runs.empty()) throw PreconditionError("multi-start produced no runs");
  for (const auto& r : runs) {
    if (r.converged) return r;
  }
  return runs.front();
}

MultiStartResult multistart_ground_state(const Problem& problem, const SolverOptions& options,
                                         const std::vector<CoupledState>& extra_inits) {
  if (options.multistart < 0) throw ParameterError("multistart must be >= 0");
  const std::size_t n_random = static_cast<std::size_t>(options.multistart);
  const std::size_t total = n_random + extra_inits.size();
  if (total == 0) throw ParameterError("multi-start needs at least one init");
  std::vector<SolveReport> runs(total);
  parallel_for(total, options.threads, [&](std::size_t i) {
    const std::uint64_t seed =
        i < n_random ? mix_seed(options.seed, i) : mix_seed(options.seed, 1000003 + i);
    CoupledState init;
    if (i < n_random) {
      Rng rng(seed);
      init = random_state(problem.grid(), rng, RandomStateKind::kPositiveBumps);
    } else {
      init = extra_inits[i - n_random];
    }
    SolveReport r;
    try {
      r = minimize_ground_state(init, problem, options);
    } catch (const StalledError& e) {
      r.status = std::string("stalled: ") + e.what();
      r.trace = e.trace();
      r.energy_value = r.trace.empty() ? std::numeric_limits<double>::infinity()
                                       : r.trace.back().energy;
    } catch (const Error& e) {
      r.status = std::string("failed: ") + e.what();
      r.energy_value = std::numeric_limits<double>::infinity();
    }
    r.init_seed = seed;
    runs[i] = std::move(r);
  });
  std::stable_sort(runs.begin(), runs.end(), [](const SolveReport& x, const SolveReport& y) {
    const bool fx = x.status.rfind("failed", 0) == 0 || x.status.rfind("stalled", 0) == 0;
    const bool fy = y.status.rfind("failed", 0) == 0 || y.status.rfind("stalled", 0) == 0;
    if (fx != fy) return fy;
    if (x.energy_value != y.energy_value) return x.energy_value < y.energy_value;
    return x.init_seed < y.init_seed;
  });
  return {std::move(runs)};
}

AbsolutizeResult absolutize_project(const CoupledState& s, const Problem& problem) {
  problem.check_state(s);
  for (double l : problem.lambda()) {
    if (l < 0.0) throw PreconditionError("absolutize_project needs lambda >= 0 on the grid");
  }
  std::vector<double> u(s.u.values().begin(), s.u.values().end());
  std::vector<double> v(s.v.values().begin(), s.v.values().end());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (problem.f().primitive(-std::abs(u[i])) > problem.f().primitive(std::abs(u[i])) ||
        problem.g().primitive(-std::abs(v[i])) > problem.g().primitive(std::abs(v[i]))) {
      throw PreconditionError("F(-t) <= F(t) fails at a state value");
    }
    u[i] = std::abs(u[i]);
    v[i] = std::abs(v[i]);
  }
  const CoupledState abs_state{GridField(s.u.grid(), std::move(u)),
                               GridField(s.v.grid(), std::move(v))};
  AbsolutizeResult out;
  const Projection signed_proj = project(s, problem);
  out.signed_energy = energy(signed_proj.state, problem);
  out.projection = project(abs_state, problem);
  out.energy = energy(out.projection.state, problem);
  const double slack = 1e-12 * std::max(1.0, std::abs(out.signed_energy));
  if (out.energy > out.signed_energy + slack) {
    std::ostringstream msg;
    msg << "absolutized energy " << out.energy << " exceeds signed energy " << out.signed_energy;
    throw NumericError(msg.str());
  }
  return out;
}

NormFloor norm_lower_bound_probe(const Problem& problem, int n_samples, std::uint64_t seed,
                                 int threads) {
  if (n_samples < 10) throw PreconditionError("norm floor probe needs n_samples >= 10");
  NormFloor out;
  out.norms.resize(static_cast<std::size_t>(n_samples));
  parallel_for(out.norms.size(), threads, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    const CoupledState s = random_state(problem.grid(), rng, RandomStateKind::kSigned);
    out.norms[i] = combined_norm(project(s, problem).state, problem);
  });
  out.floor = *std::min_element(out.norms.begin(), out.norms.end());
  return out;
}

}  // namespace pqnehari
