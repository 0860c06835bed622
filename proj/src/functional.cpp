#include "pqnehari/functional.hpp"

#include <cmath>
#include <sstream>

#include "pqnehari/errors.hpp"

namespace pqnehari {

namespace {

// |x|^k with the exponents used by the defaults unrolled.
double abs_pow(double x, double k) {
  const double s = std::abs(x);
  if (k == 1.0) return s;
  if (k == 2.0) return s * s;
  if (k == 3.0) return s * s * s;
  if (k == 1.5) return s * std::sqrt(s);
  if (k == 0.5) return std::sqrt(s);
  if (k == 0.0) return 1.0;
  return std::pow(s, k);
}

// sign(x) |x|^k, defined as 0 at x = 0 for every k >= 0.
double signed_pow(double x, double k) {
  if (x == 0.0) return 0.0;
  const double m = abs_pow(x, k);
  return x > 0.0 ? m : -m;
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

ProblemConfig prepared(ProblemConfig config, const ProblemOptions& options) {
  const auto violations = exponent_violations(config.exponents, config.dimension_proxy);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
    throw ConfigError(msg);
  }
  config.a.role = PotentialRole::kA;
  config.b.role = PotentialRole::kB;
  config.lambda.role = PotentialRole::kLambda;
  config.f.exponent = config.exponents.p;
  config.g.exponent = config.exponents.q;
  config.f.dimension = config.dimension_proxy;
  config.g.dimension = config.dimension_proxy;
  try {
    config.grid.validate();
    if (options.allow_hypothesis_violations) {
      validate_structure(config.f);
      validate_structure(config.g);
    } else {
      validate(config.f);
      validate(config.g);
    }
    validate(config.a);
    validate(config.b);
    validate(config.lambda);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return config;
}

std::vector<double> sample_or_config_error(const PotentialSpec& spec, const GridSpec& grid) {
  try {
    return sample_potential(spec, grid);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

void require_finite(double value, const char* term) {
  if (!std::isfinite(value)) throw NumericError(std::string("non-finite value in ") + term);
}

}  // namespace

ProblemConfig default_problem_config() { return ProblemConfig{}; }

std::vector<std::string> exponent_violations(const Exponents& e, double n) {
  std::vector<std::string> out;
  const auto fmt = format_number;
  if (!(e.p > 1.0) || !(e.p <= e.q) || !(e.q < n)) {
    out.push_back("exponent ordering 1 < p <= q < N fails (p = " + fmt(e.p) + ", q = " +
                  fmt(e.q) + ", N = " + fmt(n) + ")");
  }
  if (!(e.alpha >= 1.0) || !(e.alpha < e.p)) {
    out.push_back("alpha must satisfy 1 <= alpha < p (alpha = " + fmt(e.alpha) + ")");
  }
  if (!(e.beta >= 1.0) || !(e.beta < e.q)) {
    out.push_back("beta must satisfy 1 <= beta < q (beta = " + fmt(e.beta) + ")");
  }
  const double identity = e.alpha / e.p + e.beta / e.q;
  if (!(std::abs(identity - 1.0) <= 1e-12)) {
    out.push_back("exponent identity alpha/p + beta/q = " + fmt(identity) + " != 1");
  }
  const double sum = e.alpha + e.beta;
  if (e.p < e.q) {
    if (!(e.p < sum && sum < e.q)) {
      out.push_back("p < alpha + beta < q fails (alpha + beta = " + fmt(sum) + ")");
    }
  } else if (e.p == e.q && !(std::abs(sum - e.p) <= 1e-12)) {
    out.push_back("alpha + beta = p required when p = q (alpha + beta = " + fmt(sum) + ")");
  }
  return out;
}

Problem::Problem(ProblemConfig config, ProblemOptions options)
    : config_(prepared(std::move(config), options)),
      options_(options),
      a_(sample_or_config_error(config_.a, config_.grid)),
      b_(sample_or_config_error(config_.b, config_.grid)),
      lambda_(sample_or_config_error(config_.lambda, config_.grid)),
      f_(config_.f),
      g_(config_.g) {
  try {
    budget_ = validate_coupling(a_, b_, lambda_, config_.exponents);
  } catch (const InfeasibleError& e) {
    throw ConfigError(e.what());
  }
  budget_.lambda_floor = config_.lambda.ball_floor;
  budget_.floor_radius = config_.lambda.ball_radius;
  if (!budget_.feasible() && !options_.allow_infeasible_budget) {
    const auto& e = config_.exponents;
    throw ConfigError("coupling margin 1/q - delta*max(alpha/p, beta/q) = " +
                      format_number(budget_.margin) + " with delta = " +
                      format_number(budget_.delta) + " (need delta < 1 and margin > 0; at q = " +
                      format_number(e.q) + " delta must stay below " +
                      format_number(1.0 / e.q / std::max(e.alpha / e.p, e.beta / e.q)) + ")");
  }
  constexpr double kSpectralFloor = 1e-8;
  if (!(spectral_floor(a_, config_.grid, config_.exponents.p) > kSpectralFloor) ||
      !(spectral_floor(b_, config_.grid, config_.exponents.q) > kSpectralFloor)) {
    throw ConfigError("spectral floor of -Delta + a or -Delta + b is below 1e-8");
  }
}

void Problem::check_state(const CoupledState& s) const {
  if (!(s.u.grid() == config_.grid) || !(s.v.grid() == config_.grid)) {
    throw PreconditionError("state does not live on the problem grid");
  }
}

EnergyTerms assemble_terms(const CoupledState& s, const Problem& problem) {
  problem.check_state(s);
  const auto& e = problem.exponents();
  const GridSpec& grid = problem.grid();
  const std::size_t n = grid.node_count();
  const auto u = s.u.values();
  const auto v = s.v.values();
  const auto a = problem.a();
  const auto b = problem.b();
  const auto lam = problem.lambda();

  std::vector<double> mass_u(n), mass_v(n), prim_u(n), prim_v(n), coup(n), src_u(n), src_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    mass_u[i] = a[i] * abs_pow(u[i], e.p);
    mass_v[i] = b[i] * abs_pow(v[i], e.q);
    prim_u[i] = problem.f().primitive(u[i]);
    prim_v[i] = problem.g().primitive(v[i]);
    coup[i] = lam[i] == 0.0 ? 0.0 : lam[i] * abs_pow(u[i], e.alpha) * abs_pow(v[i], e.beta);
    src_u[i] = problem.f().f(u[i]) * u[i];
    src_v[i] = problem.g().f(v[i]) * v[i];
  }
  EnergyTerms t;
  t.norm_u = p_dirichlet_energy(s.u, e.p) + integrate(grid, mass_u);
  t.norm_v = p_dirichlet_energy(s.v, e.q) + integrate(grid, mass_v);
  t.primitive_u = integrate(grid, prim_u);
  t.primitive_v = integrate(grid, prim_v);
  t.coupling = integrate(grid, coup);
  t.source_u = integrate(grid, src_u);
  t.source_v = integrate(grid, src_v);
  require_finite(t.norm_u, "||u||^p_{a,p}");
  require_finite(t.norm_v, "||v||^q_{b,q}");
  require_finite(t.primitive_u, "int F(u)");
  require_finite(t.primitive_v, "int G(v)");
  require_finite(t.coupling, "coupling integral");
  require_finite(t.source_u, "int f(u) u");
  require_finite(t.source_v, "int g(v) v");
  return t;
}

double energy(const CoupledState& s, const Problem& problem) {
  const auto& e = problem.exponents();
  const EnergyTerms t = assemble_terms(s, problem);
  return t.norm_u / e.p + t.norm_v / e.q - t.primitive_u - t.primitive_v - t.coupling;
}

double coupling_term(const CoupledState& s, const Problem& problem) {
  return assemble_terms(s, problem).coupling;
}

double nehari_residual(const CoupledState& s, const Problem& problem) {
  const auto& e = problem.exponents();
  const EnergyTerms t = assemble_terms(s, problem);
  return t.norm_u / e.p + t.norm_v / e.q - t.coupling - t.source_u / e.p - t.source_v / e.q;
}

namespace {

// Pointwise derivative of (1/p)||u||^p_{a,p} and the coupling derivative,
// shared by the energy gradient and the Nehari normal.
struct Variations {
  std::vector<double> norm_u, norm_v, coupling_u, coupling_v;
};

Variations variations(const CoupledState& s, const Problem& problem) {
  problem.check_state(s);
  const auto& e = problem.exponents();
  const std::size_t n = problem.grid().node_count();
  const auto u = s.u.values();
  const auto v = s.v.values();
  Variations out;
  out.norm_u = p_dirichlet_gradient(s.u, e.p, problem.eps_reg());
  out.norm_v = p_dirichlet_gradient(s.v, e.q, problem.eps_reg());
  out.coupling_u.assign(n, 0.0);
  out.coupling_v.assign(n, 0.0);
  const auto a = problem.a();
  const auto b = problem.b();
  const auto lam = problem.lambda();
  for (std::size_t i = 0; i < n; ++i) {
    if (problem.grid().is_boundary(i)) {
      out.norm_u[i] = out.norm_v[i] = 0.0;
      continue;
    }
    out.norm_u[i] += a[i] * signed_pow(u[i], e.p - 1.0);
    out.norm_v[i] += b[i] * signed_pow(v[i], e.q - 1.0);
    if (lam[i] != 0.0) {
      out.coupling_u[i] =
          e.alpha * lam[i] * signed_pow(u[i], e.alpha - 1.0) * abs_pow(v[i], e.beta);
      out.coupling_v[i] =
          e.beta * lam[i] * abs_pow(u[i], e.alpha) * signed_pow(v[i], e.beta - 1.0);
    }
  }
  return out;
}

GridField finite_field(const GridSpec& grid, std::vector<double> values, const char* name) {
  for (double x : values) {
    if (!std::isfinite(x)) throw NumericError(std::string("non-finite value in ") + name);
  }
  return GridField(grid, std::move(values));
}

}  // namespace

CoupledState energy_gradient(const CoupledState& s, const Problem& problem) {
  Variations var = variations(s, problem);
  const GridSpec& grid = problem.grid();
  const auto u = s.u.values();
  const auto v = s.v.values();
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (grid.is_boundary(i)) continue;
    var.norm_u[i] -= problem.f().f(u[i]) + var.coupling_u[i];
    var.norm_v[i] -= problem.g().f(v[i]) + var.coupling_v[i];
  }
  return {finite_field(grid, std::move(var.norm_u), "energy gradient (u)"),
          finite_field(grid, std::move(var.norm_v), "energy gradient (v)")};
}

CoupledState nehari_normal(const CoupledState& s, const Problem& problem) {
  Variations var = variations(s, problem);
  const auto& e = problem.exponents();
  const GridSpec& grid = problem.grid();
  const auto u = s.u.values();
  const auto v = s.v.values();
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (grid.is_boundary(i)) continue;
    const double du = problem.f().derivative_times_t(u[i]) + problem.f().f(u[i]);
    const double dv = problem.g().derivative_times_t(v[i]) + problem.g().f(v[i]);
    var.norm_u[i] -= var.coupling_u[i] + du / e.p;
    var.norm_v[i] -= var.coupling_v[i] + dv / e.q;
  }
  return {finite_field(grid, std::move(var.norm_u), "Nehari normal (u)"),
          finite_field(grid, std::move(var.norm_v), "Nehari normal (v)")};
}

double nehari_pairing(const CoupledState& s, const CoupledState& residual,
                      const Problem& problem) {
  const auto& e = problem.exponents();
  const GridSpec& grid = problem.grid();
  std::vector<double> pu(grid.node_count()), pv(grid.node_count());
  for (std::size_t i = 0; i < pu.size(); ++i) {
    pu[i] = residual.u[i] * s.u[i];
    pv[i] = residual.v[i] * s.v[i];
  }
  return integrate(grid, pu) / e.p + integrate(grid, pv) / e.q;
}

double inner_product(const CoupledState& x, const CoupledState& y) {
  const GridSpec& grid = x.u.grid();
  std::vector<double> pu(grid.node_count()), pv(grid.node_count());
  for (std::size_t i = 0; i < pu.size(); ++i) {
    pu[i] = x.u[i] * y.u[i];
    pv[i] = x.v[i] * y.v[i];
  }
  return integrate(grid, pu) + integrate(grid, pv);
}

double combined_norm(const CoupledState& s, const Problem& problem) {
  const auto& e = problem.exponents();
  const EnergyTerms t = assemble_terms(s, problem);
  return std::pow(t.norm_u, 1.0 / e.p) + std::pow(t.norm_v, 1.0 / e.q);
}

}  // namespace pqnehari
