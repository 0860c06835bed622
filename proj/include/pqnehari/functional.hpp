#pragma once

#include <span>
#include <string>
#include <vector>

#include "pqnehari/grid.hpp"
#include "pqnehari/nonlinearity.hpp"
#include "pqnehari/potential.hpp"

namespace pqnehari {

struct ProblemConfig {
  Exponents exponents;
  // N used for the critical exponents; the grid dimension is a desk-scale
  // stand-in and does not enter the growth constraints.
  double dimension_proxy = 4.0;
  PotentialSpec a = constant_potential(PotentialRole::kA, 1.0);
  PotentialSpec b = constant_potential(PotentialRole::kB, 1.0);
  PotentialSpec lambda = constant_potential(PotentialRole::kLambda, 0.3);
  NonlinearitySpec f;
  NonlinearitySpec g;
  GridSpec grid;
};

// The default instance: p=2, q=3, alpha=1, beta=1.5, a=b=1, lambda=0.3,
// log-power nonlinearities with gamma=1, 1-D grid L=16, n=512.
ProblemConfig default_problem_config();

// Checks the exponent constraints and returns a message per violation
// (empty when valid). Does not look at the potentials.
std::vector<std::string> exponent_violations(const Exponents& e, double dimension_proxy);

struct CoupledState {
  GridField u;
  GridField v;

  bool is_zero() const { return u.is_zero() && v.is_zero(); }
};

struct ProblemOptions {
  // Accept configurations whose coupling margin is not positive (used by the
  // verification harness to report instead of throw).
  bool allow_infeasible_budget = false;
  // Accept well-formed nonlinearities that break the growth hypotheses
  // (e.g. pure power r = p), so the audit can report them.
  bool allow_hypothesis_violations = false;
  double eps_reg = 1e-8;
};

// A validated configuration with sampled coefficient fields and primed
// nonlinearity caches. Immutable; share it across threads by const reference.
class Problem {
 public:
  explicit Problem(ProblemConfig config, ProblemOptions options = {});

  const ProblemConfig& config() const { return config_; }
  const Exponents& exponents() const { return config_.exponents; }
  const GridSpec& grid() const { return config_.grid; }
  const CouplingBudget& budget() const { return budget_; }
  double eps_reg() const { return options_.eps_reg; }

  std::span<const double> a() const { return a_; }
  std::span<const double> b() const { return b_; }
  std::span<const double> lambda() const { return lambda_; }
  const Nonlinearity& f() const { return f_; }
  const Nonlinearity& g() const { return g_; }

  // Throws PreconditionError unless both fields live on this grid.
  void check_state(const CoupledState& s) const;

 private:
  ProblemConfig config_;
  ProblemOptions options_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> lambda_;
  Nonlinearity f_;
  Nonlinearity g_;
  CouplingBudget budget_;
};

// Integrals that make up the energy and the Nehari constraint.
struct EnergyTerms {
  double norm_u = 0.0;       // ||u||^p_{a,p}
  double norm_v = 0.0;       // ||v||^q_{b,q}
  double primitive_u = 0.0;  // int F(u)
  double primitive_v = 0.0;  // int G(v)
  double coupling = 0.0;     // int lambda |u|^alpha |v|^beta
  double source_u = 0.0;     // int f(u) u
  double source_v = 0.0;     // int g(v) v
};

// Throws NumericError naming the first non-finite term.
EnergyTerms assemble_terms(const CoupledState& s, const Problem& problem);

double energy(const CoupledState& s, const Problem& problem);
double coupling_term(const CoupledState& s, const Problem& problem);
double nehari_residual(const CoupledState& s, const Problem& problem);

// Pointwise first variation (R_u, R_v): the node inner product with a test
// pair equals the directional derivative of the energy.
CoupledState energy_gradient(const CoupledState& s, const Problem& problem);

// <R, (u/p, v/q)>, the second assembly of the Nehari constraint value.
double nehari_pairing(const CoupledState& s, const CoupledState& residual, const Problem& problem);

// Pointwise gradient of the Nehari constraint value.
CoupledState nehari_normal(const CoupledState& s, const Problem& problem);

// sum over both components of integrate(x * y).
double inner_product(const CoupledState& x, const CoupledState& y);

// ||u||_{a,p} + ||v||_{b,q}.
double combined_norm(const CoupledState& s, const Problem& problem);

}  // namespace pqnehari
