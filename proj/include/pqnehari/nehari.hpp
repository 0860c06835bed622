#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pqnehari/errors.hpp"
#include "pqnehari/functional.hpp"
#include "pqnehari/random.hpp"

namespace pqnehari {

// (t^(1/p) u, t^(1/q) v).
CoupledState scale_on_fiber(const CoupledState& s, double t, const Exponents& e);

// The fibering map h(t) = I(t^(1/p) u, t^(1/q) v) of one state. The norm
// and coupling terms are linear in t and computed once; only the
// nonlinearity integrals are re-evaluated per t.
class Fiber {
 public:
  Fiber(const CoupledState& s, const Problem& problem);

  // (1/p)||u||^p + (1/q)||v||^q - int lambda |u|^alpha |v|^beta.
  double lhs() const { return lhs_; }
  double value(double t) const;
  double rhs(double t) const;
  double derivative(double t) const { return lhs_ - rhs(t); }

 private:
  const CoupledState& state_;
  const Problem& problem_;
  double lhs_ = 0.0;
};

double fibering_value(const CoupledState& s, const Problem& problem, double t);
double fibering_derivative(const CoupledState& s, const Problem& problem, double t);

struct FiberSample {
  double t = 0.0;
  double h = 0.0;
  double hprime = 0.0;
  double rhs = 0.0;
};

struct FiberingReport {
  double t0 = 1.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  // Bracket-expansion trail plus the final point, sorted by t.
  std::vector<FiberSample> samples;
  int iterations = 0;
  double residual_at_t0 = 0.0;
};

struct Projection {
  CoupledState state;
  FiberingReport report;
};

// Unique Nehari point on the fiber of s: bracket by doubling/halving from
// t = 1 (at most 60 steps each way), bisect to relative width 1e-12.
// Throws PreconditionError on a zero state and ProjectionError when no
// bracket exists, the RHS trail is not increasing, or the residual check
// fails.
Projection project(const CoupledState& s, const Problem& problem);

enum class DescentMetric {
  kL2,       // step along the pointwise residual
  kSobolev,  // step along (I - Delta_h)^-1 applied to the residual
  // Limited-memory BFGS on the (I - Delta_h)^-1-scaled residual; falls back
  // to the kSobolev direction whenever the update is not a descent direction.
  kQuasiNewton,
};

std::string to_string(DescentMetric metric);
DescentMetric descent_metric_from_string(const std::string& name);

enum class PinnedComponent { kNone, kU, kV };

struct SolverOptions {
  double tol = 1e-6;
  int max_iters = 5000;
  int multistart = 8;
  std::uint64_t seed = 42;
  DescentMetric metric = DescentMetric::kQuasiNewton;
  // Correction pairs kept by kQuasiNewton.
  int memory = 8;
  double armijo = 1e-4;
  int max_halvings = 40;
  // Worker threads for independent solves; 0 = hardware concurrency.
  int threads = 1;
  // The named component is held at zero (scalar sub-problems).
  PinnedComponent pin = PinnedComponent::kNone;
};

struct TraceEntry {
  int iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct SolveReport {
  CoupledState state;
  double energy_value = 0.0;
  double nehari_residual = 0.0;
  // L2 norm of the residual minus its component along the Nehari normal.
  double gradient_norm = 0.0;
  bool converged = false;
  // "converged", "max_iters", or the failure kind for multi-start members.
  std::string status;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  double mass_fraction_u = 0.0;
  double mass_fraction_v = 0.0;
  bool semitrivial = false;
  std::uint64_t init_seed = 0;
};

// Thrown when the line search exhausts its halvings; carries the trace.
class StalledError : public Error {
 public:
  StalledError(const std::string& what, std::vector<TraceEntry> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  std::vector<TraceEntry> trace_;
};

// Mass share int u^2 / (int u^2 + int v^2) below which a component counts as
// vanished.
inline constexpr double kMassFractionThreshold = 1e-6;

// Projected descent: step along the negative (preconditioned) residual,
// re-project onto the manifold, accept by Armijo backtracking. Stops when
// the tangential gradient norm is <= tol or after max_iters iterations.
// Throws StalledError or BlowUpError (energy below -1e12).
SolveReport minimize_ground_state(const CoupledState& init, const Problem& problem,
                                  const SolverOptions& options);

enum class RandomStateKind {
  kPositiveBumps,  // co-located positive bumps in both components
  kSigned,         // sums of bumps with random signs and centres
};

// Smooth random state vanishing on the boundary. Bump centres lie in
// |c_k| <= L/8, widths in [0.5, 2], amplitudes in [0.5, 2].
CoupledState random_state(const GridSpec& grid, Rng& rng, RandomStateKind kind);

struct MultiStartResult {
  // Ordered by (energy, init seed); failed runs last.
  std::vector<SolveReport> runs;

  // Lowest converged run, or the first run if none converged.
  const SolveReport& best() const;
};

// opts.multistart random inits (seeded from opts.seed) plus the supplied
// extra inits, solved independently on opts.threads workers. Pinned
// components are zeroed in every init.
MultiStartResult multistart_ground_state(const Problem& problem, const SolverOptions& options,
                                         const std::vector<CoupledState>& extra_inits = {});

struct AbsolutizeResult {
  Projection projection;
  double energy = 0.0;
  // Energy of the projection of the signed input.
  double signed_energy = 0.0;
};

// Projection of (|u|, |v|). Requires lambda >= 0 on the grid and
// F(-t) <= F(t) at the state's values; throws NumericError if the
// absolutized energy exceeds the signed one.
AbsolutizeResult absolutize_project(const CoupledState& s, const Problem& problem);

struct NormFloor {
  double floor = 0.0;
  std::vector<double> norms;
};

// Projects n_samples signed random states and returns the smallest combined
// norm ||u||_{a,p} + ||v||_{b,q}. n_samples >= 10.
NormFloor norm_lower_bound_probe(const Problem& problem, int n_samples, std::uint64_t seed,
                                 int threads = 1);

// Solves (I - Delta_h) z = r with zero boundary values.
std::vector<double> sobolev_smooth(const GridSpec& grid, std::span<const double> r);

}  // namespace pqnehari
