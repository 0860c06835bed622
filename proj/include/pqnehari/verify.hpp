#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pqnehari/nehari.hpp"

namespace pqnehari {

enum class CheckVerdict { kPass, kFail, kSkipped };

std::string to_string(CheckVerdict verdict);

struct CheckResult {
  std::string name;
  // The property under test, in words.
  std::string anchor;
  CheckVerdict verdict = CheckVerdict::kSkipped;
  // Smallest slack over the samples (>= 0 on a pass); empty when skipped.
  std::optional<double> margin;
  int samples = 0;
  // Reason for a skip or failure; free-form context otherwise.
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  int n_samples = 0;
  // One entry per registry name, in registry order.
  std::vector<CheckResult> checks;

  bool any_failed() const;
  const CheckResult* find(std::string_view name) const;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  int n_samples = 50;
  // Solver settings for the checks that need ground states; its seed is
  // replaced by one derived from `seed`.
  SolverOptions solver;
  // Perturbations used by the level comparison when the configured
  // potentials are not already asymptotically periodic.
  std::array<DecayPerturbation, 3> perturbations{
      DecayPerturbation{-0.2, 1.0, DecayShape::kExponential},
      DecayPerturbation{-0.2, 1.0, DecayShape::kExponential},
      DecayPerturbation{0.1, 1.0, DecayShape::kExponential}};
  // Workers across checks; 0 = hardware concurrency.
  int threads = 1;
};

// Check names in report order.
std::span<const std::string_view> check_registry();

// Registry names without an implementation and implementations without a
// registry entry; empty when the two agree.
std::vector<std::string> registry_self_test();

// Runs every registered check. Failures inside a check are recorded on that
// check and never abort the battery. When the coupling margin is not
// positive the young_margin check fails and every later check is skipped.
// The report depends only on (config, seed, n_samples, solver settings).
VerificationReport run_all(const ProblemConfig& config, const VerifyOptions& options);

struct GradientProbe {
  double analytic = 0.0;
  double finite_difference = 0.0;
  // |analytic - fd| / max(|analytic|, 1e-2 ||R|| ||d||); the floor keeps
  // near-orthogonal directions from inflating the ratio.
  double relative_error = 0.0;
};

// Directional derivative of the energy along d from the assembled gradient
// and from a Richardson-extrapolated central difference.
GradientProbe probe_gradient(const CoupledState& s, const CoupledState& d, const Problem& problem);

// (u * wu, v * wv): vanishes wherever the state does, so the |u|^alpha
// coupling is differentiable along it even at alpha = 1.
CoupledState multiplicative_direction(const CoupledState& s, const CoupledState& weights);

struct FiberScan {
  int sign_changes = 0;
  bool rhs_increasing = false;
  // Smallest relative increment of the RHS between consecutive scan points.
  double min_rhs_increment = 0.0;
};

// h' and the RHS at `points` log-spaced t over [t0 / 10^(decades/2),
// t0 * 10^(decades/2)].
FiberScan scan_fiber(const CoupledState& s, const Problem& problem, double t0, double decades,
                     int points);

struct ComponentPositivity {
  // "positive", "identically-zero" or "not-positive".
  std::string status;
  double interior_min = 0.0;  // over non-boundary nodes
  double core_min = 0.0;      // over nodes further than the collar from the boundary
};

struct PositivityReport {
  // "pass", "semitrivial-positive" or "fail".
  std::string verdict;
  ComponentPositivity u;
  ComponentPositivity v;
};

// A nonzero component is positive when its interior minimum is >= -tol and
// its minimum beyond `collar` cells from the boundary is > 0. Both positive
// gives "pass"; one positive and one identically zero gives
// "semitrivial-positive".
PositivityReport check_positivity(const CoupledState& s, double tol, int collar = 2);

}  // namespace pqnehari
