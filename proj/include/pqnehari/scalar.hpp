#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pqnehari/nehari.hpp"

namespace pqnehari {

enum class Side { kA, kB };

// Fingerprint of everything except the coupling field: reports that share
// it belong to one configuration family and may be compared.
std::string family_fingerprint(const ProblemConfig& config);

struct ScalarReport {
  Side side = Side::kA;
  GridField field;
  double level = 0.0;
  double residual = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::string fingerprint;
};

// Nehari minimization of (1/p)||u||^p - int F(u) (or the b-side analogue)
// through the coupled solver with the other component pinned to zero.
// Multi-start as configured; extra inits are placed on the solved side.
ScalarReport solve_scalar(Side side, const Problem& problem, const SolverOptions& options,
                          const std::vector<GridField>& extra_inits = {});

// A coupled multi-start that also starts from the two semitrivial scalar
// minimizers and from their combination, so the reported level never
// exceeds the semitrivial candidates.
MultiStartResult solve_coupled_with_insertions(const Problem& problem,
                                               const SolverOptions& options,
                                               const ScalarReport& sa, const ScalarReport& sb);

struct SemitrivialVerdict {
  bool fully_nontrivial = false;
  std::string verdict;  // "fully-nontrivial" or "semitrivial-risk"
  // Which test failed when the verdict is semitrivial-risk (empty otherwise).
  std::string binding;
  double coupled_level = 0.0;
  double scalar_level_a = 0.0;
  double scalar_level_b = 0.0;
  double gap = 0.0;  // min scalar level - coupled level
  double mass_fraction_u = 0.0;
  double mass_fraction_v = 0.0;
};

inline constexpr double kLevelSlack = 1e-8;

// fully-nontrivial iff the coupled level is below min(scalar levels) - slack
// and both components carry a mass fraction >= 1e-6. Throws
// ComparisonError when the fingerprints differ.
SemitrivialVerdict compare_semitrivial(const SolveReport& coupled,
                                       const std::string& coupled_fingerprint,
                                       const ScalarReport& sa, const ScalarReport& sb,
                                       double slack = kLevelSlack);

// The displayed bound for the test state built from two scalar minimizers:
// I(t0^(1/p) u0, t0^(1/q) v0) <= t0 ((1/p)||u0||^p + (1/q)||v0||^q
//                                    - lambda0 int_{B_R} u0^alpha v0^beta).
struct TestStateBound {
  double t0 = 0.0;
  double energy = 0.0;
  double bound = 0.0;
  bool holds = false;
};

TestStateBound semitrivial_test_state_bound(const Problem& problem, const GridField& ua,
                                            const GridField& vb);

struct PeriodicComparison {
  double periodic_level = 0.0;
  // Energy of the projected periodic minimizer under the perturbed functional.
  double upper_bound = 0.0;
  double asymptotic_level = 0.0;
  bool strict = false;        // upper_bound < periodic_level - 1e-8
  bool direct_below = false;  // asymptotic_level <= upper_bound + 1e-6
  bool passed() const { return strict && direct_below; }
};

// Solves the periodic problem, absolutizes and projects its minimizer under
// the perturbed functional to bound the perturbed level, then solves the
// perturbed problem directly (including that projected state as an init).
PeriodicComparison compare_periodic_asymptotic(const ProblemConfig& periodic,
                                               const std::array<DecayPerturbation, 3>& perturbations,
                                               const SolverOptions& options);

struct LambdaSweepPoint {
  double lambda0 = 0.0;  // the swept parameter value
  bool feasible = true;
  double coupled_level = 0.0;
  double min_scalar_level = 0.0;
  std::string verdict;  // "fully-nontrivial", "semitrivial-risk" or "infeasible"
};

// Applies the ball floor lambda0 on |x| <= radius to the coupling field.
ProblemConfig with_lambda_floor(const ProblemConfig& config, double lambda0, double radius);

// Rescales every part of the coupling field so that the coupling budget
// delta equals `delta`. Throws ConfigError when the field is identically zero.
ProblemConfig with_coupling_budget(const ProblemConfig& config, double delta);

using ConfigTransform = std::function<ProblemConfig(const ProblemConfig&, double)>;

// Coupled solves at transform(config, value) for each value, against scalar
// levels computed once from `config` (they do not depend on the coupling).
// Points run on options.threads workers; rows keep the order of `values`.
std::vector<LambdaSweepPoint> sweep_levels(const ProblemConfig& config,
                                           const std::vector<double>& values,
                                           const ConfigTransform& transform,
                                           const SolverOptions& options);

std::vector<LambdaSweepPoint> sweep_lambda_floor(const ProblemConfig& config,
                                                 const std::vector<double>& values, double radius,
                                                 const SolverOptions& options);

struct LambdaThreshold {
  bool bracketed = false;
  double lower = 0.0;  // largest probed value with a semitrivial-risk verdict
  double upper = 0.0;  // smallest probed value with a fully-nontrivial verdict
};

// Bisection on the verdict boundary over [0, lambda_max].
LambdaThreshold locate_lambda_threshold(const ProblemConfig& config, double lambda_max,
                                        double radius, const SolverOptions& options,
                                        int bisection_steps);

}  // namespace pqnehari
