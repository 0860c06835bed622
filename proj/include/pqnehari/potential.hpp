#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pqnehari/grid.hpp"

namespace pqnehari {

enum class PotentialFamily { kConstant, kPeriodicTrig, kAsymptoticallyPeriodic };
enum class PotentialRole { kA, kB, kLambda };
enum class DecayShape { kExponential, kGaussian };

std::string to_string(PotentialFamily family);
std::string to_string(PotentialRole role);
std::string to_string(DecayShape shape);
PotentialFamily potential_family_from_string(const std::string& name);
DecayShape decay_shape_from_string(const std::string& name);

// amplitude * exp(-rate |x|) or amplitude * exp(-rate |x|^2).
struct DecayPerturbation {
  double amplitude = 0.0;
  double rate = 1.0;
  DecayShape shape = DecayShape::kExponential;

  double operator()(const std::array<double, 3>& x, int dimension) const;
};

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::kConstant;
  PotentialRole role = PotentialRole::kA;
  double base_level = 1.0;
  // Weight of the 1-periodic part (1/d) sum_k cos(2 pi x_k).
  double modulation_amplitude = 0.0;
  // Added on top of the periodic part for the asymptotically periodic family.
  DecayPerturbation decay;
  // The value is raised to at least ball_floor on |x| <= ball_radius.
  double ball_floor = 0.0;
  double ball_radius = 0.0;
};

inline PotentialSpec constant_potential(PotentialRole role, double level) {
  PotentialSpec spec;
  spec.role = role;
  spec.base_level = level;
  return spec;
}

// Throws ParameterError on inconsistent fields (negative levels, floor
// without a radius, decay on a non-asymptotic family).
void validate(const PotentialSpec& spec);

double eval_potential(const PotentialSpec& spec, const std::array<double, 3>& x, int dimension);

// The spec with the asymptotic decay term removed.
PotentialSpec periodic_part(const PotentialSpec& spec);

// Node samples of the potential; throws PreconditionError when a role-a or
// role-b field is negative somewhere.
std::vector<double> sample_potential(const PotentialSpec& spec, const GridSpec& grid);

struct Exponents {
  double p = 2.0;
  double q = 3.0;
  double alpha = 1.0;
  double beta = 1.5;

  friend bool operator==(const Exponents&, const Exponents&) = default;
};

struct CouplingBudget {
  double delta = 0.0;
  double margin = 0.0;
  double lambda_floor = 0.0;
  double floor_radius = 0.0;

  // delta < 1 and margin > 0.
  bool feasible() const;
};

// Smallest delta with |lambda| <= delta a^(alpha/p) b^(beta/q) over the
// given samples, plus a 1e-12 pad when delta > 0. Throws InfeasibleError
// where a or b vanishes under a nonzero lambda.
CouplingBudget validate_coupling(std::span<const double> a, std::span<const double> b,
                                 std::span<const double> lambda, const Exponents& exponents);
CouplingBudget validate_coupling(const PotentialSpec& a, const PotentialSpec& b,
                                 const PotentialSpec& lambda, const Exponents& exponents,
                                 const GridSpec& grid);

struct PotentialTriple {
  PotentialSpec a;
  PotentialSpec b;
  PotentialSpec lambda;
};

// Attaches the decaying perturbations to the periodic triple. Requires a
// strictly negative amplitude for a and b, strictly positive for lambda, a
// positive rate, and verifies the strict orderings at every grid node.
PotentialTriple make_asymptotic_pair(const PotentialTriple& periodic,
                                     const std::array<DecayPerturbation, 3>& perturbations,
                                     const GridSpec& grid);

// Lower bound on the smallest Rayleigh quotient of the zero-boundary operator
// -Delta_h + a on the grid: the exact discrete Laplacian eigenvalue when
// p = 2, the box Poincare constant (2L)^-p otherwise, plus min a.
double spectral_floor(std::span<const double> a, const GridSpec& grid, double p);

}  // namespace pqnehari
