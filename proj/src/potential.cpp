#include "pqnehari/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pqnehari/errors.hpp"

namespace pqnehari {

std::string to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::kConstant:
      return "constant";
    case PotentialFamily::kPeriodicTrig:
      return "periodic-trig";
    case PotentialFamily::kAsymptoticallyPeriodic:
      return "asymptotically-periodic";
  }
  return "unknown";
}

std::string to_string(PotentialRole role) {
  switch (role) {
    case PotentialRole::kA:
      return "a";
    case PotentialRole::kB:
      return "b";
    case PotentialRole::kLambda:
      return "lambda";
  }
  return "unknown";
}

std::string to_string(DecayShape shape) {
  return shape == DecayShape::kExponential ? "exponential" : "gaussian";
}

PotentialFamily potential_family_from_string(const std::string& name) {
  if (name == "constant") return PotentialFamily::kConstant;
  if (name == "periodic-trig") return PotentialFamily::kPeriodicTrig;
  if (name == "asymptotically-periodic") return PotentialFamily::kAsymptoticallyPeriodic;
  throw ConfigError("unknown potential family '" + name +
                    "' (expected constant, periodic-trig or asymptotically-periodic)");
}

DecayShape decay_shape_from_string(const std::string& name) {
  if (name == "exponential") return DecayShape::kExponential;
  if (name == "gaussian") return DecayShape::kGaussian;
  throw ConfigError("unknown decay shape '" + name + "' (expected exponential or gaussian)");
}

namespace {

double radius_sq(const std::array<double, 3>& x, int dimension) {
  double r2 = 0.0;
  for (int k = 0; k < dimension; ++k) r2 += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
  return r2;
}

double periodic_value(const PotentialSpec& spec, const std::array<double, 3>& x, int dimension) {
  if (spec.family == PotentialFamily::kConstant || spec.modulation_amplitude == 0.0) {
    return spec.base_level;
  }
  double s = 0.0;
  for (int k = 0; k < dimension; ++k) {
    s += std::cos(2.0 * std::numbers::pi * x[static_cast<std::size_t>(k)]);
  }
  return spec.base_level + spec.modulation_amplitude * s / dimension;
}

}  // namespace

double DecayPerturbation::operator()(const std::array<double, 3>& x, int dimension) const {
  if (amplitude == 0.0) return 0.0;
  const double r2 = radius_sq(x, dimension);
  const double arg = shape == DecayShape::kExponential ? rate * std::sqrt(r2) : rate * r2;
  return amplitude * std::exp(-arg);
}

void validate(const PotentialSpec& spec) {
  if (!std::isfinite(spec.base_level) || !std::isfinite(spec.modulation_amplitude) ||
      !std::isfinite(spec.decay.amplitude) || !std::isfinite(spec.decay.rate) ||
      !std::isfinite(spec.ball_floor) || !std::isfinite(spec.ball_radius)) {
    throw ParameterError("potential " + to_string(spec.role) + " has a non-finite field");
  }
  if (spec.role != PotentialRole::kLambda && spec.base_level < 0.0) {
    throw ParameterError("potential " + to_string(spec.role) + " base_level must be >= 0");
  }
  if (spec.modulation_amplitude < 0.0) {
    throw ParameterError("potential modulation_amplitude must be >= 0");
  }
  if (spec.family == PotentialFamily::kConstant && spec.modulation_amplitude != 0.0) {
    throw ParameterError("constant potential cannot carry a modulation amplitude");
  }
  if (spec.family != PotentialFamily::kAsymptoticallyPeriodic && spec.decay.amplitude != 0.0) {
    throw ParameterError("decay perturbation requires the asymptotically-periodic family");
  }
  if (spec.decay.amplitude != 0.0 && !(spec.decay.rate > 0.0)) {
    throw ParameterError("decay rate must be positive");
  }
  if (spec.ball_floor < 0.0) throw ParameterError("ball_floor must be >= 0");
  if (spec.ball_floor > 0.0 && !(spec.ball_radius > 0.0)) {
    throw ParameterError("ball_floor > 0 requires ball_radius > 0");
  }
}

double eval_potential(const PotentialSpec& spec, const std::array<double, 3>& x, int dimension) {
  double value = periodic_value(spec, x, dimension);
  if (spec.family == PotentialFamily::kAsymptoticallyPeriodic) value += spec.decay(x, dimension);
  if (spec.ball_floor > 0.0 && radius_sq(x, dimension) <= spec.ball_radius * spec.ball_radius) {
    value = std::max(value, spec.ball_floor);
  }
  return value;
}

PotentialSpec periodic_part(const PotentialSpec& spec) {
  PotentialSpec out = spec;
  out.decay.amplitude = 0.0;
  if (out.family == PotentialFamily::kAsymptoticallyPeriodic) {
    out.family = out.modulation_amplitude == 0.0 ? PotentialFamily::kConstant
                                                 : PotentialFamily::kPeriodicTrig;
  }
  return out;
}

std::vector<double> sample_potential(const PotentialSpec& spec, const GridSpec& grid) {
  validate(spec);
  std::vector<double> out(grid.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = eval_potential(spec, grid.coordinates(i), grid.dimension);
    if (spec.role != PotentialRole::kLambda && out[i] < 0.0) {
      throw PreconditionError("potential " + to_string(spec.role) + " is negative at node " +
                              std::to_string(i));
    }
  }
  return out;
}

bool CouplingBudget::feasible() const { return delta < 1.0 && margin > 0.0; }

CouplingBudget validate_coupling(std::span<const double> a, std::span<const double> b,
                                 std::span<const double> lambda, const Exponents& e) {
  if (a.size() != b.size() || a.size() != lambda.size()) {
    throw PreconditionError("potential samples differ in size");
  }
  double delta = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (lambda[i] == 0.0) continue;
    const double denom = std::pow(a[i], e.alpha / e.p) * std::pow(b[i], e.beta / e.q);
    if (!(denom > 0.0)) {
      std::ostringstream msg;
      msg << "coupling bound unattainable: a or b vanishes at node " << i
          << " where lambda = " << lambda[i];
      throw InfeasibleError(msg.str());
    }
    delta = std::max(delta, std::abs(lambda[i]) / denom);
  }
  if (delta > 0.0) delta += 1e-12;
  CouplingBudget budget;
  budget.delta = delta;
  budget.margin = 1.0 / e.q - delta * std::max(e.alpha / e.p, e.beta / e.q);
  return budget;
}

CouplingBudget validate_coupling(const PotentialSpec& a, const PotentialSpec& b,
                                 const PotentialSpec& lambda, const Exponents& exponents,
                                 const GridSpec& grid) {
  const auto sa = sample_potential(a, grid);
  const auto sb = sample_potential(b, grid);
  const auto sl = sample_potential(lambda, grid);
  CouplingBudget budget = validate_coupling(sa, sb, sl, exponents);
  budget.lambda_floor = lambda.ball_floor;
  budget.floor_radius = lambda.ball_radius;
  return budget;
}

PotentialTriple make_asymptotic_pair(const PotentialTriple& periodic,
                                     const std::array<DecayPerturbation, 3>& perturbations,
                                     const GridSpec& grid) {
  const std::array<const char*, 3> names{"a", "b", "lambda"};
  const std::array<double, 3> signs{-1.0, -1.0, 1.0};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& d = perturbations[k];
    if (!(d.amplitude * signs[k] > 0.0)) {
      throw PreconditionError(std::string("perturbation of ") + names[k] + " must be strictly " +
                              (signs[k] < 0 ? "negative" : "positive"));
    }
    if (!(d.rate > 0.0) || !std::isfinite(d.rate)) {
      throw PreconditionError(std::string("perturbation of ") + names[k] +
                              " needs a positive decay rate");
    }
  }
  std::array<PotentialSpec, 3> out{periodic.a, periodic.b, periodic.lambda};
  for (std::size_t k = 0; k < 3; ++k) {
    if (out[k].family == PotentialFamily::kAsymptoticallyPeriodic) {
      throw PreconditionError(std::string("potential ") + names[k] + " is not periodic");
    }
    out[k].family = PotentialFamily::kAsymptoticallyPeriodic;
    out[k].decay = perturbations[k];
    validate(out[k]);
  }
  // The ordering is the sign of the perturbation itself: far nodes where the
  // sum rounds back to the periodic value still carry a signed difference.
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const auto x = grid.coordinates(i);
    for (std::size_t k = 0; k < 3; ++k) {
      const double diff = perturbations[k](x, grid.dimension);
      if (!(diff * signs[k] > 0.0)) {
        throw PreconditionError(std::string("strict ordering of ") + names[k] +
                                " fails at node " + std::to_string(i) +
                                " (perturbation underflows)");
      }
    }
  }
  for (std::size_t k = 0; k < 2; ++k) sample_potential(out[k], grid);
  return {out[0], out[1], out[2]};
}

double spectral_floor(std::span<const double> a, const GridSpec& grid, double p) {
  if (a.size() != grid.node_count()) throw PreconditionError("potential size mismatch");
  double min_a = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (grid.is_boundary(i)) continue;
    min_a = first ? a[i] : std::min(min_a, a[i]);
    first = false;
  }
  double lowest;
  if (p == 2.0) {
    const double h = grid.spacing();
    const double s = std::sin(std::numbers::pi * h / (4.0 * grid.half_width));
    lowest = grid.dimension * 4.0 / (h * h) * s * s;
  } else {
    lowest = std::pow(2.0 * grid.half_width, -p);
  }
  return lowest + min_a;
}

}  // namespace pqnehari
