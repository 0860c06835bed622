#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pqnehari {

enum class NonlinearityKind {
  kLogPower,   // f(t) = |t|^(e-2) t ln^gamma(1+|t|)
  kPurePower,  // f(t) = |t|^(r-2) t
  kTabulated,  // odd extension of a piecewise-linear table on t >= 0
};

std::string to_string(NonlinearityKind kind);
NonlinearityKind nonlinearity_kind_from_string(const std::string& name);

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::kLogPower;
  // The p (for f) or q (for g) the nonlinearity is paired with.
  double exponent = 2.0;
  double gamma = 1.0;
  double power = 4.0;
  // Space dimension used for the Sobolev critical exponent.
  double dimension = 4.0;
  // (t, f(t)) knots for kTabulated; t strictly increasing, starting at (0, 0).
  std::vector<std::pair<double, double>> table;

  // N e / (N - e), or +inf when e >= N.
  double critical_exponent() const;
};

// Throws ParameterError when the spec is malformed (evaluation would be
// meaningless): exponent <= 1, gamma < 1, pure-power r <= 1, bad tables.
void validate_structure(const NonlinearitySpec& spec);

// validate_structure plus the hypotheses the solver relies on, i.e.
// exponent < r < critical exponent for the pure-power family.
void validate(const NonlinearitySpec& spec);

// Validated nonlinearity with a bucketed cache of the primitive F.
//
// F is tabulated at geometric breakpoints 2^(k/8) by adaptive Gauss-Kronrod
// quadrature; an evaluation adds the integral from the nearest breakpoint
// below |t| with an 8-point Gauss-Legendre rule. The interval never spans
// more than a factor 2^(1/8), so the rule is exact to round-off for the
// built-in families. Immutable after construction, safe to share across
// threads.
class Nonlinearity {
 public:
  explicit Nonlinearity(NonlinearitySpec spec);

  const NonlinearitySpec& spec() const { return spec_; }

  double f(double t) const;
  double primitive(double t) const;
  // f'(t); throws SingularityError at t = 0 when the derivative blows up.
  double derivative(double t) const;
  // f'(t) t, continuous at 0 with limit 0 for every admissible spec.
  double derivative_times_t(double t) const;

 private:
  double primitive_positive(double t) const;

  NonlinearitySpec spec_;
  std::vector<double> breakpoints_;
  std::vector<double> cumulative_;
};

// Free-standing evaluations. eval_F integrates from 0 directly (no cache).
double eval_f(const NonlinearitySpec& spec, double t);
double eval_F(const NonlinearitySpec& spec, double t);
double eval_fprime(const NonlinearitySpec& spec, double t);

struct ConditionVerdict {
  std::string name;
  bool pass = false;
  // Smallest slack observed; negative when the condition is violated.
  double worst_margin = 0.0;
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionVerdict> verdicts;
  // Observed sup of f'(t) t / f(t) over the probe set (reported, not judged).
  double sup_log_derivative = 0.0;

  bool all_pass() const;
  const ConditionVerdict* find(const std::string& name) const;
};

// Sampled audit of the structural hypotheses on f. Verdicts mean "holds on
// the probe set", never "proved". Samples must be sorted, strictly positive,
// at least 8 points spanning three decades.
ConditionReport audit_conditions(const NonlinearitySpec& spec,
                                 std::span<const double> t_samples);

struct ArExhibit {
  double theta = 0.0;
  bool found = false;
  double t = 0.0;
  // theta F(t) - f(t) t at the exhibited t (> 0 when found).
  double excess = 0.0;
};

// For each theta, searches a log-spaced scan over [1e-6, 1e15] for a t with
// theta F(t) > f(t) t, showing that the superlinearity condition with that
// theta fails.
std::vector<ArExhibit> exhibit_ar_failure(const NonlinearitySpec& spec,
                                          std::span<const double> thetas);

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace pqnehari
