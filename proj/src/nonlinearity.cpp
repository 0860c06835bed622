#include "pqnehari/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pqnehari/errors.hpp"

namespace pqnehari {

namespace {

constexpr int kStepsPerOctave = 8;
constexpr int kLowestOctave = -30;
constexpr int kHighestOctave = 64;
constexpr double kQuadratureTolerance = 1e-14;

double sign_of(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

// |s|^k for s >= 0 with the common integer cases unrolled.
double power_of(double s, double k) {
  if (k == 1.0) return s;
  if (k == 2.0) return s * s;
  if (k == 0.0) return 1.0;
  return std::pow(s, k);
}

double log_power_positive(const NonlinearitySpec& spec, double s) {
  const double l = std::log1p(s);
  const double lg = spec.gamma == 1.0 ? l : std::pow(l, spec.gamma);
  return power_of(s, spec.exponent - 1.0) * lg;
}

double log_power_derivative_positive(const NonlinearitySpec& spec, double s) {
  const double l = std::log1p(s);
  const double e = spec.exponent;
  const double g = spec.gamma;
  const double lg = g == 1.0 ? l : std::pow(l, g);
  const double lg1 = g == 1.0 ? 1.0 : std::pow(l, g - 1.0);
  return (e - 1.0) * power_of(s, e - 2.0) * lg +
         power_of(s, e - 1.0) * g * lg1 / (1.0 + s);
}

// Index of the table segment containing s (s >= 0), clamped to the last one.
std::size_t table_segment(const NonlinearitySpec& spec, double s) {
  const auto& tab = spec.table;
  auto it = std::upper_bound(tab.begin(), tab.end(), s,
                             [](double v, const auto& knot) { return v < knot.first; });
  std::size_t idx = static_cast<std::size_t>(it - tab.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, tab.size() - 2);
}

double table_slope(const NonlinearitySpec& spec, std::size_t seg) {
  const auto& a = spec.table[seg];
  const auto& b = spec.table[seg + 1];
  return (b.second - a.second) / (b.first - a.first);
}

double tabulated_positive(const NonlinearitySpec& spec, double s) {
  const std::size_t seg = table_segment(spec, s);
  const auto& a = spec.table[seg];
  return a.second + table_slope(spec, seg) * (s - a.first);
}

double tabulated_primitive_positive(const NonlinearitySpec& spec, double s) {
  double total = 0.0;
  const auto& tab = spec.table;
  for (std::size_t i = 0; i + 1 < tab.size(); ++i) {
    const bool last = i + 2 == tab.size();
    const double lo = tab[i].first;
    const double hi = last ? std::max(s, tab[i + 1].first) : tab[i + 1].first;
    const double end = std::min(s, hi);
    if (end <= lo) break;
    const double slope = table_slope(spec, i);
    const double y_lo = tab[i].second;
    const double y_end = y_lo + slope * (end - lo);
    total += 0.5 * (y_lo + y_end) * (end - lo);
    if (s <= hi) break;
  }
  return total;
}

double f_positive(const NonlinearitySpec& spec, double s) {
  switch (spec.kind) {
    case NonlinearityKind::kLogPower:
      return log_power_positive(spec, s);
    case NonlinearityKind::kPurePower:
      return power_of(s, spec.power - 1.0);
    case NonlinearityKind::kTabulated:
      return tabulated_positive(spec, s);
  }
  return 0.0;
}

// Below this argument F is far under the absolute tolerance and the adaptive
// rule cannot meet its relative target once the integrand is subnormal, so a
// fixed 20-point Gauss-Legendre rule is used instead.
constexpr double kTinyArgument = 0x1.0p-30;

double adaptive_integral(const NonlinearitySpec& spec, double lo, double hi) {
  if (hi <= kTinyArgument) {
    auto integrand = [&spec](double s) { return f_positive(spec, s); };
    return boost::math::quadrature::gauss<double, 20>::integrate(integrand, lo, hi);
  }
  // The rule's error estimate is unreliable for integrands far from unit
  // scale, so integrate f(x anchor) / f(anchor) over a normalized range.
  const double anchor = lo > 0.0 ? lo : hi;
  const double scale = f_positive(spec, anchor);
  if (scale == 0.0) return 0.0;
  auto normalized = [&spec, anchor, scale](double x) { return f_positive(spec, anchor * x) / scale; };
  return anchor * scale *
         boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
             normalized, lo / anchor, hi / anchor, 15, kQuadratureTolerance);
}

// F(s) for s > 0 by adaptive quadrature over [lo, s] split into octaves.
double log_power_primitive_from(const NonlinearitySpec& spec, double lo, double start_value,
                                double s) {
  double total = start_value;
  double a = lo;
  while (a < s) {
    const double b = a == 0.0 ? std::min(s, 1.0) : std::min(s, 2.0 * a);
    total += adaptive_integral(spec, a, b);
    a = b;
  }
  return total;
}

}  // namespace

std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::kLogPower:
      return "log-power";
    case NonlinearityKind::kPurePower:
      return "pure-power";
    case NonlinearityKind::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

NonlinearityKind nonlinearity_kind_from_string(const std::string& name) {
  if (name == "log-power") return NonlinearityKind::kLogPower;
  if (name == "pure-power") return NonlinearityKind::kPurePower;
  if (name == "tabulated") return NonlinearityKind::kTabulated;
  throw ConfigError("unknown nonlinearity family '" + name +
                    "' (expected log-power, pure-power or tabulated)");
}

double NonlinearitySpec::critical_exponent() const {
  if (exponent >= dimension) return std::numeric_limits<double>::infinity();
  return dimension * exponent / (dimension - exponent);
}

void validate_structure(const NonlinearitySpec& spec) {
  if (!(spec.exponent > 1.0) || !std::isfinite(spec.exponent)) {
    throw ParameterError("nonlinearity exponent must be a finite real > 1");
  }
  if (!(spec.dimension > 0.0)) {
    throw ParameterError("nonlinearity dimension must be positive");
  }
  switch (spec.kind) {
    case NonlinearityKind::kLogPower:
      if (!(spec.gamma >= 1.0) || !std::isfinite(spec.gamma)) {
        throw ParameterError("log-power gamma must be >= 1");
      }
      break;
    case NonlinearityKind::kPurePower: {
      if (!(spec.power > 1.0) || !std::isfinite(spec.power)) {
        throw ParameterError("pure-power exponent r must be a finite real > 1");
      }
      break;
    }
    case NonlinearityKind::kTabulated: {
      const auto& tab = spec.table;
      if (tab.size() < 2) throw ParameterError("tabulated nonlinearity needs >= 2 knots");
      if (tab.front().first != 0.0 || tab.front().second != 0.0) {
        throw ParameterError("tabulated nonlinearity must start at (0, 0)");
      }
      for (std::size_t i = 0; i < tab.size(); ++i) {
        if (!std::isfinite(tab[i].first) || !std::isfinite(tab[i].second)) {
          throw ParameterError("tabulated nonlinearity has a non-finite knot");
        }
        if (i > 0 && !(tab[i].first > tab[i - 1].first)) {
          throw ParameterError("tabulated knots must be strictly increasing in t");
        }
      }
      break;
    }
  }
}

void validate(const NonlinearitySpec& spec) {
  validate_structure(spec);
  if (spec.kind != NonlinearityKind::kPurePower) return;
  const double crit = spec.critical_exponent();
  if (!(spec.power > spec.exponent) || !(spec.power < crit)) {
    std::ostringstream msg;
    msg << "pure-power exponent r = " << spec.power << " must satisfy " << spec.exponent
        << " < r < " << crit << " (subcritical)";
    throw ParameterError(msg.str());
  }
}

Nonlinearity::Nonlinearity(NonlinearitySpec spec) : spec_(std::move(spec)) {
  validate_structure(spec_);
  if (spec_.kind != NonlinearityKind::kLogPower) return;
  const int count = (kHighestOctave - kLowestOctave) * kStepsPerOctave + 1;
  breakpoints_.reserve(count);
  cumulative_.reserve(count);
  for (int k = 0; k < count; ++k) {
    breakpoints_.push_back(
        std::exp2(static_cast<double>(k + kLowestOctave * kStepsPerOctave) / kStepsPerOctave));
  }
  cumulative_.push_back(adaptive_integral(spec_, 0.0, breakpoints_.front()));
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    cumulative_.push_back(cumulative_.back() +
                          adaptive_integral(spec_, breakpoints_[k - 1], breakpoints_[k]));
  }
}

double Nonlinearity::f(double t) const {
  require_finite(t, "f");
  return sign_of(t) * f_positive(spec_, std::abs(t));
}

double Nonlinearity::primitive_positive(double s) const {
  if (s == 0.0) return 0.0;
  if (s < breakpoints_.front()) return adaptive_integral(spec_, 0.0, s);
  if (s >= breakpoints_.back()) {
    return log_power_primitive_from(spec_, breakpoints_.back(), cumulative_.back(), s);
  }
  const double pos = std::floor(std::log2(s) * kStepsPerOctave) -
                     static_cast<double>(kLowestOctave * kStepsPerOctave);
  auto k = static_cast<std::size_t>(std::clamp(pos, 0.0, double(breakpoints_.size() - 2)));
  while (k > 0 && breakpoints_[k] > s) --k;
  while (k + 1 < breakpoints_.size() && breakpoints_[k + 1] <= s) ++k;
  const double lo = breakpoints_[k];
  if (s == lo) return cumulative_[k];
  auto integrand = [this](double x) { return log_power_positive(spec_, x); };
  return cumulative_[k] + boost::math::quadrature::gauss<double, 8>::integrate(integrand, lo, s);
}

double Nonlinearity::primitive(double t) const {
  require_finite(t, "F");
  const double s = std::abs(t);
  switch (spec_.kind) {
    case NonlinearityKind::kLogPower:
      return primitive_positive(s);
    case NonlinearityKind::kPurePower:
      return power_of(s, spec_.power) / spec_.power;
    case NonlinearityKind::kTabulated:
      return tabulated_primitive_positive(spec_, s);
  }
  return 0.0;
}

double Nonlinearity::derivative(double t) const {
  require_finite(t, "f'");
  const double s = std::abs(t);
  switch (spec_.kind) {
    case NonlinearityKind::kLogPower:
      if (s == 0.0) {
        if (spec_.exponent < 2.0) {
          throw SingularityError("f'(0) is singular for log-power with exponent < 2");
        }
        return 0.0;
      }
      return log_power_derivative_positive(spec_, s);
    case NonlinearityKind::kPurePower:
      if (s == 0.0) {
        if (spec_.power < 2.0) {
          throw SingularityError("f'(0) is singular for pure-power with r < 2");
        }
        return spec_.power == 2.0 ? 1.0 : 0.0;
      }
      return (spec_.power - 1.0) * power_of(s, spec_.power - 2.0);
    case NonlinearityKind::kTabulated:
      return table_slope(spec_, table_segment(spec_, s));
  }
  return 0.0;
}

double Nonlinearity::derivative_times_t(double t) const {
  require_finite(t, "f' t");
  if (t == 0.0) return 0.0;
  return derivative(t) * t;
}

double eval_f(const NonlinearitySpec& spec, double t) {
  validate(spec);
  require_finite(t, "f");
  return sign_of(t) * f_positive(spec, std::abs(t));
}

double eval_F(const NonlinearitySpec& spec, double t) {
  validate(spec);
  require_finite(t, "F");
  const double s = std::abs(t);
  switch (spec.kind) {
    case NonlinearityKind::kLogPower:
      return s == 0.0 ? 0.0 : log_power_primitive_from(spec, 0.0, 0.0, s);
    case NonlinearityKind::kPurePower:
      return power_of(s, spec.power) / spec.power;
    case NonlinearityKind::kTabulated:
      return tabulated_primitive_positive(spec, s);
  }
  return 0.0;
}

double eval_fprime(const NonlinearitySpec& spec, double t) {
  validate(spec);
  require_finite(t, "f'");
  const double s = std::abs(t);
  if (spec.kind == NonlinearityKind::kLogPower) {
    if (s == 0.0) {
      if (spec.exponent < 2.0) {
        throw SingularityError("f'(0) is singular for log-power with exponent < 2");
      }
      return 0.0;
    }
    return log_power_derivative_positive(spec, s);
  }
  if (spec.kind == NonlinearityKind::kPurePower) {
    if (s == 0.0) {
      if (spec.power < 2.0) throw SingularityError("f'(0) is singular for pure-power with r < 2");
      return spec.power == 2.0 ? 1.0 : 0.0;
    }
    return (spec.power - 1.0) * power_of(s, spec.power - 2.0);
  }
  return table_slope(spec, table_segment(spec, s));
}

bool ConditionReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const ConditionVerdict& v) { return v.pass; });
}

const ConditionVerdict* ConditionReport::find(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

namespace {

// Smallest relative increment between consecutive values; negative or zero
// means the sequence is not strictly increasing.
double min_relative_increment(std::span<const double> values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) {
    worst = std::min(worst, (values[i] - values[i - 1]) / scale);
  }
  return worst;
}

ConditionVerdict monotone_verdict(std::string name, std::span<const double> values,
                                  std::string detail) {
  const double m = min_relative_increment(values);
  return {std::move(name), m > 0.0, m, std::move(detail)};
}

}  // namespace

ConditionReport audit_conditions(const NonlinearitySpec& spec,
                                 std::span<const double> t_samples) {
  if (t_samples.size() < 8) {
    throw PreconditionError("audit needs at least 8 samples");
  }
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > 0.0) || !std::isfinite(t_samples[i])) {
      throw PreconditionError("audit samples must be finite and strictly positive");
    }
    if (i > 0 && !(t_samples[i] > t_samples[i - 1])) {
      throw PreconditionError("audit samples must be sorted strictly increasing");
    }
  }
  const double t_min = t_samples.front();
  const double t_max = t_samples.back();
  if (t_max < 1e3 * t_min) {
    throw PreconditionError("audit samples must span at least three decades");
  }

  const Nonlinearity nl(spec);
  const double e = spec.exponent;
  const std::size_t n = t_samples.size();
  std::vector<double> ratio(n), gap(n), ineq(n);
  double sup_log_derivative = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_samples[i];
    const double ft = nl.f(t);
    ratio[i] = ft / std::pow(t, e - 1.0);
    gap[i] = ft * t - e * nl.primitive(t);
    const double fpt = nl.derivative(t) * t;
    ineq[i] = (fpt * t - (e - 1.0) * ft * t) / std::max(std::abs(ft * t), 1e-300);
    if (ft != 0.0) sup_log_derivative = std::max(sup_log_derivative, fpt / ft);
  }

  ConditionReport report;
  report.sup_log_derivative = sup_log_derivative;

  // Samples within the lowest and highest decade.
  std::vector<double> low, high;
  for (std::size_t i = 0; i < n; ++i) {
    if (t_samples[i] <= 10.0 * t_min) low.push_back(ratio[i]);
    if (t_samples[i] >= 0.1 * t_max) high.push_back(ratio[i]);
  }

  {
    const double fraction = ratio.front() / std::max(std::abs(ratio.back()), 1e-300);
    const double inc = min_relative_increment(low);
    ConditionVerdict v{"superlinear_at_zero", fraction < 1e-2 && inc > 0.0,
                       std::min(1e-2 - fraction, inc), ""};
    std::ostringstream d;
    d << "f(t)/t^(e-1) at t_min is " << fraction << " of its value at t_max";
    v.detail = d.str();
    report.verdicts.push_back(std::move(v));
  }
  report.verdicts.push_back(monotone_verdict(
      "superlinear_at_infinity", high, "f(t)/t^(e-1) strictly increasing over the top decade"));
  {
    const std::size_t k = n - 2;
    const double slope = std::log(nl.f(t_max) / nl.f(t_samples[k])) / std::log(t_max / t_samples[k]);
    const double crit = spec.critical_exponent();
    const double margin = std::isinf(crit) ? 1.0 : (crit - 1.0) - slope;
    std::ostringstream d;
    d << "log-log slope of f at t_max = " << slope << ", critical bound = " << crit - 1.0;
    report.verdicts.push_back({"subcritical_growth", margin > 0.0, margin, d.str()});
  }
  report.verdicts.push_back(monotone_verdict("ratio_strictly_increasing", ratio,
                                             "f(t)/t^(e-1) strictly increasing on all samples"));
  {
    const double worst = *std::min_element(ineq.begin(), ineq.end());
    report.verdicts.push_back({"derivative_inequality", worst > 0.0, worst,
                               "f'(t)t^2 - (e-1)f(t)t > 0 (relative to f(t)t)"});
  }
  {
    auto v = monotone_verdict("nehari_gap_increasing", gap,
                              "f(t)t - eF(t) strictly increasing and nonnegative");
    const double lowest = *std::min_element(gap.begin(), gap.end());
    if (lowest < 0.0) {
      v.pass = false;
      v.worst_margin = std::min(v.worst_margin, lowest);
    }
    report.verdicts.push_back(std::move(v));
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    for (double t : t_samples) {
      const double ft = nl.primitive(t);
      worst = std::min(worst, (ft - nl.primitive(-t)) / std::max(std::abs(ft), 1e-300));
    }
    report.verdicts.push_back(
        {"primitive_dominated_by_abs", worst >= 0.0, worst, "F(-t) <= F(t)"});
  }
  return report;
}

std::vector<ArExhibit> exhibit_ar_failure(const NonlinearitySpec& spec,
                                          std::span<const double> thetas) {
  const Nonlinearity nl(spec);
  const std::vector<double> scan = log_spaced(1e-6, 1e15, 841);
  std::vector<ArExhibit> out;
  for (double theta : thetas) {
    ArExhibit ex;
    ex.theta = theta;
    for (double t : scan) {
      const double ft = nl.f(t) * t;
      const double excess = theta * nl.primitive(t) - ft;
      if (excess > 1e-12 * std::abs(ft)) {
        ex.found = true;
        ex.t = t;
        ex.excess = excess;
        break;
      }
    }
    out.push_back(ex);
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw ParameterError("log_spaced needs 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace pqnehari
