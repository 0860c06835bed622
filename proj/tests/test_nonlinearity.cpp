#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pqnehari/errors.hpp"
#include "pqnehari/nonlinearity.hpp"

namespace pqnehari {
namespace {

NonlinearitySpec log_power(double exponent = 2.0, double gamma = 1.0) {
  NonlinearitySpec s;
  s.kind = NonlinearityKind::kLogPower;
  s.exponent = exponent;
  s.gamma = gamma;
  return s;
}

NonlinearitySpec pure_power(double r, double exponent = 2.0, double dimension = 4.0) {
  NonlinearitySpec s;
  s.kind = NonlinearityKind::kPurePower;
  s.exponent = exponent;
  s.power = r;
  s.dimension = dimension;
  return s;
}

TEST(EvalF, LogPowerValues) {
  const auto s = log_power();
  EXPECT_EQ(eval_f(s, 0.0), 0.0);
  EXPECT_NEAR(eval_f(s, 1.0), 0.6931471805599453, 1e-15);
  EXPECT_NEAR(eval_f(s, -1.0), -0.6931471805599453, 1e-15);
}

TEST(EvalF, OddSymmetry) {
  for (const auto& s : {log_power(), log_power(3.0, 2.0), pure_power(3.0)}) {
    for (double t : {1e-3, 0.3, 1.0, 7.5, 1e3}) EXPECT_EQ(eval_f(s, -t), -eval_f(s, t));
  }
}

TEST(EvalF, NonFiniteArgumentIsDomainError) {
  EXPECT_THROW(eval_f(log_power(), std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(eval_F(log_power(), std::numeric_limits<double>::infinity()), DomainError);
}

TEST(EvalPrimitive, KnownValues) {
  EXPECT_EQ(eval_F(log_power(), 0.0), 0.0);
  EXPECT_EQ(eval_F(pure_power(4.0, 2.0, 3.0), 0.0), 0.0);
  // int_0^1 t ln(1 + t) dt = 1/4.
  EXPECT_NEAR(eval_F(log_power(), 1.0), 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(eval_F(pure_power(4.0, 2.0, 3.0), 2.0), 4.0);
}

TEST(EvalPrimitive, EvenSymmetry) {
  const auto s = log_power();
  for (double t : {0.01, 0.5, 2.0, 40.0}) EXPECT_EQ(eval_F(s, -t), eval_F(s, t));
}

TEST(EvalDerivative, KnownValues) {
  EXPECT_NEAR(eval_fprime(log_power(), 1.0), std::log(2.0) + 0.5, 1e-14);
  // f(t) = |t|^(r-2) t pairs with F(t) = |t|^r / r, so f'(t) = (r-1)|t|^(r-2):
  // 3 * 2^2 = 12 at r = 4, and 2 * 2 = 4 at r = 3.
  EXPECT_DOUBLE_EQ(eval_fprime(pure_power(4.0, 2.0, 3.0), 2.0), 12.0);
  EXPECT_DOUBLE_EQ(eval_fprime(pure_power(3.0), 2.0), 4.0);
  EXPECT_EQ(eval_fprime(log_power(), 0.0), 0.0);
}

TEST(EvalDerivative, SingularBelowExponentTwo) {
  EXPECT_THROW(eval_fprime(log_power(1.5), 0.0), SingularityError);
  EXPECT_NO_THROW(eval_fprime(log_power(1.5), 0.1));
}

TEST(EvalDerivative, MatchesCentralDifferences) {
  for (const auto& s : {log_power(), log_power(3.0), log_power(2.0, 2.0), pure_power(3.0)}) {
    for (double t : {0.1, 0.5, 1.0, 3.0, 10.0, 42.0, 100.0}) {
      const double h = 1e-6 * std::max(1.0, std::abs(t));
      const double fd = (eval_f(s, t + h) - eval_f(s, t - h)) / (2.0 * h);
      const double exact = eval_fprime(s, t);
      EXPECT_LE(std::abs(fd - exact) / std::abs(exact), 1e-6) << "t = " << t;
    }
  }
}

TEST(EvalPrimitive, MatchesTrapezoidQuadrature) {
  for (const auto& s : {log_power(), log_power(3.0, 2.0)}) {
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
      const int n = 200000;
      const double h = t / n;
      double sum = 0.5 * (eval_f(s, 0.0) + eval_f(s, t));
      for (int k = 1; k < n; ++k) sum += eval_f(s, k * h);
      const double trap = sum * h;
      EXPECT_LE(std::abs(trap - eval_F(s, t)) / eval_F(s, t), 1e-8) << "t = " << t;
    }
  }
}

TEST(CachedPrimitive, AgreesWithDirectQuadrature) {
  for (const auto& spec : {log_power(), log_power(3.0), log_power(2.0, 2.0)}) {
    const Nonlinearity nl(spec);
    for (double t : log_spaced(1e-12, 1e8, 101)) {
      const double direct = eval_F(spec, t);
      EXPECT_LE(std::abs(nl.primitive(t) - direct), 1e-12 * direct + 1e-300) << "t = " << t;
      EXPECT_EQ(nl.primitive(-t), nl.primitive(t));
    }
  }
}

TEST(Validate, RejectsBadSpecs) {
  EXPECT_THROW(validate(log_power(2.0, 0.5)), ParameterError);
  EXPECT_THROW(validate(log_power(1.0)), ParameterError);
  // r must lie strictly between the exponent and the critical exponent 4.
  EXPECT_THROW(validate(pure_power(2.0)), ParameterError);
  EXPECT_THROW(validate(pure_power(4.0)), ParameterError);
  EXPECT_NO_THROW(validate(pure_power(3.0)));
  EXPECT_NO_THROW(validate_structure(pure_power(2.0)));
}

TEST(Validate, TabulatedKnots) {
  NonlinearitySpec s;
  s.kind = NonlinearityKind::kTabulated;
  s.table = {{0.0, 0.0}, {1.0, 0.5}, {2.0, 3.0}};
  EXPECT_NO_THROW(validate(s));
  EXPECT_DOUBLE_EQ(eval_f(s, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(eval_F(s, 1.0), 0.25);
  s.table = {{0.0, 0.1}, {1.0, 1.0}};
  EXPECT_THROW(validate(s), ParameterError);
  s.table = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}};
  EXPECT_THROW(validate(s), ParameterError);
}

TEST(Audit, LogPowerPassesEveryCondition) {
  const auto report = audit_conditions(log_power(), log_spaced(1e-3, 1e3, 121));
  for (const auto& v : report.verdicts) EXPECT_TRUE(v.pass) << v.name << ": " << v.detail;
  EXPECT_TRUE(report.all_pass());
  EXPECT_GT(report.sup_log_derivative, 1.0);
}

TEST(Audit, QuarticPassesEveryCondition) {
  // Dimension 3 puts the critical exponent at 6, above r = 4.
  const auto report = audit_conditions(pure_power(4.0, 2.0, 3.0), log_spaced(1e-3, 1e3, 121));
  for (const auto& v : report.verdicts) EXPECT_TRUE(v.pass) << v.name << ": " << v.detail;
}

TEST(Audit, DegenerateQuadraticFailsSuperlinearityAndMonotonicity) {
  const auto report = audit_conditions(pure_power(2.0), log_spaced(1e-3, 1e3, 121));
  EXPECT_FALSE(report.all_pass());
  EXPECT_FALSE(report.find("superlinear_at_zero")->pass);
  EXPECT_FALSE(report.find("ratio_strictly_increasing")->pass);
}

TEST(Audit, HypothesisInequalitiesHoldForBuiltInFamilies) {
  for (const auto& s : {log_power(), log_power(3.0), log_power(2.0, 2.0), log_power(1.5),
                        pure_power(3.0), pure_power(4.0, 2.0, 3.0)}) {
    const auto report = audit_conditions(s, log_spaced(1e-3, 1e3, 61));
    EXPECT_TRUE(report.find("derivative_inequality")->pass);
    EXPECT_TRUE(report.find("nehari_gap_increasing")->pass);
    EXPECT_TRUE(report.find("primitive_dominated_by_abs")->pass);
  }
}

TEST(Audit, PreconditionsOnSamples) {
  EXPECT_THROW(audit_conditions(log_power(), log_spaced(1e-3, 1e3, 5)), PreconditionError);
  EXPECT_THROW(audit_conditions(log_power(), log_spaced(1e-2, 1.0, 20)), PreconditionError);
  auto unsorted = log_spaced(1e-3, 1e3, 20);
  std::swap(unsorted[3], unsorted[4]);
  EXPECT_THROW(audit_conditions(log_power(), unsorted), PreconditionError);
  auto nonpositive = log_spaced(1e-3, 1e3, 20);
  nonpositive[0] = 0.0;
  EXPECT_THROW(audit_conditions(log_power(), nonpositive), PreconditionError);
}

TEST(ArExhibit, LogPowerViolatesTheCondition) {
  const auto spec = log_power();
  const std::vector<double> thetas{2.1, 3.0, 5.0};
  const auto exhibits = exhibit_ar_failure(spec, thetas);
  ASSERT_EQ(exhibits.size(), 3u);
  for (const auto& ex : exhibits) {
    ASSERT_TRUE(ex.found) << "theta = " << ex.theta;
    // Re-evaluated independently of the search.
    EXPECT_GT(ex.theta * eval_F(spec, ex.t), eval_f(spec, ex.t) * ex.t);
  }
}

TEST(ArExhibit, QuarticSatisfiesTheConditionBelowItsPower) {
  const std::vector<double> thetas{3.0};
  const auto exhibits = exhibit_ar_failure(pure_power(4.0, 2.0, 3.0), thetas);
  EXPECT_FALSE(exhibits.front().found);
}

TEST(KindNames, RoundTrip) {
  for (auto k : {NonlinearityKind::kLogPower, NonlinearityKind::kPurePower, NonlinearityKind::kTabulated}) {
    EXPECT_EQ(nonlinearity_kind_from_string(to_string(k)), k);
  }
}

}  // namespace
}  // namespace pqnehari
