#include "pqnehari/report.hpp"

namespace pqnehari {

Json to_json(const TraceEntry& e) {
  return Json{{"iteration", e.iteration},
              {"energy", e.energy},
              {"residual", e.residual},
              {"gradient_norm", e.gradient_norm},
              {"step", e.step}};
}

Json to_json(const SolveReport& r) {
  Json trace = Json::array();
  for (const auto& e : r.trace) trace.push_back(to_json(e));
  return Json{{"status", r.status},
              {"converged", r.converged},
              {"init_seed", r.init_seed},
              {"iterations", r.iterations},
              {"energy", r.energy_value},
              {"nehari_residual", r.nehari_residual},
              {"gradient_norm", r.gradient_norm},
              {"mass_fraction_u", r.mass_fraction_u},
              {"mass_fraction_v", r.mass_fraction_v},
              {"semitrivial", r.semitrivial},
              {"trace", std::move(trace)}};
}

Json to_json(const FiberingReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(Json{{"t", s.t}, {"h", s.h}, {"hprime", s.hprime}, {"rhs", s.rhs}});
  }
  return Json{{"t0", r.t0},
              {"t_lo", r.t_lo},
              {"t_hi", r.t_hi},
              {"iterations", r.iterations},
              {"residual_at_t0", r.residual_at_t0},
              {"samples", std::move(samples)}};
}

Json to_json(const ScalarReport& r) {
  return Json{{"side", r.side == Side::kA ? "a" : "b"},
              {"level", r.level},
              {"residual", r.residual},
              {"gradient_norm", r.gradient_norm},
              {"converged", r.converged}};
}

Json to_json(const SemitrivialVerdict& v) {
  return Json{{"verdict", v.verdict},
              {"binding", v.binding},
              {"coupled_level", v.coupled_level},
              {"scalar_level_a", v.scalar_level_a},
              {"scalar_level_b", v.scalar_level_b},
              {"gap", v.gap},
              {"mass_fraction_u", v.mass_fraction_u},
              {"mass_fraction_v", v.mass_fraction_v}};
}

Json to_json(const TestStateBound& b) {
  return Json{{"t0", b.t0}, {"energy", b.energy}, {"bound", b.bound}, {"holds", b.holds}};
}

Json to_json(const PeriodicComparison& c) {
  return Json{{"verdict", c.passed() ? "pass" : "fail"},
              {"periodic_level", c.periodic_level},
              {"upper_bound", c.upper_bound},
              {"asymptotic_level", c.asymptotic_level},
              {"strict", c.strict},
              {"direct_below", c.direct_below}};
}

Json to_json(const LambdaThreshold& t) {
  return Json{{"bracketed", t.bracketed}, {"lower", t.lower}, {"upper", t.upper}};
}

Json to_json(const CheckResult& c) {
  Json metrics = Json::object();
  for (const auto& [key, value] : c.metrics) metrics[key] = value;
  return Json{{"name", c.name},
              {"anchor", c.anchor},
              {"verdict", to_string(c.verdict)},
              {"margin", c.margin ? Json(*c.margin) : Json(nullptr)},
              {"samples", c.samples},
              {"detail", c.detail},
              {"metrics", std::move(metrics)}};
}

Json to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"seed", r.seed},
              {"n_samples", r.n_samples},
              {"passed", !r.any_failed()},
              {"checks", std::move(checks)}};
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace pqnehari
