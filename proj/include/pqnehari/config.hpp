#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pqnehari/nehari.hpp"

namespace pqnehari {

struct SweepSettings {
  // Radius of the ball carrying the coupling floor in lambda0 sweeps.
  double ball_radius = 2.0;
  // Bisection steps for the threshold located by `compare`.
  int threshold_steps = 6;
  // Upper end of the threshold search.
  double lambda_max = 0.6;
};

// Everything a run depends on. Every field has a key in the text format, so
// the echoed effective config reproduces the run.
struct RunConfig {
  ProblemConfig problem = default_problem_config();
  SolverOptions solver;
  // Decaying perturbations of a, b and lambda for the level comparison.
  std::array<DecayPerturbation, 3> asymptotic{
      DecayPerturbation{-0.2, 1.0, DecayShape::kExponential},
      DecayPerturbation{-0.2, 1.0, DecayShape::kExponential},
      DecayPerturbation{0.1, 1.0, DecayShape::kExponential}};
  SweepSettings sweep;
  int verify_samples = 50;
};

// Keys as "section.key", in the order they are written.
std::vector<std::string> config_keys();

// Sets one key from its text value. Throws ConfigError on an unknown key or
// an unparsable value.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

std::string get_config_value(const RunConfig& config, const std::string& key);

// INI text: [section] headers, key = value lines and full-line '#' or ';'
// comments.
// Keys absent from the text keep their defaults.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// "key=value" with key as "section.key".
void apply_override(RunConfig& config, const std::string& assignment);

// Every key with its value; reals printed with 17 significant digits so
// parsing the text back reproduces the config exactly.
std::string format_config(const RunConfig& config);

}  // namespace pqnehari
