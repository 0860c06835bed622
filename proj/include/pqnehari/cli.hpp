#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pqnehari {

enum class Command { kSolve, kProject, kVerify, kCompare, kSweep };

struct RunManifest {
  Command command = Command::kSolve;
  // Empty: built-in defaults.
  std::string config_path;
  std::string out_dir = "out";
  // Replaces solver.seed when set.
  std::optional<std::uint64_t> seed;
  // "section.key=value", applied in order after the config file.
  std::vector<std::string> overrides;
  // Workers for independent solves and checks; results do not depend on it.
  int threads = 1;

  // sweep: "lambda0" or "delta" over `steps` evenly spaced values.
  std::string sweep_param = "lambda0";
  double sweep_from = 0.0;
  double sweep_to = 2.0;
  int sweep_steps = 9;

  // project: CSV field dumps of the state to project; a missing component
  // is zero. Without either, a random signed state drawn from the seed.
  std::string u_path;
  std::string v_path;
};

enum ExitStatus : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

// Executes one subcommand, writing reports under manifest.out_dir and a
// short summary to `out`. Errors go to `err`.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

// Parses the command line and runs it.
int main_entry(int argc, const char* const* argv);

}  // namespace pqnehari
