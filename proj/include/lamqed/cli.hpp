#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lamqed/model.hpp"

// Command-line front end: parse flags or a named preset, run the entropy
// pipeline, write a plot-ready CSV.

namespace lamqed {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<std::string> preset;
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::optional<int> p;      // absent => stationary atom
  double nbar = 25.0;
  double t_max = 50.0;       // in units of 1/lambda
  int samples = 2000;
  std::string out_path;
  std::string format = "csv";
  bool help = false;
};

// Named parameter sets fig1a..fig4f. Figures differ in detuning, letters in
// motion: {a,b} stationary, {c,d} p = 1, {e,f} p = 3. All use nbar = 25.
const std::vector<std::pair<std::string, RunConfig>>& preset_table();

// Throws UsageError on unknown flags, malformed numbers, or out-of-range
// values. A preset overrides the individual physics flags.
RunConfig parse_args(const std::vector<std::string>& args);

// Executes the run and writes the CSV (header:
// t,scaled_time,entropy,rho11,rho22,rho33,solver_path). Returns 0 on
// success; throws on I/O or physics failure.
int run(const RunConfig& cfg);

void print_usage(std::ostream& os);

// Full front end: parse, dispatch, map failures to exit codes
// (0 success, 1 usage, 2 numeric/physics/I/O failure).
int cli_main(const std::vector<std::string>& args);

}  // namespace lamqed
