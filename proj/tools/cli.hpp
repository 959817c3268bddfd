#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unrest/analysis.hpp"
#include "unrest/model.hpp"

namespace unrest::cli {

enum class Command { Classify, Equilibria, Simulate, Sweep, ScenarioList, ScenarioRun, Escape };
enum class Format { Text, Csv, Json, Svg };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Environment variable naming the directory used when --output is absent.
inline constexpr const char* kOutputDirEnv = "UNREST_OUTPUT_DIR";

struct Invocation {
  Command command = Command::Classify;
  Format format = Format::Text;
  std::optional<std::string> output;

  double alpha = 0.0;
  double beta = 0.0;
  double c1 = kDefaultEnthusiasm;
  double c2 = kDefaultPolicingEfficiency;
  double tol = kDefaultClassificationTolerance;

  std::string scenario;  // file for simulate, name for scenario-run
  std::optional<double> step;
  std::optional<double> sample_interval;

  AxisRange alpha_range;
  AxisRange beta_range;
  unsigned threads = 0;

  std::string from = "0";  // "0" or "cstar"
  std::optional<std::string> export_dir;
  bool verbose = false;
};

/// Parses "start:end:count".
AxisRange parse_range(const std::string& text);

/// Runs the whole command line. Data goes to `out` (or the output file),
/// diagnostics to `err`. Returns 0, 1 (validation) or 2 (I/O).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Executes an already parsed invocation.
int run(const Invocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace unrest::cli
