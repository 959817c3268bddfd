#pragma once

// Scenario files are JSON documents:
//
//   {
//     "name": "tunisia-alpha-0.98-beta-0.05",
//     "description": "optional free text",
//     "r0": 0.0,
//     "t_end": 2.0,
//     "params": {"alpha": 0.98, "beta": 0.05, "c1": 2.302585092994046,
//                "c2": 69.07755278982137},
//     "shocks": [{"time": 0.03333333333333333, "delta_r": 0.021}],
//     "solver": {"step": 0.0001, "crossing_tolerance": 1e-10,
//                "sample_interval": 0.001}
//   }
//
// "params" may be replaced by "schedule", whose alpha/beta/c1/c2 entries
// are either a number (constant) or a list of [time, value] breakpoints.
// Exactly one of the two must be present. "r0" defaults to 0, "shocks" to
// none and each "solver" entry to the SolverConfig default. Unknown fields
// are rejected.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "unrest/analysis.hpp"
#include "unrest/integrator.hpp"
#include "unrest/schedule.hpp"

namespace unrest {

struct ScenarioSpec {
  std::string name;
  std::string description;
  Fraction r0;
  double t_end = 1.0;
  Schedule schedule;
  std::vector<Shock> shocks;  // normalized: sorted, merged
  SolverConfig solver;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Throws ParseError for malformed JSON (message carries line and column)
/// and ValidationError naming the offending field otherwise.
ScenarioSpec parse_scenario(std::string_view text);

/// Pretty-printed JSON; constant schedules use the "params" shorthand.
/// Doubles are written in shortest round-trip form, so
/// parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const ScenarioSpec& spec);

/// Reads and parses a scenario file. Throws IoError if unreadable.
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Tunisia visibility sweep (4), Tunisia enthusiasm sweep (4), Egypt and
/// the China rising-enthusiasm illustration.
std::vector<ScenarioSpec> builtin_scenarios();

std::optional<ScenarioSpec> find_builtin(std::string_view name);

Trajectory run_scenario(const ScenarioSpec& spec);

/// Header `t,r,alpha,beta,c1,c2,v,p,region`, one row per sample, then one
/// `#event,t,kind,detail` comment per event. t and r use 12 fixed decimals,
/// parameters 12 significant digits. Returns bytes written.
std::size_t write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);
std::size_t write_trajectory_csv(const Trajectory& trajectory,
                                 const std::filesystem::path& destination);

/// Header `alpha,beta,region`, one row per cell in alpha-major order.
std::size_t write_region_grid_csv(const RegionGrid& grid, std::ostream& out);

std::string trajectory_to_json(const Trajectory& trajectory);
std::string region_grid_to_json(const RegionGrid& grid);

/// r against t as a polyline; shocks drawn as vertical markers and switch
/// crossings as dots.
std::size_t write_trajectory_svg(const Trajectory& trajectory, std::ostream& out,
                                 std::string_view title = {});
/// One coloured rectangle per cell with a legend.
std::size_t write_region_grid_svg(const RegionGrid& grid, std::ostream& out);

}  // namespace unrest
