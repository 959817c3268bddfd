#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unrest/model.hpp"
#include "unrest/schedule.hpp"

namespace unrest {

struct SolverConfig {
  double step = 1e-4;                // months
  double crossing_tolerance = 1e-10;  // |r - threshold| at a located crossing
  double sample_interval = 1e-3;     // months; 0 records every step

  /// Throws ValidationError unless step > 0, crossing_tolerance > 0 and
  /// sample_interval >= 0.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct Sample {
  double t;
  double r;
  ModelParams params;
  int v;
  int p;
  Region region;
};

enum class EventKind : std::uint8_t { Shock, ThresholdCrossing, RegionChange };

std::string_view to_string(EventKind kind) noexcept;

struct Event {
  double t;
  EventKind kind;
  std::string detail;
};

struct Trajectory {
  std::vector<Sample> samples;  // non-decreasing in t; shock instants appear twice
  std::vector<Event> events;

  double final_r() const;
  /// Linear interpolation between recorded samples; at a shock instant the
  /// post-shock value is returned.
  double value_at(double t) const;
};

/// Closed-form solution of dr/dt = a (1 - r) - b r after `dt` months,
/// i.e. one segment of the model with both switches frozen
/// (a = c1 v, b = c2 p).
double step_exact(double r0, double a, double b, double dt);

/// Integrates the model from r0 over [0, t_end] with classical RK4 at the
/// configured step. Switch crossings are located by bisection and
/// integration restarts there with the new switch values. Step boundaries
/// are forced at shock times, schedule breakpoints and sample times. Shocks
/// after t_end are ignored.
///
/// Throws ValidationError for invalid inputs and SolverError if the state
/// becomes non-finite.
Trajectory simulate(Fraction r0, const Schedule& schedule, std::span<const Shock> shocks,
                    double t_end, const SolverConfig& config = {});

Trajectory simulate(Fraction r0, const ModelParams& params, std::span<const Shock> shocks,
                    double t_end, const SolverConfig& config = {});

}  // namespace unrest
