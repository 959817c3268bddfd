#pragma once

#include <span>
#include <vector>

#include "unrest/model.hpp"

namespace unrest {

struct Breakpoint {
  double time = 0.0;  // months
  double value = 0.0;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise-linear parameter track with constant extrapolation on both
/// sides. Instant changes are written as short ramps.
class Track {
 public:
  /// Throws ValidationError if empty, non-finite or not strictly increasing
  /// in time.
  explicit Track(std::vector<Breakpoint> breakpoints);

  static Track constant(double value);

  double operator()(double t) const noexcept;

  std::span<const Breakpoint> breakpoints() const noexcept { return points_; }
  bool is_constant() const noexcept;

  friend bool operator==(const Track&, const Track&) = default;

 private:
  std::vector<Breakpoint> points_;
};

/// Time-varying (alpha, beta, c1, c2).
///
/// Every breakpoint value is checked against the ModelParams ranges at
/// construction; linear interpolation between valid values stays valid, so
/// `at(t)` cannot fail afterwards.
class Schedule {
 public:
  Schedule(Track alpha, Track beta, Track c1, Track c2);

  static Schedule constant(const ModelParams& params);

  ModelParams at(double t) const;

  const Track& alpha() const noexcept { return alpha_; }
  const Track& beta() const noexcept { return beta_; }
  const Track& c1() const noexcept { return c1_; }
  const Track& c2() const noexcept { return c2_; }

  bool is_constant() const noexcept;

  /// Sorted, de-duplicated union of all track breakpoint times.
  std::vector<double> breakpoint_times() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  Track alpha_;
  Track beta_;
  Track c1_;
  Track c2_;
};

/// Instantaneous jump of `delta_r` in the protester fraction.
struct Shock {
  double time = 0.0;  // months
  double delta_r = 0.0;

  friend bool operator==(const Shock&, const Shock&) = default;
};

/// Throws ValidationError for delta_r <= 0 or non-finite fields.
void validate_shock(const Shock& shock);

/// Validates, sorts by time and merges shocks sharing a time by summing.
std::vector<Shock> normalize_shocks(std::span<const Shock> shocks);

/// min(r + delta_r, 1).
Fraction apply_shock(Fraction r, const Shock& shock);

/// Piecewise-linear tracks of the Egypt scenario (t = 0 is 14 January
/// 2011, months of 30 days):
///   alpha 0.96 -> 0.98 over [11/30, 14/30], back to 0.96 by 15/30 (Internet
///         shutdown), flat until 18/30, up to 0.98 by 19/30;
///   c1    2.30 -> 3.26 over [11/30, 14/30];
///   beta  0.06 -> 0.04 over [18/30, 19/30];
///   c2    69.1 -> 50.0 over [18/30, 19/30].
/// The rounded values 2.30 and 69.1 are used verbatim, not ln 10 and
/// 30 ln 10.
Schedule egypt_schedule();

}  // namespace unrest
