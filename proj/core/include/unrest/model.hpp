#pragma once

// One-compartment protest model:
//
//   dr/dt = c1 * v(r; alpha) * (1 - r) - c2 * p(r; beta) * r
//
// with v = 1 iff r > 1 - alpha and p = 1 iff r < beta. Everything in this
// header is a pure function of its arguments.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace unrest {

/// Calibrated enthusiasm: 90% of the population recruited in one month,
/// c1 = ln 10.
inline constexpr double kDefaultEnthusiasm = 2.302585092994046;
/// Calibrated policing efficiency: 90% of protesters cleared in one day
/// (1/30 month), c2 = 30 ln 10.
inline constexpr double kDefaultPolicingEfficiency = 69.07755278982137;

inline constexpr double kDefaultClassificationTolerance = 1e-12;

/// A protester fraction, always inside [0, 1].
class Fraction {
 public:
  constexpr Fraction() = default;
  /// Throws ValidationError unless 0 <= value <= 1.
  explicit Fraction(double value);

  /// Clamps into [0, 1]; NaN is rejected.
  static Fraction clamped(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

  friend constexpr bool operator==(Fraction, Fraction) = default;

 private:
  double value_ = 0.0;
};

/// The model quadruple (alpha, beta, c1, c2). Rates are per month.
class ModelParams {
 public:
  /// Throws ValidationError unless alpha, beta lie in the open interval
  /// (0,1) and c1, c2 are positive and finite.
  ModelParams(double alpha, double beta, double c1, double c2);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }

  /// 1 - alpha, the smallest fraction that still recruits.
  double visibility_threshold() const noexcept { return 1.0 - alpha_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  double beta_;
  double c1_;
  double c2_;
};

int visibility(double r, double alpha) noexcept;
int policing(double r, double beta) noexcept;

/// Right-hand side with raw doubles; used by the integrator on stage values.
double rate(double r, const ModelParams& params) noexcept;
double rhs(Fraction r, const ModelParams& params) noexcept;

/// Civil-unrest level c1 / (c1 + c2).
double c_star(double c1, double c2);

enum class RegionLabel : std::uint8_t { I, II, III0, IIIe, III1 };

enum class BoundaryTag : std::uint8_t {
  AlphaPlusBetaEqOne = 1u << 0,
  CstarEqVisibilityThreshold = 1u << 1,
  CstarEqBeta = 1u << 2,
};

struct Region {
  RegionLabel label = RegionLabel::II;
  std::uint8_t boundary = 0;  // bitwise OR of BoundaryTag

  bool on(BoundaryTag tag) const noexcept {
    return (boundary & static_cast<std::uint8_t>(tag)) != 0;
  }
  friend bool operator==(const Region&, const Region&) = default;
};

std::string_view to_string(RegionLabel label) noexcept;
std::string_view to_string(BoundaryTag tag) noexcept;
std::optional<RegionLabel> parse_region_label(std::string_view text) noexcept;

/// Regions by the sign of alpha + beta - 1 and, above the line, by where
/// c* falls relative to 1 - alpha and beta. A tie c* == 1 - alpha resolves
/// to III0 and c* == beta to III1, with the matching boundary tag set.
Region classify_region(const ModelParams& params,
                       double tol = kDefaultClassificationTolerance);

/// Interval with explicit endpoint closure.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double x) const noexcept;
  bool interior_contains(double x) const noexcept { return x > lo && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Stability : std::uint8_t { AsymptoticallyStable, Unstable, ContinuumStable };

std::string_view to_string(Stability s) noexcept;

/// A fixed point, or for ContinuumStable the whole interval of neutral
/// fixed points: `value` is then its lower end and `basin` is the interval
/// itself (every member attracts only itself).
struct Equilibrium {
  Fraction value;
  Stability stability = Stability::AsymptoticallyStable;
  std::optional<Interval> basin;

  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

struct EquilibriumSet {
  ModelParams params;
  Region region;
  std::vector<Equilibrium> equilibria;  // ordered by value

  const Equilibrium* find_stable(double value, double tol = 1e-12) const noexcept;
};

EquilibriumSet equilibria(const ModelParams& params,
                          double tol = kDefaultClassificationTolerance);

/// Limit of the trajectory starting at r0 under constant parameters.
/// Exact unstable points return themselves; a start inside a region II
/// continuum returns itself as ContinuumStable.
Equilibrium predict_limit(Fraction r0, const ModelParams& params,
                          double tol = kDefaultClassificationTolerance);

/// Rate that takes dr/dt = c (1 - r) from 0 to `spread_fraction` in
/// `horizon` months: -ln(1 - spread_fraction) / horizon.
double calibrate_c1(double spread_fraction, double horizon);
/// Rate that clears `clear_fraction` of protesters in `horizon` months
/// under dr/dt = -c r.
double calibrate_c2(double clear_fraction, double horizon);

}  // namespace unrest
