#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unrest/model.hpp"

namespace unrest {

/// `count` cell centres evenly spaced over (lo, hi):
/// lo + (k + 0.5) (hi - lo) / count.
struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;

  std::vector<double> centers() const;
};

struct RegionGrid {
  std::vector<double> alpha_axis;
  std::vector<double> beta_axis;
  std::vector<RegionLabel> cells;  // alpha-major: cells[i * beta_axis.size() + j]
  double c1 = kDefaultEnthusiasm;
  double c2 = kDefaultPolicingEfficiency;

  RegionLabel at(std::size_t alpha_index, std::size_t beta_index) const {
    return cells.at(alpha_index * beta_axis.size() + beta_index);
  }
};

/// Classifies every (alpha, beta) cell centre. Rows are split over up to
/// `threads` workers (0 picks the hardware concurrency); the result does
/// not depend on the thread count.
RegionGrid sweep_regions(const AxisRange& alpha, const AxisRange& beta, double c1, double c2,
                         unsigned threads = 0);

enum class Attainment : std::uint8_t {
  Open,    // the shock must strictly exceed minimal_shock
  Closed,  // a shock of exactly minimal_shock suffices
};

std::string_view to_string(Attainment a) noexcept;

struct EscapeReport {
  Fraction from;
  double minimal_shock = 0.0;
  Attainment attainment = Attainment::Open;
  Equilibrium destination;
};

/// Smallest upward shock that leaves the basin of the stable equilibrium at
/// `from` (0, or c* in region IIIe). Throws ValidationError if `from` is
/// not such an equilibrium (within 1e-9).
EscapeReport escape_shock(const ModelParams& params, Fraction from);

struct CstarStudyRow {
  double c1;
  double c_star;
  Region region;
  std::optional<EscapeReport> escape_from_cstar;  // set in IIIe only
};

/// Replaces c1 in `base` by each value (positive, strictly ascending) and
/// reports the region and, in IIIe, the escape shock from c*.
std::vector<CstarStudyRow> rising_cstar_study(const ModelParams& base,
                                              std::span<const double> c1_values);

/// Illustrative parameter placements for regimes discussed qualitatively.
/// The numbers are only chosen to land in the named region.
struct Preset {
  std::string name;
  std::string description;
  ModelParams params;
  RegionLabel expected;
};

std::vector<Preset> case_study_presets();

}  // namespace unrest
