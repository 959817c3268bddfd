#include "unrest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "unrest/errors.hpp"

namespace unrest {

std::vector<double> AxisRange::centers() const {
  if (count < 2) throw ValidationError("axis resolution must be >= 2");
  if (!(lo > 0.0 && hi < 1.0 && lo < hi)) {
    throw ValidationError("axis range must satisfy 0 < lo < hi < 1");
  }
  std::vector<double> out(count);
  const double width = (hi - lo) / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = lo + (static_cast<double>(k) + 0.5) * width;
  }
  return out;
}

RegionGrid sweep_regions(const AxisRange& alpha, const AxisRange& beta, double c1, double c2,
                         unsigned threads) {
  RegionGrid grid;
  grid.alpha_axis = alpha.centers();
  grid.beta_axis = beta.centers();
  grid.c1 = c1;
  grid.c2 = c2;
  // Validates the rates once, up front.
  (void)ModelParams(grid.alpha_axis.front(), grid.beta_axis.front(), c1, c2);

  const std::size_t rows = grid.alpha_axis.size();
  const std::size_t cols = grid.beta_axis.size();
  grid.cells.resize(rows * cols);

  auto fill_rows = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        grid.cells[i * cols + j] =
            classify_region(ModelParams(grid.alpha_axis[i], grid.beta_axis[j], c1, c2)).label;
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows));
  if (threads <= 1) {
    fill_rows(0, rows);
    return grid;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (rows + threads - 1) / threads;
  for (std::size_t first = 0; first < rows; first += chunk) {
    workers.emplace_back(fill_rows, first, std::min(rows, first + chunk));
  }
  workers.clear();  // joins
  return grid;
}

std::string_view to_string(Attainment a) noexcept {
  return a == Attainment::Open ? "open" : "closed";
}

EscapeReport escape_shock(const ModelParams& params, Fraction from) {
  constexpr double kMatch = 1e-9;
  const EquilibriumSet set = equilibria(params);
  const double a = params.visibility_threshold();
  const double b = params.beta();
  const double r = from.value();

  auto stable_at = [&](double v) -> const Equilibrium& {
    const Equilibrium* e = set.find_stable(v, kMatch);
    if (e == nullptr) throw ValidationError("internal: missing stable equilibrium");
    return *e;
  };
  auto report = [&](double shock, Attainment att, Equilibrium dest) {
    return EscapeReport{from, shock, att, std::move(dest)};
  };

  if (std::abs(r) <= kMatch) {
    switch (set.region.label) {
      case RegionLabel::III0:
        return report(b, Attainment::Closed, stable_at(1.0));
      case RegionLabel::IIIe:
        return report(a, Attainment::Open, stable_at(c_star(params.c1(), params.c2())));
      case RegionLabel::III1:
        return report(a, Attainment::Open, stable_at(1.0));
      case RegionLabel::I:
        // Landing on beta = 1 - alpha stays on the unstable point.
        return report(b, Attainment::Open, stable_at(1.0));
      case RegionLabel::II: {
        const auto continuum =
            std::find_if(set.equilibria.begin(), set.equilibria.end(), [](const Equilibrium& e) {
              return e.stability == Stability::ContinuumStable;
            });
        return report(b, Attainment::Closed, *continuum);
      }
    }
  }
  if (set.region.label == RegionLabel::IIIe) {
    const double cs = c_star(params.c1(), params.c2());
    if (std::abs(r - cs) <= kMatch) return report(b - cs, Attainment::Closed, stable_at(1.0));
  }
  throw ValidationError("from=" + std::to_string(r) +
                        " is not a stable equilibrium with an upward escape (expected 0, or c* "
                        "in region IIIe)");
}

std::vector<CstarStudyRow> rising_cstar_study(const ModelParams& base,
                                              std::span<const double> c1_values) {
  std::vector<CstarStudyRow> rows;
  rows.reserve(c1_values.size());
  for (std::size_t k = 0; k < c1_values.size(); ++k) {
    const double c1 = c1_values[k];
    if (!(c1 > 0.0)) throw ValidationError("c1 values must be positive");
    if (k > 0 && !(c1 > c1_values[k - 1])) {
      throw ValidationError("c1 values must be strictly ascending");
    }
    const ModelParams params(base.alpha(), base.beta(), c1, base.c2());
    const double cs = c_star(c1, base.c2());
    CstarStudyRow row{c1, cs, classify_region(params), std::nullopt};
    if (row.region.label == RegionLabel::IIIe) {
      row.escape_from_cstar = escape_shock(params, Fraction(cs));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Preset> case_study_presets() {
  return {
      {"iran-2009", "stable police state: large policing capacity and efficiency",
       ModelParams(0.90, 0.30, 1.0, 100.0), RegionLabel::III0},
      {"china", "meta-stable police state with persistent low-level unrest",
       ModelParams(0.97, 0.10, kDefaultEnthusiasm, kDefaultPolicingEfficiency),
       RegionLabel::IIIe},
      {"somalia", "failed state: weak media and weak government",
       ModelParams(0.30, 0.20, kDefaultEnthusiasm, kDefaultPolicingEfficiency),
       RegionLabel::II},
  };
}

}  // namespace unrest
