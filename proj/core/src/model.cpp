#include "unrest/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "unrest/errors.hpp"

namespace unrest {

namespace {

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

Fraction::Fraction(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError("fraction must lie in [0,1], got " + number(value));
  }
}

Fraction Fraction::clamped(double value) {
  if (std::isnan(value)) throw ValidationError("fraction is NaN");
  return Fraction(std::clamp(value, 0.0, 1.0));
}

ModelParams::ModelParams(double alpha, double beta, double c1, double c2)
    : alpha_(alpha), beta_(beta), c1_(c1), c2_(c2) {
  if (!in_open_unit(alpha)) {
    throw ValidationError("alpha must lie in (0,1), got " + number(alpha));
  }
  if (!in_open_unit(beta)) {
    throw ValidationError("beta must lie in (0,1), got " + number(beta));
  }
  if (!(c1 > 0.0 && std::isfinite(c1))) {
    throw ValidationError("c1 must be positive and finite, got " + number(c1));
  }
  if (!(c2 > 0.0 && std::isfinite(c2))) {
    throw ValidationError("c2 must be positive and finite, got " + number(c2));
  }
}

int visibility(double r, double alpha) noexcept { return r > 1.0 - alpha ? 1 : 0; }

int policing(double r, double beta) noexcept { return r < beta ? 1 : 0; }

double rate(double r, const ModelParams& params) noexcept {
  return params.c1() * visibility(r, params.alpha()) * (1.0 - r) -
         params.c2() * policing(r, params.beta()) * r;
}

double rhs(Fraction r, const ModelParams& params) noexcept { return rate(r.value(), params); }

double c_star(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw ValidationError("c_star needs c1 > 0 and c2 > 0");
  return c1 / (c1 + c2);
}

std::string_view to_string(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::I: return "I";
    case RegionLabel::II: return "II";
    case RegionLabel::III0: return "III0";
    case RegionLabel::IIIe: return "IIIe";
    case RegionLabel::III1: return "III1";
  }
  return "?";
}

std::string_view to_string(BoundaryTag tag) noexcept {
  switch (tag) {
    case BoundaryTag::AlphaPlusBetaEqOne: return "alpha_plus_beta_eq_1";
    case BoundaryTag::CstarEqVisibilityThreshold: return "cstar_eq_visibility_threshold";
    case BoundaryTag::CstarEqBeta: return "cstar_eq_beta";
  }
  return "?";
}

std::optional<RegionLabel> parse_region_label(std::string_view text) noexcept {
  for (auto label : {RegionLabel::I, RegionLabel::II, RegionLabel::III0, RegionLabel::IIIe,
                     RegionLabel::III1}) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::AsymptoticallyStable: return "asymptotically_stable";
    case Stability::Unstable: return "unstable";
    case Stability::ContinuumStable: return "continuum_stable";
  }
  return "?";
}

Region classify_region(const ModelParams& params, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("classification tolerance must be >= 0");

  const double excess = params.alpha() + params.beta() - 1.0;
  if (std::abs(excess) <= tol) {
    return {RegionLabel::I, static_cast<std::uint8_t>(BoundaryTag::AlphaPlusBetaEqOne)};
  }
  if (excess < 0.0) return {RegionLabel::II, 0};

  const double cs = c_star(params.c1(), params.c2());
  const double threshold = params.visibility_threshold();
  if (cs <= threshold + tol) {
    const bool tie = std::abs(cs - threshold) <= tol;
    return {RegionLabel::III0,
            tie ? static_cast<std::uint8_t>(BoundaryTag::CstarEqVisibilityThreshold)
                : std::uint8_t{0}};
  }
  if (cs >= params.beta() - tol) {
    const bool tie = std::abs(cs - params.beta()) <= tol;
    return {RegionLabel::III1,
            tie ? static_cast<std::uint8_t>(BoundaryTag::CstarEqBeta) : std::uint8_t{0}};
  }
  return {RegionLabel::IIIe, 0};
}

bool Interval::contains(double x) const noexcept {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

const Equilibrium* EquilibriumSet::find_stable(double value, double tol) const noexcept {
  for (const auto& e : equilibria) {
    if (e.stability == Stability::AsymptoticallyStable &&
        std::abs(e.value.value() - value) <= tol) {
      return &e;
    }
  }
  return nullptr;
}

EquilibriumSet equilibria(const ModelParams& params, double tol) {
  const Region region = classify_region(params, tol);
  const double a = params.visibility_threshold();
  const double b = params.beta();

  auto stable = [](double v, Interval basin) {
    return Equilibrium{Fraction(v), Stability::AsymptoticallyStable, basin};
  };
  auto unstable = [](double v) {
    return Equilibrium{Fraction(v), Stability::Unstable, std::nullopt};
  };

  std::vector<Equilibrium> list;
  switch (region.label) {
    case RegionLabel::I:
      list = {stable(0.0, {0.0, b, false, false}), unstable(b),
              stable(1.0, {a, 1.0, false, false})};
      break;
    case RegionLabel::II:
      list = {stable(0.0, {0.0, b, false, false}),
              unstable(b),
              Equilibrium{Fraction(b), Stability::ContinuumStable, Interval{b, a, false, false}},
              unstable(a),
              stable(1.0, {a, 1.0, false, false})};
      break;
    case RegionLabel::III0:
      // (0, 1-alpha] joined with (1-alpha, beta).
      list = {stable(0.0, {0.0, b, false, false}), stable(1.0, {b, 1.0, true, false})};
      break;
    case RegionLabel::IIIe: {
      const double cs = c_star(params.c1(), params.c2());
      list = {stable(0.0, {0.0, a, false, true}), stable(cs, {a, b, false, false}),
              stable(1.0, {b, 1.0, true, false})};
      break;
    }
    case RegionLabel::III1:
      list = {stable(0.0, {0.0, a, false, true}), stable(1.0, {a, 1.0, false, false})};
      break;
  }
  return EquilibriumSet{params, region, std::move(list)};
}

Equilibrium predict_limit(Fraction r0, const ModelParams& params, double tol) {
  const EquilibriumSet set = equilibria(params, tol);
  const double r = r0.value();

  for (const auto& e : set.equilibria) {
    if (e.stability == Stability::Unstable && e.value.value() == r) return e;
  }
  for (const auto& e : set.equilibria) {
    if (e.stability == Stability::ContinuumStable && e.basin->interior_contains(r)) {
      return Equilibrium{r0, Stability::ContinuumStable, Interval{r, r, true, true}};
    }
  }
  for (const auto& e : set.equilibria) {
    if (e.stability != Stability::AsymptoticallyStable) continue;
    if (e.value.value() == r || e.basin->contains(r)) return e;
  }
  // Unreachable for valid params: the basins and fixed points cover [0,1].
  throw ValidationError("no equilibrium attracts r0");
}

namespace {

double calibrate(double fraction, double horizon, const char* what) {
  if (!in_open_unit(fraction)) {
    throw ValidationError(std::string(what) + " must lie in (0,1), got " + number(fraction));
  }
  if (!(horizon > 0.0 && std::isfinite(horizon))) {
    throw ValidationError("horizon must be positive, got " + number(horizon));
  }
  return -std::log1p(-fraction) / horizon;
}

}  // namespace

double calibrate_c1(double spread_fraction, double horizon) {
  return calibrate(spread_fraction, horizon, "spread fraction");
}

double calibrate_c2(double clear_fraction, double horizon) {
  return calibrate(clear_fraction, horizon, "clear fraction");
}

}  // namespace unrest
