#include "unrest/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unrest/errors.hpp"

namespace unrest {

Track::Track(std::vector<Breakpoint> breakpoints) : points_(std::move(breakpoints)) {
  if (points_.empty()) throw ValidationError("track needs at least one breakpoint");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].time) || !std::isfinite(points_[i].value)) {
      throw ValidationError("track breakpoint " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(points_[i].time > points_[i - 1].time)) {
      throw ValidationError("track breakpoint times must be strictly increasing (breakpoint " +
                            std::to_string(i) + ")");
    }
  }
}

Track Track::constant(double value) { return Track({{0.0, value}}); }

double Track::operator()(double t) const noexcept {
  if (t <= points_.front().time) return points_.front().value;
  if (t >= points_.back().time) return points_.back().value;
  auto upper = std::upper_bound(points_.begin(), points_.end(), t,
                                [](double x, const Breakpoint& b) { return x < b.time; });
  const Breakpoint& hi = *upper;
  const Breakpoint& lo = *(upper - 1);
  const double w = (t - lo.time) / (hi.time - lo.time);
  return lo.value + w * (hi.value - lo.value);
}

bool Track::is_constant() const noexcept {
  return std::all_of(points_.begin(), points_.end(),
                     [&](const Breakpoint& b) { return b.value == points_.front().value; });
}

namespace {

void check_track(const Track& track, const char* name, bool unit_interval) {
  const auto points = track.breakpoints();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = points[i].value;
    const bool ok = unit_interval ? (v > 0.0 && v < 1.0) : (v > 0.0);
    if (!ok) {
      throw ValidationError(std::string(name) +
                            (unit_interval ? " must lie in (0,1)" : " must be positive") +
                            " (breakpoint " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

Schedule::Schedule(Track alpha, Track beta, Track c1, Track c2)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), c1_(std::move(c1)), c2_(std::move(c2)) {
  check_track(alpha_, "alpha", true);
  check_track(beta_, "beta", true);
  check_track(c1_, "c1", false);
  check_track(c2_, "c2", false);
}

Schedule Schedule::constant(const ModelParams& params) {
  return Schedule(Track::constant(params.alpha()), Track::constant(params.beta()),
                  Track::constant(params.c1()), Track::constant(params.c2()));
}

ModelParams Schedule::at(double t) const { return {alpha_(t), beta_(t), c1_(t), c2_(t)}; }

bool Schedule::is_constant() const noexcept {
  return alpha_.is_constant() && beta_.is_constant() && c1_.is_constant() &&
         c2_.is_constant();
}

std::vector<double> Schedule::breakpoint_times() const {
  std::vector<double> times;
  for (const Track* track : {&alpha_, &beta_, &c1_, &c2_}) {
    for (const auto& b : track->breakpoints()) times.push_back(b.time);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

void validate_shock(const Shock& shock) {
  if (!std::isfinite(shock.time)) throw ValidationError("shock time must be finite");
  if (!(shock.delta_r > 0.0 && shock.delta_r <= 1.0)) {
    throw ValidationError("shock delta_r must lie in (0,1]");
  }
}

std::vector<Shock> normalize_shocks(std::span<const Shock> shocks) {
  std::vector<Shock> out(shocks.begin(), shocks.end());
  for (const auto& s : out) validate_shock(s);
  std::stable_sort(out.begin(), out.end(),
                   [](const Shock& a, const Shock& b) { return a.time < b.time; });
  std::vector<Shock> merged;
  for (const auto& s : out) {
    if (!merged.empty() && merged.back().time == s.time) {
      merged.back().delta_r += s.delta_r;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

Fraction apply_shock(Fraction r, const Shock& shock) {
  validate_shock(shock);
  return Fraction(std::min(r.value() + shock.delta_r, 1.0));
}

Schedule egypt_schedule() {
  constexpr double d = 1.0 / 30.0;
  Track alpha({{11 * d, 0.96}, {14 * d, 0.98}, {15 * d, 0.96}, {18 * d, 0.96}, {19 * d, 0.98}});
  Track c1({{11 * d, 2.30}, {14 * d, 3.26}});
  Track beta({{18 * d, 0.06}, {19 * d, 0.04}});
  Track c2({{18 * d, 69.1}, {19 * d, 50.0}});
  return Schedule(std::move(alpha), std::move(beta), std::move(c1), std::move(c2));
}

}  // namespace unrest
