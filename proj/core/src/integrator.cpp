#include "unrest/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "unrest/errors.hpp"

namespace unrest {

void SolverConfig::validate() const {
  if (!(step > 0.0 && std::isfinite(step))) throw ValidationError("solver step must be > 0");
  if (!(crossing_tolerance > 0.0 && std::isfinite(crossing_tolerance))) {
    throw ValidationError("solver crossing_tolerance must be > 0");
  }
  if (!(sample_interval >= 0.0 && std::isfinite(sample_interval))) {
    throw ValidationError("solver sample_interval must be >= 0");
  }
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Shock: return "shock";
    case EventKind::ThresholdCrossing: return "threshold_crossing";
    case EventKind::RegionChange: return "region_change";
  }
  return "?";
}

double Trajectory::final_r() const {
  if (samples.empty()) throw ValidationError("empty trajectory");
  return samples.back().r;
}

double Trajectory::value_at(double t) const {
  if (samples.empty()) throw ValidationError("empty trajectory");
  auto after = std::upper_bound(samples.begin(), samples.end(), t,
                                [](double x, const Sample& s) { return x < s.t; });
  if (after == samples.begin()) return samples.front().r;
  const Sample& lo = *(after - 1);
  if (after == samples.end() || lo.t == t) return lo.r;
  const double w = (t - lo.t) / (after->t - lo.t);
  return lo.r + w * (after->r - lo.r);
}

double step_exact(double r0, double a, double b, double dt) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(dt >= 0.0)) {
    throw ValidationError("step_exact needs a >= 0, b >= 0, dt >= 0");
  }
  const double k = a + b;
  if (k == 0.0) return r0;
  const double limit = a / k;
  return limit + (r0 - limit) * std::exp(-k * dt);
}

namespace {

struct Switches {
  int v;
  int p;
  friend bool operator==(Switches, Switches) = default;
};

// Parameters on a segment without interior breakpoints, where every track
// is linear in t.
class SegmentParams {
 public:
  SegmentParams(const Schedule& schedule, double t0, double t1)
      : t0_(t0), span_(t1 - t0), start_(schedule.at(t0)), end_(schedule.at(t1)) {
    constant_ = start_ == end_;
  }

  struct Values {
    double alpha, beta, c1, c2;
  };

  Values at(double t) const noexcept {
    if (constant_ || span_ <= 0.0) {
      return {start_.alpha(), start_.beta(), start_.c1(), start_.c2()};
    }
    const double w = std::clamp((t - t0_) / span_, 0.0, 1.0);
    auto lerp = [w](double a, double b) { return a + w * (b - a); };
    return {lerp(start_.alpha(), end_.alpha()), lerp(start_.beta(), end_.beta()),
            lerp(start_.c1(), end_.c1()), lerp(start_.c2(), end_.c2())};
  }

  bool constant() const noexcept { return constant_; }

 private:
  double t0_;
  double span_;
  ModelParams start_;
  ModelParams end_;
  bool constant_ = true;
};

Switches switches_at(const SegmentParams& seg, double t, double r) {
  const auto q = seg.at(t);
  return {visibility(r, q.alpha), policing(r, q.beta)};
}

double frozen_rate(const SegmentParams& seg, Switches s, double t, double r) {
  const auto q = seg.at(t);
  return q.c1 * s.v * (1.0 - r) - q.c2 * s.p * r;
}

double rk4(const SegmentParams& seg, Switches s, double t, double r, double h) {
  const double k1 = frozen_rate(seg, s, t, r);
  const double k2 = frozen_rate(seg, s, t + 0.5 * h, r + 0.5 * h * k1);
  const double k3 = frozen_rate(seg, s, t + 0.5 * h, r + 0.5 * h * k2);
  const double k4 = frozen_rate(seg, s, t + h, r + h * k3);
  const double next = r + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
  if (!std::isfinite(next)) throw SolverError("non-finite state at t=" + std::to_string(t));
  return std::clamp(next, 0.0, 1.0);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Simulation {
 public:
  Simulation(const Schedule& schedule, const SolverConfig& config, Trajectory& out)
      : schedule_(schedule), config_(config), out_(out) {}

  void record(double t, double r) {
    const ModelParams params = schedule_.at(t);
    out_.samples.push_back(Sample{t, r, params, visibility(r, params.alpha()),
                                  policing(r, params.beta()), classify_region(params)});
  }

  void note_region(double t) {
    const Region region = classify_region(schedule_.at(t));
    if (last_region_ && last_region_->label != region.label) {
      out_.events.push_back({t, EventKind::RegionChange,
                             std::string(to_string(last_region_->label)) + "->" +
                                 std::string(to_string(region.label))});
    }
    last_region_ = region;
  }

  // Integrates [t0, t1]; no breakpoint lies strictly inside.
  double segment(double t0, double t1, double r) {
    const SegmentParams seg(schedule_, t0, t1);
    const auto n = static_cast<long>(std::max(1.0, std::ceil((t1 - t0) / config_.step - 1e-9)));
    const double h = (t1 - t0) / static_cast<double>(n);
    double t = t0;
    for (long k = 1; k <= n; ++k) {
      const double target = k == n ? t1 : t0 + static_cast<double>(k) * h;
      r = advance(seg, t, r, target);
      t = target;
      if (!seg.constant()) note_region(t);
      if (config_.sample_interval == 0.0 && k < n) record(t, r);
    }
    return r;
  }

 private:
  double advance(const SegmentParams& seg, double t, double r, double target) {
    for (int guard = 0; t < target; ++guard) {
      if (guard > 100000) throw SolverError("switch chattering near t=" + format_number(t));
      const Switches mode = switches_at(seg, t, r);
      const double dt = target - t;
      const double r_end = rk4(seg, mode, t, r, dt);
      if (switches_at(seg, target, r_end) == mode) return r_end;

      double lo = 0.0;
      double hi = 1.0;
      double r_hi = r_end;
      for (int it = 0; it < 200; ++it) {
        if (gap(seg, mode, t + hi * dt, r_hi) <= config_.crossing_tolerance) break;
        if ((hi - lo) * dt <= 1e-15 * std::max(1.0, t)) break;
        const double mid = 0.5 * (lo + hi);
        const double r_mid = rk4(seg, mode, t, r, mid * dt);
        if (switches_at(seg, t + mid * dt, r_mid) == mode) {
          lo = mid;
        } else {
          hi = mid;
          r_hi = r_mid;
        }
      }
      const double t_cross = hi == 1.0 ? target : t + hi * dt;
      note_crossing(seg, mode, t_cross, r_hi);
      t = t_cross;
      r = r_hi;
    }
    return r;
  }

  // Distance from r to the threshold(s) whose switch differs from `mode`.
  static double gap(const SegmentParams& seg, Switches mode, double t, double r) {
    const auto q = seg.at(t);
    double g = 0.0;
    if (visibility(r, q.alpha) != mode.v) g = std::max(g, std::abs(r - (1.0 - q.alpha)));
    if (policing(r, q.beta) != mode.p) g = std::max(g, std::abs(r - q.beta));
    return g;
  }

  void note_crossing(const SegmentParams& seg, Switches before, double t, double r) {
    const Switches after = switches_at(seg, t, r);
    if (after.v != before.v) {
      out_.events.push_back({t, EventKind::ThresholdCrossing,
                             std::string(after.v ? "visibility on" : "visibility off") +
                                 " r=" + format_number(r)});
    }
    if (after.p != before.p) {
      out_.events.push_back({t, EventKind::ThresholdCrossing,
                             std::string(after.p ? "policing on" : "policing off") +
                                 " r=" + format_number(r)});
    }
  }

  const Schedule& schedule_;
  const SolverConfig& config_;
  Trajectory& out_;
  std::optional<Region> last_region_;
};

enum BoundaryFlags : unsigned { kStructural = 1u, kSample = 2u, kShock = 4u };

struct Boundary {
  double t;
  unsigned flags;
  double delta_r = 0.0;
};

std::vector<Boundary> make_boundaries(const Schedule& schedule, std::span<const Shock> shocks,
                                      double t_end, const SolverConfig& config) {
  std::vector<Boundary> bounds;
  bounds.push_back({0.0, kSample});
  bounds.push_back({t_end, kSample});
  for (double bt : schedule.breakpoint_times()) {
    if (bt > 0.0 && bt < t_end) bounds.push_back({bt, kStructural});
  }
  for (const auto& s : shocks) {
    if (s.time <= t_end) bounds.push_back({s.time, kShock, s.delta_r});
  }
  std::sort(bounds.begin(), bounds.end(),
            [](const Boundary& a, const Boundary& b) { return a.t < b.t; });
  std::vector<Boundary> merged;
  for (const auto& b : bounds) {
    if (!merged.empty() && merged.back().t == b.t) {
      merged.back().flags |= b.flags;
      merged.back().delta_r += b.delta_r;
    } else {
      merged.push_back(b);
    }
  }

  if (config.sample_interval > 0.0) {
    // Grid times within a hair of a structural boundary snap onto it.
    const double snap = 1e-12 * std::max(1.0, t_end);
    std::vector<Boundary> grid;
    for (long k = 1;; ++k) {
      const double t = static_cast<double>(k) * config.sample_interval;
      if (t >= t_end - snap) break;
      auto it = std::lower_bound(merged.begin(), merged.end(), t - snap,
                                 [](const Boundary& b, double x) { return b.t < x; });
      if (it != merged.end() && it->t <= t + snap) {
        it->flags |= kSample;
      } else {
        grid.push_back({t, kSample});
      }
    }
    merged.insert(merged.end(), grid.begin(), grid.end());
    std::sort(merged.begin(), merged.end(),
              [](const Boundary& a, const Boundary& b) { return a.t < b.t; });
  }
  return merged;
}

}  // namespace

Trajectory simulate(Fraction r0, const Schedule& schedule, std::span<const Shock> shocks,
                    double t_end, const SolverConfig& config) {
  if (!(t_end > 0.0 && std::isfinite(t_end))) throw ValidationError("t_end must be > 0");
  config.validate();
  const std::vector<Shock> normalized = normalize_shocks(shocks);
  for (const auto& s : normalized) {
    if (s.time < 0.0) throw ValidationError("shock time must be >= 0");
  }
  const std::vector<Boundary> bounds = make_boundaries(schedule, normalized, t_end, config);

  Trajectory out;
  Simulation sim(schedule, config, out);
  sim.note_region(0.0);

  double t = 0.0;
  double r = r0.value();
  for (const auto& b : bounds) {
    if (b.t > t) {
      r = sim.segment(t, b.t, r);
      t = b.t;
    }
    if (b.flags & kShock) {
      sim.record(t, r);
      const double before = r;
      r = apply_shock(Fraction(r), Shock{t, b.delta_r}).value();
      out.events.push_back({t, EventKind::Shock,
                            "dr=" + format_number(b.delta_r) + " r:" + format_number(before) +
                                "->" + format_number(r)});
      sim.record(t, r);
    } else if ((b.flags & kSample) || config.sample_interval == 0.0) {
      sim.record(t, r);
    }
  }
  return out;
}

Trajectory simulate(Fraction r0, const ModelParams& params, std::span<const Shock> shocks,
                    double t_end, const SolverConfig& config) {
  return simulate(r0, Schedule::constant(params), shocks, t_end, config);
}

}  // namespace unrest
