#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "painleve/integrate.hpp"

namespace painleve {

// Crossing detection starts here rather than at the origin: s - sqrt(t) has
// infinite slope at t = 0, and the first crossing provably lies beyond t = 1.
inline constexpr double kCrossingWindowStart = 1e-6;

// Gap-length coefficients for intervals between consecutive crossings:
// below the square root, gap < pi 6^{-1/2} a^{-1/4}; above it (crossings at
// both ends), gap > pi (6(1+sqrt3))^{-1/2} b^{-1/4}.
inline const double kBelowGapUpperCoef = std::numbers::pi / std::sqrt(6.0);
inline const double kAboveGapLowerCoef =
    std::numbers::pi / std::sqrt(6.0 * (1.0 + std::sqrt(3.0)));

// The squeeze window (0, (28/3)^{1/5}) on which t^3 - (3/28) t^8 stays positive.
inline const double kSqueezeWindowEnd = std::pow(28.0 / 3.0, 0.2);

// Lower squeeze envelope t^3 - (3/28) t^8; also the 8th-order Taylor polynomial.
inline double squeeze_lower(double t) {
  const double t3 = t * t * t;
  const double t8 = t3 * t3 * t * t;
  return t3 - (3.0 / 28.0) * t8;
}

// Upper squeeze envelope t^3 - (3/28) t^8 + (3/364) t^13 - (3/13328) t^18.  It
// differs from the 18th-order Taylor polynomial only in the last coefficient
// (the exact one is -95/173264).
inline double refined_squeeze_upper(double t) {
  const double t3 = t * t * t;
  const double t5 = t3 * t * t;
  const double t8 = t3 * t5;
  const double t13 = t8 * t5;
  const double t18 = t13 * t5;
  return t3 - (3.0 / 28.0) * t8 + (3.0 / 364.0) * t13 - (3.0 / 13328.0) * t18;
}

enum class CrossingDirection { upward, downward };

constexpr std::string_view direction_name(CrossingDirection d) {
  return d == CrossingDirection::upward ? "up" : "down";
}

struct CrossingEvent {
  int index = 0;  // 1-based ordinal
  double t = 0.0;
  CrossingDirection direction = CrossingDirection::upward;
  double refinement_width = 0.0;
};

namespace detail {

inline void require_oscillatory(const Trajectory& traj) {
  if (traj.form() != Form::PiMinus)
    throw std::invalid_argument("expected a pi-minus (oscillatory) trajectory");
  if (traj.direction() < 0.0)
    throw std::invalid_argument("expected a forward trajectory");
}

// Visits >= samples_per_step dense points per accepted step over (lo, hi].
template <class Fn>
void scan_dense(const Trajectory& traj, double lo, double hi, int samples_per_step, Fn&& fn) {
  for (const Step& st : traj.steps()) {
    const double a = std::max(st.t0, lo);
    const double b = std::min(st.t1, hi);
    if (!(a < b)) continue;
    for (int i = 1; i <= samples_per_step; ++i) {
      const double t = std::min(a + (b - a) * i / samples_per_step, b);
      fn(eval_step(st, t));
    }
  }
}

}  // namespace detail

// All crossings of s with sqrt(t) in (0, t_max], refined to root_tol, with
// the side the solution moves to at each root.
inline std::vector<CrossingEvent> crossings(const Trajectory& traj, double t_max,
                                            double root_tol = kDefaultRootTol) {
  detail::require_oscillatory(traj);
  if (!(t_max > 0.0) || t_max > traj.t_end())
    throw std::out_of_range("crossings: trajectory does not cover (0, t_max]");

  auto deviation = [](const State& st) { return st.s - std::sqrt(st.t); };
  std::vector<CrossingEvent> events;
  for (const RootHit& hit : find_roots(traj, deviation, kCrossingWindowStart, t_max, root_tol)) {
    const State st = traj.at(hit.t);
    const double slope = st.sdot - 0.5 / std::sqrt(hit.t);
    events.push_back({static_cast<int>(events.size()) + 1, hit.t,
                      slope >= 0.0 ? CrossingDirection::upward : CrossingDirection::downward,
                      hit.width});
  }
  return events;
}

// Residual of the first integral sdot^2 + 4 s^3 + 12 q - 12 t s; identically
// zero along the exact solution, so its size measures solver error.
inline double first_integral_residual(const Trajectory& traj, double t) {
  if (t < 0.0) throw std::domain_error("first_integral_residual: t must be nonnegative");
  const State st = traj.at(t);
  return st.sdot * st.sdot + 4.0 * st.s * st.s * st.s + 12.0 * st.q - 12.0 * t * st.s;
}

struct BoundsProbe {
  double t = 0.0;
  double s = 0.0;
  double margin_positive = 0.0;                // s
  double margin_upper = 0.0;                   // sqrt(3 t) - s
  std::optional<double> margin_cube_upper;     // t^3 - s
  std::optional<double> margin_cube_lower;     // s - (t^3 - (3/28) t^8)
  std::optional<double> margin_refined_upper;  // refined envelope - s
  bool passed = true;
};

struct BoundsReport {
  std::vector<BoundsProbe> probes;
  double worst_positive = std::numeric_limits<double>::infinity();
  double worst_upper = std::numeric_limits<double>::infinity();
  std::optional<double> worst_cube_upper;
  std::optional<double> worst_cube_lower;
  std::optional<double> worst_refined_upper;
  bool all_passed = true;
};

// Audits 0 < s < sqrt(3 t) at every probe, plus both squeeze envelopes on the
// squeeze window.  Violations become report entries, never exceptions.
inline BoundsReport bounds_audit(const Trajectory& traj, const std::vector<double>& probes) {
  detail::require_oscillatory(traj);
  BoundsReport report;
  auto fold_min = [](std::optional<double>& acc, double v) {
    acc = acc ? std::min(*acc, v) : v;
  };
  for (double t : probes) {
    if (!(t > 0.0)) throw std::domain_error("bounds_audit: probes must be positive");
    const State st = traj.at(t);
    BoundsProbe probe;
    probe.t = t;
    probe.s = st.s;
    probe.margin_positive = st.s;
    probe.margin_upper = std::sqrt(3.0 * t) - st.s;
    report.worst_positive = std::min(report.worst_positive, probe.margin_positive);
    report.worst_upper = std::min(report.worst_upper, probe.margin_upper);
    bool ok = probe.margin_positive > 0.0 && probe.margin_upper > 0.0;
    if (t < kSqueezeWindowEnd) {
      probe.margin_cube_upper = t * t * t - st.s;
      probe.margin_cube_lower = st.s - squeeze_lower(t);
      probe.margin_refined_upper = refined_squeeze_upper(t) - st.s;
      fold_min(report.worst_cube_upper, *probe.margin_cube_upper);
      fold_min(report.worst_cube_lower, *probe.margin_cube_lower);
      fold_min(report.worst_refined_upper, *probe.margin_refined_upper);
      ok = ok && *probe.margin_cube_upper > 0.0 && *probe.margin_cube_lower > 0.0 &&
           *probe.margin_refined_upper > 0.0;
    }
    probe.passed = ok;
    report.all_passed = report.all_passed && ok;
    report.probes.push_back(probe);
  }
  return report;
}

enum class IntervalSide { below, above };
enum class GapBoundKind { upper_for_below, lower_for_above };

struct GapRecord {
  double a = 0.0;
  double b = 0.0;
  IntervalSide side = IntervalSide::below;
  double gap = 0.0;
  double bound_value = 0.0;
  GapBoundKind bound_kind = GapBoundKind::upper_for_below;
  double margin = 0.0;  // positive iff the bound holds strictly
  bool passed = false;
};

// One record per consecutive crossing pair.  The side on (a, b) follows from
// the direction at a; both endpoints being genuine crossings is what the
// above-interval lower bound requires, so a trailing partial interval never
// produces a record.
inline std::vector<GapRecord> gap_audit(const std::vector<CrossingEvent>& events) {
  std::vector<GapRecord> records;
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    GapRecord rec;
    rec.a = events[i].t;
    rec.b = events[i + 1].t;
    rec.gap = rec.b - rec.a;
    if (events[i].direction == CrossingDirection::upward) {
      rec.side = IntervalSide::above;
      rec.bound_kind = GapBoundKind::lower_for_above;
      rec.bound_value = kAboveGapLowerCoef * std::pow(rec.b, -0.25);
      rec.margin = rec.gap - rec.bound_value;
    } else {
      rec.side = IntervalSide::below;
      rec.bound_kind = GapBoundKind::upper_for_below;
      rec.bound_value = kBelowGapUpperCoef * std::pow(rec.a, -0.25);
      rec.margin = rec.bound_value - rec.gap;
    }
    rec.passed = rec.margin > 0.0;
    records.push_back(rec);
  }
  return records;
}

// Wiring check of the deviation equation f'' = phi - Phi f for f = s - sqrt(t),
// phi = 1/(4 t sqrt t), Phi = 6 (sqrt t + s), with s'' taken from the equation
// itself.  The exact value is zero; what remains is rounding noise.
inline double deviation_residual(const Trajectory& traj, double t) {
  if (!(t > 0.0)) throw std::domain_error("deviation_residual: t must be positive");
  const State st = traj.at(t);
  const double sqrt_t = std::sqrt(t);
  const double f = st.s - sqrt_t;
  const double phi = 0.25 / (t * sqrt_t);
  const double big_phi = 6.0 * (sqrt_t + st.s);
  const double fddot = rhs(Form::PiMinus, t, st.s) + phi;
  return fddot - (phi - big_phi * f);
}

struct EnvelopeStats {
  double window_lo = 0.0;
  double window_hi = 0.0;
  double max_ratio = 0.0;       // sup s / sqrt(t)
  double max_scaled_dev = 0.0;  // sup |s - sqrt(t)| t^{1/8}
  long samples = 0;
};

// Dense scan over (window_lo, window_hi] of the ratio to sqrt(t) and of the
// t^{1/8}-scaled deviation.
inline EnvelopeStats envelope_stats(const Trajectory& traj, double window_lo, double window_hi,
                                    int samples_per_step = 64) {
  detail::require_oscillatory(traj);
  if (!(window_lo >= 0.0) || !(window_lo < window_hi))
    throw std::invalid_argument("envelope_stats: bad window");
  if (window_hi > traj.t_end())
    throw std::out_of_range("envelope_stats: window outside trajectory coverage");

  EnvelopeStats stats;
  stats.window_lo = window_lo;
  stats.window_hi = window_hi;
  detail::scan_dense(traj, window_lo, window_hi, samples_per_step, [&](const State& st) {
    if (!(st.t > 0.0)) return;
    const double sqrt_t = std::sqrt(st.t);
    stats.max_ratio = std::max(stats.max_ratio, st.s / sqrt_t);
    stats.max_scaled_dev =
        std::max(stats.max_scaled_dev, std::fabs(st.s - sqrt_t) * std::pow(st.t, 0.125));
    ++stats.samples;
  });
  return stats;
}

}  // namespace painleve
