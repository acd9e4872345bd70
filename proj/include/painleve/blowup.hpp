#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "painleve/integrate.hpp"
#include "painleve/quadrature.hpp"

namespace painleve {

// Integration horizon for blow-up hunting; the blow-up time is provably below
// the coarse upper bound 1.9601..., so reaching this horizon means no blow-up.
inline constexpr double kBlowupHorizon = 2.0;

struct BlowupBracket {
  double lower = 0.0;
  double upper = 0.0;
  double tau = 0.0;
  double s_at_tau = 0.0;
};

struct BlowupEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double tau_used = 0.0;
  double s_at_tau = 0.0;
  std::vector<BlowupBracket> history;  // nested, shrinking
  bool converged = false;              // final width <= requested width_tol
  double pole_fit = 0.0;               // two-point fit of s ~ (t_pole - t)^{-2}; not certified

  double width() const { return upper - lower; }
};

// Once s(tau) > 0 is known at tau > 0, the solution cannot survive past
// tau + s(tau)^{-1/2}; the blow-up time lies in (tau, tau + s(tau)^{-1/2}].
inline std::pair<double, double> bracket_from_state(double tau, double s_tau) {
  if (!(tau > 0.0)) throw std::domain_error("bracket_from_state: tau must be positive");
  if (!(s_tau > 0.0)) throw std::domain_error("bracket_from_state: s(tau) must be positive");
  return {tau, tau + 1.0 / std::sqrt(s_tau)};
}

// Closed-form lower bound on the blow-up time:
//   sqrt(3/2) arctan sqrt(2/3) + (2/3) log(5/2) = 1.4494...
inline double analytic_lower_bound() {
  return std::sqrt(1.5) * std::atan(std::sqrt(2.0 / 3.0)) + (2.0 / 3.0) * std::log(2.5);
}

// Minimum of tau + tau^{-3/2} over tau, attained at tau = (3/2)^{2/5}:
//   (3/2)^{2/5} + (2/3)^{3/5} = 1.9601...
inline double coarse_upper_bound() { return std::pow(1.5, 0.4) + std::pow(2.0 / 3.0, 0.6); }

// integral_0^inf ds / (2 s^{3/2} + 3 s^{2/3}), a lower bound on the blow-up
// time.  Split at s = 1; s = r^3 below removes the endpoint singularity,
// s = u^{-2} above compactifies the tail:
//   integral_0^1 dr / (1 + (2/3) r^{5/2})  +  integral_0^1 du / (1 + (3/2) u^{5/3})
inline double bounding_integral() {
  const QuadratureResult below = integrate_adaptive(
      [](double r) { return 1.0 / (1.0 + (2.0 / 3.0) * std::pow(r, 2.5)); }, 0.0, 1.0, 1e-13);
  const QuadratureResult above = integrate_adaptive(
      [](double u) { return 1.0 / (1.0 + 1.5 * std::pow(u, 5.0 / 3.0)); }, 0.0, 1.0, 1e-13);
  return below.value + above.value;
}

namespace detail {

// Fits t_pole from the last two accepted points of a guard-terminated run via
// s = C (t_pole - t)^{-2}, i.e. sqrt(s1)(t_pole - t1) = sqrt(s2)(t_pole - t2).
inline double fit_pole_location(const Trajectory& traj) {
  const std::vector<Step>& steps = traj.steps();
  if (steps.size() < 2) return 0.0;
  const Step& p = steps[steps.size() - 2];
  const Step& q = steps.back();
  const double r1 = std::sqrt(p.y1[0]);
  const double r2 = std::sqrt(q.y1[0]);
  if (!(r2 > r1)) return 0.0;
  return (r2 * q.t1 - r1 * p.t1) / (r2 - r1);
}

}  // namespace detail

// Brackets the blow-up time by climbing a ladder of guard heights 10^{2k}
// (one decade of bracket width per rung) topped by a refinement guard of
// 16 width_tol^{-2}, which lands the final width near width_tol / 4.  The
// certified bracket always hangs left of the blow-up time by its own width,
// so the final rung has to undershoot the requested tolerance for the bracket
// to sit strictly inside a window of that size.
inline BlowupEstimate estimate_blowup(IntegratorConfig config = {}, double width_tol = 0.01) {
  if (!(width_tol > 0.0)) throw std::invalid_argument("estimate_blowup: width_tol must be positive");
  config.t_max = kBlowupHorizon;

  const double final_guard = std::min(16.0 / (width_tol * width_tol), 1e18);
  std::vector<double> guards;
  for (int k = 1; k <= 6; ++k) {
    const double g = std::pow(100.0, k);
    if (g < final_guard) guards.push_back(g);
  }
  guards.push_back(final_guard);

  BlowupEstimate est;
  for (double guard : guards) {
    config.s_max = guard;
    const Trajectory traj = integrate(Form::PiPlus, config);
    if (traj.termination() == Termination::reached_t_max)
      throw std::runtime_error("estimate_blowup: no blow-up encountered below the analytic horizon");
    const State fin = traj.final_state();
    const auto [lo, up] = bracket_from_state(fin.t, fin.s);
    est.history.push_back({lo, up, fin.t, fin.s});
    est.pole_fit = detail::fit_pole_location(traj);
    if (traj.termination() == Termination::step_underflow) break;
  }

  const BlowupBracket& last = est.history.back();
  est.lower = last.lower;
  est.upper = last.upper;
  est.tau_used = last.tau;
  est.s_at_tau = last.s_at_tau;
  est.converged = est.width() <= width_tol;
  return est;
}

}  // namespace painleve
