#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "painleve/blowup.hpp"
#include "painleve/integrate.hpp"
#include "painleve/oscillation.hpp"
#include "painleve/series.hpp"
#include "painleve/verify.hpp"

namespace painleve {

// Shortest decimal that round-trips to the same double (17 significant digits
// at most); the serialization used by every CSV/JSON surface.
inline std::string fmt_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Rows at t = 0, dt, 2dt, ... plus the exact final state.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double sample_dt) {
  if (!(sample_dt > 0.0)) throw std::invalid_argument("sample spacing must be positive");
  os << "t,s,sdot,q\n";
  auto row = [&os](const State& st) {
    os << fmt_double(st.t) << ',' << fmt_double(st.s) << ',' << fmt_double(st.sdot) << ','
       << fmt_double(st.q) << '\n';
  };
  const double dir = traj.direction();
  const double end = traj.t_end();
  double emitted = std::nan("");
  for (long k = 0;; ++k) {
    const double t = dir * sample_dt * static_cast<double>(k);
    if (t * dir > end * dir) break;
    row(traj.at(t));
    emitted = t;
  }
  if (!traj.steps().empty() && emitted != end) row(traj.final_state());
}

inline nlohmann::json config_json(const IntegratorConfig& cfg) {
  return {{"rel_tol", cfg.rel_tol},   {"abs_tol", cfg.abs_tol},
          {"max_step", cfg.max_step}, {"initial_step", cfg.initial_step},
          {"s_max", cfg.s_max},       {"t_max", cfg.t_max},
          {"flip_quadratic_sign", cfg.flip_quadratic_sign}};
}

// Full step metadata (endpoint states and local error estimates).
inline nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json steps = nlohmann::json::array();
  for (const Step& st : traj.steps()) {
    steps.push_back({{"t0", st.t0},
                     {"t1", st.t1},
                     {"y0", {st.y0[0], st.y0[1], st.y0[2]}},
                     {"y1", {st.y1[0], st.y1[1], st.y1[2]}},
                     {"err", st.err}});
  }
  return {{"form", std::string(form_name(traj.form()))},
          {"termination", std::string(termination_name(traj.termination()))},
          {"config", config_json(traj.config())},
          {"n_steps", traj.steps().size()},
          {"steps", std::move(steps)}};
}

// Bare array of the nonzero exact coefficients; numerator/denominator are
// decimal strings so arbitrary precision survives the trip.
inline nlohmann::json series_json(const SeriesExpansion& series) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SeriesTerm& term : series.nonzero_terms()) {
    arr.push_back({{"n", term.n},
                   {"numerator", term.coefficient.get_num().get_str()},
                   {"denominator", term.coefficient.get_den().get_str()}});
  }
  return arr;
}

inline nlohmann::json blowup_json(const BlowupEstimate& est) {
  return {{"lower", est.lower},
          {"upper", est.upper},
          {"tau", est.tau_used},
          {"s_at_tau", est.s_at_tau},
          {"width", est.width()},
          {"converged", est.converged},
          {"pole_fit", est.pole_fit},
          {"analytic_lower", analytic_lower_bound()},
          {"integral_bound", bounding_integral()}};
}

// Table of crossings; the gap columns describe the interval ending at the row.
inline void write_crossings_csv(std::ostream& os, const std::vector<CrossingEvent>& events,
                                const std::vector<GapRecord>& gaps) {
  os << "index,t,direction,gap_to_prev,bound,passed\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    os << events[i].index << ',' << fmt_double(events[i].t) << ','
       << direction_name(events[i].direction);
    if (i == 0 || i - 1 >= gaps.size()) {
      os << ",,,";
    } else {
      const GapRecord& g = gaps[i - 1];
      os << ',' << fmt_double(g.gap) << ',' << fmt_double(g.bound_value) << ','
         << (g.passed ? '1' : '0');
    }
    os << '\n';
  }
}

inline nlohmann::json envelope_json(const EnvelopeStats& stats) {
  return {{"window_lo", stats.window_lo},
          {"window_hi", stats.window_hi},
          {"max_ratio", stats.max_ratio},
          {"max_scaled_dev", stats.max_scaled_dev},
          {"samples", stats.samples}};
}

inline nlohmann::json report_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& rec : report.checks) {
    checks.push_back({{"id", rec.id},
                      {"claim", rec.claim},
                      {"status", std::string(check_status_name(rec.status))},
                      {"worst_margin", rec.worst_margin},
                      {"details", rec.details}});
  }
  return {{"schema_version", report.schema_version},
          {"tool_version", report.tool_version},
          {"config",
           {{"rel_tol", report.config.rel_tol},
            {"abs_tol", report.config.abs_tol},
            {"t_max", report.config.t_max},
            {"corrupt_rhs", report.config.corrupt_rhs}}},
          {"all_passed", report.all_passed()},
          {"checks", std::move(checks)}};
}

}  // namespace painleve
