#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "painleve/brent.hpp"
#include "painleve/form.hpp"

namespace painleve {

inline constexpr double kDefaultRootTol = 1e-12;

// Integration state: the transcendent, its derivative, and the running
// quadrature channel q(t) = integral of s over [0, t].
struct State {
  double t = 0.0;
  double s = 0.0;
  double sdot = 0.0;
  double q = 0.0;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.1;
  double initial_step = 1e-3;
  double s_max = 1e8;   // guard: stop once |s| reaches this
  double t_max = 10.0;  // signed integration target
  // Negative-control hook: flips the sign of the quadratic term so the
  // verification registry can demonstrate that its checks are falsifiable.
  bool flip_quadratic_sign = false;

  void validate() const {
    const double eps = std::numeric_limits<double>::epsilon();
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("integrator tolerances must be strictly positive");
    if (!(rel_tol >= 10.0 * eps))
      throw std::invalid_argument("rel_tol must be at least 10x machine epsilon");
    if (!(max_step > 0.0) || !(initial_step > 0.0))
      throw std::invalid_argument("step sizes must be strictly positive");
    if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be strictly positive");
    if (!std::isfinite(t_max)) throw std::invalid_argument("t_max must be finite");
  }
};

enum class Termination { reached_t_max, blowup_guard, step_underflow };

constexpr std::string_view termination_name(Termination term) {
  switch (term) {
    case Termination::reached_t_max:
      return "reached_t_max";
    case Termination::blowup_guard:
      return "blowup_guard";
    case Termination::step_underflow:
      return "step_underflow";
  }
  return "?";
}

// One accepted step of the embedded pair, with its dense-output polynomial.
struct Step {
  double t0 = 0.0, t1 = 0.0;
  std::array<double, 3> y0{}, y1{};             // (s, sdot, q) at both ends
  std::array<std::array<double, 3>, 5> cont{};  // interpolation coefficients
  double err = 0.0;                             // scaled local error estimate
};

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 derivative(Form form, bool flip, double t, const Vec3& y) {
  const FormCoefficients fc = coefficients(form);
  const double c2 = flip ? -fc.quadratic : fc.quadratic;
  return {y[1], c2 * y[0] * y[0] + fc.linear * t, y[0]};
}

// Dormand-Prince 5(4) with the quartic continuous extension.
struct Dopri5 {
  static constexpr double c[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5.0},
      {3.0 / 40.0, 9.0 / 40.0},
      {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
      {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
      {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
      {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
  };
  // difference between the 5th-order weights and the embedded 4th-order ones
  static constexpr double e[7] = {71.0 / 57600.0,      0.0,          -71.0 / 16695.0, 71.0 / 1920.0,
                                  -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};
  // dense-output weights for the last interpolation coefficient
  static constexpr double d[7] = {-12715105075.0 / 11282082432.0,
                                  0.0,
                                  87487479700.0 / 32700410799.0,
                                  -10690763975.0 / 1880347072.0,
                                  701980252875.0 / 199316789632.0,
                                  -1453857185.0 / 822651844.0,
                                  69997945.0 / 29380423.0};
};

// Interpolates a single step's dense polynomial; t must lie in the step.
inline State eval_step(const Step& st, double t) {
  if (t == st.t0) return State{st.t0, st.y0[0], st.y0[1], st.y0[2]};
  if (t == st.t1) return State{st.t1, st.y1[0], st.y1[1], st.y1[2]};
  const double theta = (t - st.t0) / (st.t1 - st.t0);
  const double theta1 = 1.0 - theta;
  State out;
  out.t = t;
  double v[3];
  for (int i = 0; i < 3; ++i) {
    const auto& cc = st.cont;
    v[i] = cc[0][i] + theta * (cc[1][i] + theta1 * (cc[2][i] + theta * (cc[3][i] + theta1 * cc[4][i])));
  }
  out.s = v[0];
  out.sdot = v[1];
  out.q = v[2];
  return out;
}

}  // namespace detail

// Accepted-step record of one adaptive integration from the origin.  Immutable
// after construction; dense evaluation reproduces stored endpoint states
// bit-identically.
class Trajectory {
 public:
  Trajectory(Form form, IntegratorConfig config, std::vector<Step> steps, Termination termination)
      : form_(form), config_(config), steps_(std::move(steps)), termination_(termination) {}

  Form form() const { return form_; }
  const IntegratorConfig& config() const { return config_; }
  const std::vector<Step>& steps() const { return steps_; }
  Termination termination() const { return termination_; }

  double direction() const { return config_.t_max < 0.0 ? -1.0 : 1.0; }
  double t_end() const { return steps_.empty() ? 0.0 : steps_.back().t1; }
  bool covers(double t) const {
    const double dir = direction();
    return t * dir >= 0.0 && t * dir <= t_end() * dir;
  }

  State initial_state() const { return State{}; }
  State final_state() const {
    if (steps_.empty()) return State{};
    const Step& last = steps_.back();
    return State{last.t1, last.y1[0], last.y1[1], last.y1[2]};
  }

  // Dense evaluation.  Step endpoints return the stored states exactly; a few
  // ulps of slack are allowed at the far end so that root refiners and form
  // conversions landing within rounding of the endpoint stay in range.
  State at(double t) const {
    const double dir = direction();
    if (steps_.empty()) {
      if (t == 0.0) return State{};
      throw std::out_of_range("dense evaluation outside trajectory coverage");
    }
    const double end = t_end();
    const double slack = 4.0 * std::fabs(end) * std::numeric_limits<double>::epsilon();
    double tq = t;
    if (tq * dir > end * dir && tq * dir <= end * dir + slack) tq = end;
    if (tq * dir < 0.0 || tq * dir > end * dir)
      throw std::out_of_range("dense evaluation outside trajectory coverage");

    auto it = std::partition_point(steps_.begin(), steps_.end(),
                                   [&](const Step& st) { return st.t1 * dir < tq * dir; });
    if (it == steps_.end()) --it;
    return detail::eval_step(*it, tq);
  }

 private:
  Form form_;
  IntegratorConfig config_;
  std::vector<Step> steps_;
  Termination termination_;
};

// Adaptive integration of (s, sdot, q)' = (sdot, c2 s^2 + c1 t, s) from the
// triple-zero data at the origin, until t_max, the blow-up guard, or step
// underflow.  Step control is the usual PI scheme with safety factor 0.9.
inline Trajectory integrate(Form form, const IntegratorConfig& config) {
  config.validate();
  using detail::Dopri5;
  using detail::Vec3;

  const double t_target = config.t_max;
  if (t_target == 0.0) return Trajectory(form, config, {}, Termination::reached_t_max);
  const double dir = t_target > 0.0 ? 1.0 : -1.0;

  constexpr std::size_t kMaxAcceptedSteps = 2'000'000;
  constexpr double kErrFloor = 1e-4;

  std::vector<Step> steps;
  Vec3 y{0.0, 0.0, 0.0};
  double t = 0.0;
  Vec3 k1 = detail::derivative(form, config.flip_quadratic_sign, t, y);
  double h = dir * std::min(config.initial_step, config.max_step);
  double err_prev = kErrFloor;
  double fac_max = 10.0;
  Termination termination = Termination::reached_t_max;

  for (;;) {
    if (steps.size() >= kMaxAcceptedSteps)
      throw std::runtime_error("integration exceeded the accepted-step cap");

    bool last = false;
    if ((t + h - t_target) * dir >= 0.0) {
      h = t_target - t;
      last = true;
    }
    if (t + h == t) {
      if (steps.empty()) throw std::runtime_error("step size underflow before any progress");
      termination = Termination::step_underflow;
      break;
    }

    std::array<Vec3, 7> k;
    k[0] = k1;
    for (int stage = 1; stage < 7; ++stage) {
      Vec3 ys;
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (int j = 0; j < stage; ++j) acc += Dopri5::a[stage][j] * k[j][i];
        ys[i] = y[i] + h * acc;
      }
      k[stage] = detail::derivative(form, config.flip_quadratic_sign, t + Dopri5::c[stage] * h, ys);
    }
    // the a[6] row is the 5th-order solution, so k[6] = f(t1, y1)
    Vec3 y1;
    for (int i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 6; ++j) acc += Dopri5::a[6][j] * k[j][i];
      y1[i] = y[i] + h * acc;
    }

    double err_sq = 0.0;
    for (int i = 0; i < 3; ++i) {
      double ei = 0.0;
      for (int j = 0; j < 7; ++j) ei += Dopri5::e[j] * k[j][i];
      ei *= h;
      const double scale =
          config.abs_tol + config.rel_tol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
      const double r = ei / scale;
      err_sq += r * r;
    }
    double err = std::sqrt(err_sq / 3.0);
    if (!std::isfinite(err) || !std::isfinite(y1[0]) || !std::isfinite(y1[1]) ||
        !std::isfinite(y1[2]))
      err = 1e10;

    if (err <= 1.0) {
      const double t1 = last ? t_target : t + h;
      Step st;
      st.t0 = t;
      st.t1 = t1;
      st.y0 = y;
      st.y1 = y1;
      st.err = err;
      for (int i = 0; i < 3; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k[0][i] - ydiff;
        st.cont[0][i] = y[i];
        st.cont[1][i] = ydiff;
        st.cont[2][i] = bspl;
        st.cont[3][i] = ydiff - h * k[6][i] - bspl;
        double dsum = 0.0;
        for (int j = 0; j < 7; ++j) dsum += Dopri5::d[j] * k[j][i];
        st.cont[4][i] = h * dsum;
      }
      steps.push_back(st);
      t = t1;
      y = y1;
      k1 = k[6];

      if (std::fabs(y[0]) >= config.s_max) {
        termination = Termination::blowup_guard;
        break;
      }
      if (last) {
        termination = Termination::reached_t_max;
        break;
      }

      double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, fac_max);
      h = dir * std::min(std::fabs(h) * fac, config.max_step);
      err_prev = std::max(err, kErrFloor);
      fac_max = 10.0;
    } else {
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      h *= fac;
      fac_max = 1.0;
    }
  }
  return Trajectory(form, config, std::move(steps), termination);
}

struct RootHit {
  double t;
  double width;  // refinement bracket width
};

// Scans dense output for sign changes of g over the window and refines each
// with Brent to |dt| <= root_tol.  Roots come back sorted and deduplicated.
// Tangential contacts without a sign change are not guaranteed to be found.
inline std::vector<RootHit> find_roots(const Trajectory& traj,
                                       const std::function<double(const State&)>& g,
                                       double window_lo, double window_hi,
                                       double root_tol = kDefaultRootTol,
                                       int probes_per_step = 8) {
  if (!(window_lo < window_hi)) throw std::invalid_argument("find_roots: empty window");
  if (!(root_tol > 0.0)) throw std::invalid_argument("find_roots: root_tol must be positive");
  const double lo_cov = std::min(0.0, traj.t_end());
  const double hi_cov = std::max(0.0, traj.t_end());
  if (window_lo < lo_cov || window_hi > hi_cov)
    throw std::out_of_range("find_roots: window outside trajectory coverage");

  auto eval = [&](double tt) { return g(traj.at(tt)); };

  std::vector<RootHit> hits;
  for (const Step& st : traj.steps()) {
    const double a = std::max(std::min(st.t0, st.t1), window_lo);
    const double b = std::min(std::max(st.t0, st.t1), window_hi);
    if (!(a < b)) continue;
    double prev_t = a;
    double prev_v = eval(a);
    for (int i = 1; i <= probes_per_step; ++i) {
      const double ti = std::min(a + (b - a) * i / probes_per_step, b);
      if (!(ti > prev_t)) continue;
      const double vi = eval(ti);
      if (prev_v == 0.0) {
        hits.push_back({prev_t, 0.0});
      } else if (vi != 0.0 && (prev_v < 0.0) != (vi < 0.0)) {
        const BrentResult res = brent_root(eval, prev_t, ti, root_tol);
        hits.push_back({res.root, res.width});
      }
      prev_t = ti;
      prev_v = vi;
    }
  }
  std::sort(hits.begin(), hits.end(), [](const RootHit& x, const RootHit& y) { return x.t < y.t; });
  std::vector<RootHit> unique;
  for (const RootHit& h : hits) {
    const double cluster = std::max(10.0 * root_tol, 4e-15 * std::max(1.0, std::fabs(h.t)));
    if (unique.empty() || h.t - unique.back().t > cluster) unique.push_back(h);
  }
  return unique;
}

}  // namespace painleve
