#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "painleve/integrate.hpp"
#include "painleve/oscillation.hpp"

using namespace painleve;

namespace {

const Trajectory& traj100() {
  static const Trajectory traj = [] {
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    return integrate(Form::PiMinus, cfg);
  }();
  return traj;
}

}  // namespace

TEST_CASE("no crossing below t = 1, one below 1.1") {
  CHECK(crossings(traj100(), 1.0).empty());

  const std::vector<CrossingEvent> one = crossings(traj100(), 1.1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].index == 1);
  CHECK(one[0].direction == CrossingDirection::upward);
  CHECK(one[0].t > 1.0);
  CHECK(one[0].t < std::pow(1.25, 0.4));  // (5/4)^{2/5} = 1.0933...
  CHECK(one[0].refinement_width <= 1e-11);
}

TEST_CASE("crossings over (0, 100]: ordering, alternation, stability") {
  const std::vector<CrossingEvent> events = crossings(traj100(), 100.0);
  REQUIRE(events.size() >= 21);

  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].index == static_cast<int>(i) + 1);
    if (i > 0) {
      CHECK(events[i].t > events[i - 1].t);
      CHECK(events[i].direction != events[i - 1].direction);
    }
  }
  CHECK(events.front().direction == CrossingDirection::upward);

  // count and times are stable under tolerance halving
  IntegratorConfig halved;
  halved.t_max = 100.0;
  halved.rel_tol *= 0.5;
  halved.abs_tol *= 0.5;
  const Trajectory tighter = integrate(Form::PiMinus, halved);
  const std::vector<CrossingEvent> events2 = crossings(tighter, 100.0);
  REQUIRE(events2.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i)
    CHECK(std::fabs(events[i].t - events2[i].t) < 1e-7);
}

TEST_CASE("crossings input validation") {
  IntegratorConfig cfg;
  cfg.t_max = 2.0;
  cfg.s_max = 1e6;
  const Trajectory wrong_form = integrate(Form::PiPlus, cfg);
  CHECK_THROWS_AS(crossings(wrong_form, 1.0), std::invalid_argument);

  CHECK_THROWS_AS(crossings(traj100(), 101.0), std::out_of_range);
  CHECK_THROWS_AS(crossings(traj100(), 0.0), std::out_of_range);

  IntegratorConfig back;
  back.t_max = -1.0;
  const Trajectory backward = integrate(Form::PiMinus, back);
  CHECK_THROWS_AS(crossings(backward, 0.5), std::invalid_argument);
}

TEST_CASE("gap audit: every interval obeys its bound") {
  const std::vector<CrossingEvent> events = crossings(traj100(), 100.0);
  const std::vector<GapRecord> gaps = gap_audit(events);
  REQUIRE(gaps.size() == events.size() - 1);
  REQUIRE(gaps.size() >= 20);

  int below = 0, above = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const GapRecord& g = gaps[i];
    CHECK(g.passed);
    CHECK(g.margin > 0.0);
    CHECK(g.a == events[i].t);
    CHECK(g.b == events[i + 1].t);
    if (g.side == IntervalSide::above) {
      CHECK(g.bound_kind == GapBoundKind::lower_for_above);
      CHECK(g.bound_value == doctest::Approx(kAboveGapLowerCoef * std::pow(g.b, -0.25)));
      CHECK(g.gap > g.bound_value);
      ++above;
    } else {
      CHECK(g.bound_kind == GapBoundKind::upper_for_below);
      CHECK(g.bound_value == doctest::Approx(kBelowGapUpperCoef * std::pow(g.a, -0.25)));
      CHECK(g.gap < g.bound_value);
      ++below;
    }
    // sides alternate, starting above (the first crossing goes upward)
    CHECK((g.side == IntervalSide::above) == (i % 2 == 0));
  }
  CHECK(below >= 10);
  CHECK(above >= 10);
}

TEST_CASE("gap audit degenerate inputs") {
  CHECK(gap_audit({}).empty());
  const std::vector<CrossingEvent> one = crossings(traj100(), 1.1);
  CHECK(gap_audit(one).empty());
}

TEST_CASE("gap coefficients") {
  CHECK(kBelowGapUpperCoef == doctest::Approx(std::numbers::pi / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(kAboveGapLowerCoef ==
        doctest::Approx(std::numbers::pi / std::sqrt(6.0 * (1.0 + std::sqrt(3.0)))).epsilon(1e-15));
  CHECK(kBelowGapUpperCoef == doctest::Approx(1.2825498).epsilon(1e-7));
  CHECK(kAboveGapLowerCoef == doctest::Approx(0.7759431).epsilon(1e-7));
}

TEST_CASE("first integral residual") {
  CHECK(first_integral_residual(traj100(), 0.0) == 0.0);
  CHECK_THROWS_AS(first_integral_residual(traj100(), -1.0), std::domain_error);

  for (double t : {0.5, 1.0, 10.0, 100.0}) {
    const double res = first_integral_residual(traj100(), t);
    const double tol = 1e-7 * std::max(1.0, std::fabs(12.0 * t * traj100().at(t).s));
    CAPTURE(t);
    CHECK(std::fabs(res) < tol);
  }
}

TEST_CASE("first integral residual shrinks with the tolerances") {
  IntegratorConfig tight;
  tight.t_max = 100.0;
  tight.rel_tol = 1e-11;
  tight.abs_tol = 1e-11;
  const Trajectory fine = integrate(Form::PiMinus, tight);
  double worst_coarse = 0.0, worst_fine = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double t = 2.0 * i;
    const double norm = std::max(1.0, std::fabs(12.0 * t * traj100().at(t).s));
    worst_coarse = std::max(worst_coarse, std::fabs(first_integral_residual(traj100(), t)) / norm);
    worst_fine = std::max(worst_fine, std::fabs(first_integral_residual(fine, t)) / norm);
  }
  CHECK(worst_coarse >= 5.0 * worst_fine);
}

TEST_CASE("bounds audit on the true solution") {
  // squeeze margins fall like t^13 / t^18: below t ~ 0.4 (plain) and ~0.6
  // (refined) they sink under the dense-output noise floor, so the audited
  // probes start where doubles still resolve them
  const std::vector<double> probes = {0.6, 0.9, 1.3, 5.0, 50.0, 100.0};
  const BoundsReport report = bounds_audit(traj100(), probes);
  CHECK(report.all_passed);
  REQUIRE(report.probes.size() == probes.size());

  for (const BoundsProbe& p : report.probes) {
    CHECK(p.passed);
    CHECK(p.margin_positive > 0.0);
    CHECK(p.margin_upper > 0.0);
    if (p.t < kSqueezeWindowEnd) {
      REQUIRE(p.margin_cube_upper.has_value());
      REQUIRE(p.margin_cube_lower.has_value());
      REQUIRE(p.margin_refined_upper.has_value());
      CHECK(*p.margin_cube_upper > 0.0);
      CHECK(*p.margin_cube_lower > 0.0);
      CHECK(*p.margin_refined_upper > 0.0);
    } else {
      CHECK(!p.margin_cube_upper.has_value());
    }
  }
  CHECK(report.worst_positive > 0.0);
  CHECK(report.worst_upper > 0.0);

  // spot checks against direct formulas
  const State s_probe = traj100().at(0.6);
  CHECK(report.probes[0].margin_upper == doctest::Approx(std::sqrt(3.0 * 0.6) - s_probe.s));
  CHECK(*report.probes[0].margin_cube_lower ==
        doctest::Approx(s_probe.s - (std::pow(0.6, 3) - (3.0 / 28.0) * std::pow(0.6, 8))));

  CHECK_THROWS_AS(bounds_audit(traj100(), {0.0}), std::domain_error);
  CHECK_THROWS_AS(bounds_audit(traj100(), {-2.0}), std::domain_error);
}

TEST_CASE("bounds audit records violations instead of throwing") {
  // corrupted dynamics (the blow-up form wearing the oscillatory label)
  IntegratorConfig cfg;
  cfg.t_max = 1.5;
  cfg.flip_quadratic_sign = true;
  const Trajectory corrupted = integrate(Form::PiMinus, cfg);
  const BoundsReport report = bounds_audit(corrupted, {0.5, 1.3});
  CHECK(!report.all_passed);
  // at t = 1.3 the corrupted solution exceeds t^3 > sqrt(3t)
  CHECK(!report.probes[1].passed);
  CHECK(report.probes[1].margin_upper < 0.0);
}

TEST_CASE("deviation identity is rounding-level") {
  CHECK_THROWS_AS(deviation_residual(traj100(), 0.0), std::domain_error);
  CHECK_THROWS_AS(deviation_residual(traj100(), -1.0), std::domain_error);

  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> dist(std::log(0.1), std::log(50.0));
  for (int i = 0; i < 100; ++i) {
    const double t = std::exp(dist(rng));
    const State st = traj100().at(t);
    const double scale =
        std::max(1.0, 6.0 * (std::sqrt(t) + st.s) * std::fabs(st.s - std::sqrt(t)));
    CAPTURE(t);
    CHECK(std::fabs(deviation_residual(traj100(), t)) <= 1e-12 * scale);
  }
}

TEST_CASE("envelope statistics") {
  static const Trajectory traj500 = [] {
    IntegratorConfig cfg;
    cfg.t_max = 500.0;
    return integrate(Form::PiMinus, cfg);
  }();

  const EnvelopeStats whole = envelope_stats(traj500, 0.0, 200.0);
  CHECK(whole.max_ratio > 0.0);
  CHECK(whole.max_ratio < std::sqrt(3.0));
  CHECK(whole.max_ratio > 1.0);
  CHECK(whole.max_ratio < std::sqrt(2.0));
  CHECK(whole.samples >= 64 * 1000);

  const EnvelopeStats w1 = envelope_stats(traj500, 10.0, 100.0);
  const EnvelopeStats w2 = envelope_stats(traj500, 100.0, 500.0);
  CHECK(w1.max_scaled_dev >= w2.max_scaled_dev);

  CHECK_THROWS_AS(envelope_stats(traj500, 10.0, 501.0), std::out_of_range);
  CHECK_THROWS_AS(envelope_stats(traj500, 5.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(envelope_stats(traj500, -1.0, 5.0), std::invalid_argument);
}

TEST_CASE("sign of s - sqrt(t) is constant between crossings") {
  const std::vector<CrossingEvent> events = crossings(traj100(), 30.0);
  REQUIRE(events.size() >= 4);
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    const double sign = events[i].direction == CrossingDirection::upward ? 1.0 : -1.0;
    const double a = events[i].t + 1e-6;
    const double b = events[i + 1].t - 1e-6;
    for (int k = 0; k <= 200; ++k) {
      const double t = a + (b - a) * k / 200.0;
      const State st = traj100().at(t);
      CHECK(sign * (st.s - std::sqrt(t)) > 0.0);
    }
  }
}

TEST_CASE("concavity locks to the parabola s^2 = t") {
  // finite-difference curvature of the interpolated derivative must match the
  // sign of 6 (t - s^2), away from the parabola itself
  const double delta = 1e-6;
  for (int k = 0; k < 400; ++k) {
    const double t = 0.05 + (40.0 - 0.05) * k / 399.0;
    const State st = traj100().at(t);
    const double curvature_scale = 6.0 * (st.t - st.s * st.s);
    if (std::fabs(curvature_scale) < 1e-3) continue;
    const double fd =
        (traj100().at(t + delta).sdot - traj100().at(t - delta).sdot) / (2.0 * delta);
    CAPTURE(t);
    CHECK(fd * curvature_scale > 0.0);
  }
}

TEST_CASE("squeeze polynomial helpers") {
  CHECK(squeeze_lower(0.5) == doctest::Approx(0.125 - (3.0 / 28.0) * std::pow(0.5, 8)));
  CHECK(refined_squeeze_upper(0.5) ==
        doctest::Approx(0.125 - (3.0 / 28.0) * std::pow(0.5, 8) + (3.0 / 364.0) * std::pow(0.5, 13) -
                        (3.0 / 13328.0) * std::pow(0.5, 18)));
  CHECK(kSqueezeWindowEnd == doctest::Approx(std::pow(28.0 / 3.0, 0.2)));
  // the refined upper envelope sits strictly between the lower envelope and t^3
  for (double t = 0.1; t < 1.5; t += 0.1) {
    CHECK(refined_squeeze_upper(t) > squeeze_lower(t));
    CHECK(refined_squeeze_upper(t) < t * t * t);
  }
}
