#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace painleve {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated error estimate
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

// Gauss 7 / Kronrod 15 on [-1, 1]: abscissa, Gauss weight, Kronrod weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0, 0.204432940075298892},
    {0.586087235467691130, 0.0, 0.169004726639267903},
    {0.864864423359769073, 0.0, 0.104790010322250184},
    {0.991455371120812639, 0.0, 0.022935322010529225},
};

template <class F>
std::pair<double, double> g7k15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double gauss = kG7K15[0][1] * f0;
  double kron = kG7K15[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kG7K15[i][0];
    const double fi = f(mid + dx) + f(mid - dx);
    gauss += kG7K15[i][1] * fi;
    kron += kG7K15[i][2] * fi;
  }
  gauss *= half;
  kron *= half;
  double err = 200.0 * std::fabs(kron - gauss);
  err *= std::sqrt(err);
  return {kron, err};
}

}  // namespace detail

// Adaptive bisection on an interval stack; a subinterval is accepted once its
// error estimate fits its proportional share of the global budget.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                                    double abs_tol = 0.0, int max_intervals = 4096) {
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: empty interval");
  QuadratureResult result;

  auto [whole, whole_err] = detail::g7k15(f, a, b);
  result.evaluations = 15;
  const double budget = std::max(abs_tol, rel_tol * std::fabs(whole));
  if (whole_err <= budget) {
    result.value = whole;
    result.error = whole_err;
    return result;
  }

  struct Interval {
    double a, b;
  };
  std::vector<Interval> stack{{a, b}};
  int used = 1;
  const double span = b - a;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    auto [val, err] = detail::g7k15(f, iv.a, iv.b);
    result.evaluations += 15;
    if (err <= budget * ((iv.b - iv.a) / span) || used >= max_intervals) {
      result.value += val;
      result.error += err;
      if (used >= max_intervals) result.converged = false;
      continue;
    }
    const double mid = 0.5 * (iv.a + iv.b);
    stack.push_back({iv.a, mid});
    stack.push_back({mid, iv.b});
    used += 2;
  }
  return result;
}

}  // namespace painleve
