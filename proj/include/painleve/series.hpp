#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "painleve/form.hpp"

namespace painleve {

using Rational = mpq_class;

inline constexpr int kDefaultSeriesOrder = 28;
inline constexpr int kSeriesOrderCap = 512;
inline constexpr double kSeriesTrustRadius = 0.8;

struct SeriesTerm {
  int n;
  Rational coefficient;
};

struct SeriesExpansion {
  Form form = Form::Pi;
  int order = 0;
  std::vector<Rational> coeffs;  // coeffs[n] multiplies t^n, exact

  const Rational& coefficient(int n) const {
    if (n < 0 || n > order) throw std::out_of_range("series coefficient index out of range");
    return coeffs[static_cast<std::size_t>(n)];
  }

  std::vector<SeriesTerm> nonzero_terms() const {
    std::vector<SeriesTerm> out;
    for (int n = 0; n <= order; ++n)
      if (coeffs[static_cast<std::size_t>(n)] != 0) out.push_back({n, coeffs[static_cast<std::size_t>(n)]});
    return out;
  }
};

// Exact Taylor coefficients at the origin of the solution with the triple zero:
//   (n+2)(n+1) a_{n+2} = c1 [n == 1] + c2 sum_{i+j=n} a_i a_j,   a_0 = a_1 = 0.
// Only exponents n == 3 (mod 5) survive.  Everything is carried out in
// rational arithmetic; floating point enters only at evaluation time.
inline SeriesExpansion taylor_coefficients(Form form, int order) {
  if (order < 0) throw std::invalid_argument("series order must be nonnegative");
  if (order > kSeriesOrderCap)
    throw std::length_error("series order exceeds cap (" + std::to_string(kSeriesOrderCap) + ")");
  const FormCoefficients c = coefficients(form);
  const long c2 = static_cast<long>(c.quadratic);
  const long c1 = static_cast<long>(c.linear);

  std::vector<Rational> a(static_cast<std::size_t>(order) + 1, Rational(0));
  for (int n = 0; n + 2 <= order; ++n) {
    Rational conv = 0;
    for (int i = 0; i <= n; ++i) {
      const Rational& ai = a[static_cast<std::size_t>(i)];
      const Rational& aj = a[static_cast<std::size_t>(n - i)];
      if (ai != 0 && aj != 0) conv += ai * aj;
    }
    Rational next = c2 * conv;
    if (n == 1) next += c1;
    if (next != 0) {
      next /= (n + 2) * (n + 1);
      a[static_cast<std::size_t>(n) + 2] = next;
    }
  }
  return {form, order, std::move(a)};
}

struct SeriesEval {
  double s;
  double sdot;
};

// Horner evaluation of the truncated series together with its termwise
// derivative.  Refuses |t| beyond the trust radius, where the discarded tail
// stops being negligible and the value would silently drift off the solution.
inline SeriesEval eval_series(const SeriesExpansion& series, double t,
                              double trust_radius = kSeriesTrustRadius) {
  if (!(std::fabs(t) <= trust_radius))
    throw std::domain_error("series evaluation outside trust radius |t| <= " +
                            std::to_string(trust_radius));
  double value = 0.0;
  double deriv = 0.0;
  for (int n = series.order; n >= 0; --n) {
    deriv = deriv * t + value;
    value = value * t + series.coeffs[static_cast<std::size_t>(n)].get_d();
  }
  return {value, deriv};
}

}  // namespace painleve
