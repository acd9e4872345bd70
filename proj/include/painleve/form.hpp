#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace painleve {

// The three real scalings of the same second-order equation y'' = c2 y^2 + c1 t:
//   Pi       w'' = 6 w^2 + t       (c2, c1) = ( 6, 1)
//   PiPlus   s'' = 6 s^2 + 6 t     (c2, c1) = ( 6, 6)   finite-time blow-up side
//   PiMinus  s'' = 6 t - 6 s^2     (c2, c1) = (-6, 6)   oscillatory side
enum class Form { Pi, PiPlus, PiMinus };

struct FormCoefficients {
  double quadratic;  // c2
  double linear;     // c1
};

constexpr FormCoefficients coefficients(Form form) {
  switch (form) {
    case Form::Pi:
      return {6.0, 1.0};
    case Form::PiPlus:
      return {6.0, 6.0};
    case Form::PiMinus:
      return {-6.0, 6.0};
  }
  return {0.0, 0.0};  // unreachable
}

constexpr double rhs(Form form, double t, double s) {
  const FormCoefficients c = coefficients(form);
  return c.quadratic * s * s + c.linear * t;
}

constexpr std::string_view form_name(Form form) {
  switch (form) {
    case Form::Pi:
      return "pi";
    case Form::PiPlus:
      return "pi-plus";
    case Form::PiMinus:
      return "pi-minus";
  }
  return "?";
}

inline Form parse_form(std::string_view name) {
  if (name == "pi") return Form::Pi;
  if (name == "pi-plus") return Form::PiPlus;
  if (name == "pi-minus") return Form::PiMinus;
  throw std::invalid_argument("unknown form '" + std::string(name) +
                              "' (expected pi, pi-plus or pi-minus)");
}

// Solutions of the three forms map onto each other by W(z) = beta w(alpha z).
// The pair for an ordered (from, to) is pinned by
//   alpha^5 = (c1 c2)_to / (c1 c2)_from,   beta = (c2_from / c2_to) alpha^2,
// which leaves only alpha = +-6^{+-1/5} and +-1 over the nine combinations.
struct FormScaling {
  double alpha;
  double beta;
};

inline FormScaling conversion_scaling(Form from, Form to) {
  static const double A = std::pow(6.0, 0.2);
  static const double Ai = 1.0 / A;
  auto idx = [](Form f) { return f == Form::Pi ? 0 : (f == Form::PiPlus ? 1 : 2); };
  const double alpha_table[3][3] = {
      // to:  Pi   PiPlus PiMinus
      {1.0, A, -A},      // from Pi
      {Ai, 1.0, -1.0},   // from PiPlus
      {-Ai, -1.0, 1.0},  // from PiMinus
  };
  const double alpha = alpha_table[idx(from)][idx(to)];
  const double sign = coefficients(from).quadratic / coefficients(to).quadratic;
  return {alpha, sign * alpha * alpha};
}

struct FormState {
  double t;
  double s;
  double sdot;
};

// Maps the state (t, w(t), w'(t)) of a `from` solution onto the corresponding
// state of the `to` solution; composing with the reverse map is the identity
// to rounding.
inline FormState convert_form(double t, double s, double sdot, Form from, Form to) {
  const FormScaling k = conversion_scaling(from, to);
  return {t / k.alpha, k.beta * s, k.alpha * k.beta * sdot};
}

}  // namespace painleve
