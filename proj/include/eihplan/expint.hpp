#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eihplan {

// Scaled exponential integral e^x E1(x) for x > 1 by a modified Lentz
// continued fraction. Returning the product avoids overflow when the
// caller needs e^x E1(x) at large x.
inline double expint_e1_scaled_cf(double x) {
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h;
}

// Exponential integral E1(x) for x > 0.
// Power series below x = 1, continued fraction above; the split keeps both
// expansions well inside their stable ranges.
inline double expint_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("expint_e1: argument must be positive");
  constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
    double sum = 0.0;
    double term = 1.0;  // x^k / k!
    for (int k = 1; k <= 60; ++k) {
      term *= x / k;
      double add = ((k & 1) ? term : -term) / k;
      sum += add;
      if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  return expint_e1_scaled_cf(x) * std::exp(-x);
}

}  // namespace eihplan
