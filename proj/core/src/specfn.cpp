#include "abwave/specfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "abwave/errors.hpp"

namespace abwave::specfn {
namespace {

constexpr double kSeriesLimit = 0.2;
constexpr double kAsymptoticLimit = 10.0;
// Rybicki sampling step. The discretisation error is ~exp(-(pi/2h)^2),
// far below double precision at h = 0.2.
constexpr double kRybickiStep = 0.2;
// Gaussian terms further than this from x are below 1e-18 of the largest.
constexpr double kRybickiReach = 6.5;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    std::ostringstream msg;
    msg << fn << ": argument is not finite (" << x << ")";
    throw DomainError(msg.str());
  }
}

// D(x) = sum_n (-1)^n 2^n x^(2n+1) / (2n+1)!!
double dawson_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 40; ++n) {
    term *= -2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// D(x) ~ 1/(2x) sum_n (2n-1)!! / (2x^2)^n, x >= 10.
double dawson_asymptotic(double x) {
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 60; ++n) {
    term *= (2.0 * n - 1.0) * inv;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / (2.0 * x);
}

// Rybicki: D(x) = lim_{h->0} pi^{-1/2} sum_{n odd} exp(-(x - n h)^2) / n.
double dawson_rybicki(double x) {
  const double h = kRybickiStep;
  auto first = static_cast<long>(std::ceil((x - kRybickiReach) / h));
  const auto last = static_cast<long>(std::floor((x + kRybickiReach) / h));
  if (first % 2 == 0) ++first;
  double sum = 0.0;
  for (long n = first; n <= last; n += 2) {
    const double d = x - static_cast<double>(n) * h;
    sum += std::exp(-d * d) / static_cast<double>(n);
  }
  return sum / std::sqrt(std::numbers::pi);
}

double dawson_positive(double x) {
  if (x < kSeriesLimit) return dawson_series(x);
  if (x < kAsymptoticLimit) return dawson_rybicki(x);
  return dawson_asymptotic(x);
}

}  // namespace

double dawson(double x) {
  require_finite(x, "dawson");
  const double d = dawson_positive(std::abs(x));
  return std::signbit(x) ? -d : d;
}

double erfi(double x) {
  require_finite(x, "erfi");
  const double ax = std::abs(x);
  const double d = dawson_positive(ax);
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  double value = 0.0;
  if (ax < 25.0) {
    value = two_over_sqrt_pi * std::exp(ax * ax) * d;
  } else {
    value = std::exp(ax * ax + std::log(two_over_sqrt_pi * d));
  }
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "erfi: result overflows double range at x = " << x;
    throw OverflowError(msg.str());
  }
  return std::signbit(x) ? -value : value;
}

double erfi_damped(double x) {
  require_finite(x, "erfi_damped");
  return 2.0 / std::sqrt(std::numbers::pi) * dawson(x);
}

}  // namespace abwave::specfn
