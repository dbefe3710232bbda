#include "abwave/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "abwave/constants.hpp"
#include "abwave/errors.hpp"
#include "abwave/specfn.hpp"

namespace abwave::analytic {

ParaxialBeam::ParaxialBeam(double w) : w_(w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    std::ostringstream msg;
    msg << "ParaxialBeam: w must be positive and finite (got " << w << ")";
    throw DomainError(msg.str());
  }
}

FluxStrength::FluxStrength(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha)) {
    throw DomainError("FluxStrength: alpha must be finite");
  }
}

FluxStrength::FluxStrength(double alpha, double phi_weber)
    : FluxStrength(alpha) {
  const double expected = -alpha * constants::planck /
                          constants::elementary_charge;
  const double scale = std::max(std::abs(expected), std::abs(phi_weber));
  if (!std::isfinite(phi_weber) ||
      std::abs(expected - phi_weber) > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "FluxStrength: alpha = " << alpha << " and Phi = " << phi_weber
        << " Wb disagree (expected Phi = " << expected << " Wb)";
    throw DomainError(msg.str());
  }
  phi_ = phi_weber;
}

FluxStrength FluxStrength::from_flux(double phi_weber) {
  const double alpha =
      -phi_weber * constants::elementary_charge / constants::planck;
  return FluxStrength(alpha, phi_weber);
}

double FluxStrength::phi() const {
  if (phi_) return *phi_;
  return -alpha_ * constants::planck / constants::elementary_charge;
}

double FluxStrength::ab_phase() const { return 2.0 * std::numbers::pi * alpha_; }

namespace {

struct TrigPi {
  double cos;
  double sin;
};

// cos(pi a) and sin(pi a) after removing the nearest integer from a, so
// shifting alpha by one flips the sign without re-rounding pi * alpha and
// half-integer alpha gives an exact zero.
TrigPi trig_pi(double a) {
  const double n = std::nearbyint(a);
  const double r = a - n;
  const double sign = std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0;
  return {sign * std::sin(std::numbers::pi * (0.5 - std::abs(r))),
          sign * std::sin(std::numbers::pi * r)};
}

}  // namespace

std::complex<double> amplitude(const FluxStrength& flux, double theta,
                               const ParaxialBeam& beam) {
  if (!std::isfinite(theta)) {
    throw DomainError("amplitude: theta is not finite");
  }
  const double u = beam.w() * theta / std::numbers::sqrt2;
  const auto t = trig_pi(flux.alpha());
  const double value = std::exp(-u * u) * t.cos + t.sin * specfn::erfi_damped(u);
  return {value, 0.0};
}

double intensity(const FluxStrength& flux, double theta,
                 const ParaxialBeam& beam) {
  return std::norm(amplitude(flux, theta, beam));
}

double deflection_formula(const FluxStrength& flux, const ParaxialBeam& beam) {
  const auto t = trig_pi(flux.alpha());
  return 2.0 * t.sin * t.cos / (beam.w() * std::sqrt(std::numbers::pi));
}

specfn::QuadratureRule moment_rule(const ParaxialBeam& beam) {
  // Core out to |w theta| = 12 (envelope exp(-72)), mapped tails beyond.
  return specfn::QuadratureRule::whole_line(12.0 / beam.w(), 20, 24, 24);
}

double deflection_numeric(const FluxStrength& flux, const ParaxialBeam& beam,
                          const specfn::QuadratureRule& rule) {
  // exp(-w^2 theta^2 / 2) = 1e-16  <=>  |w theta| = sqrt(2 ln 1e16)
  const double envelope = std::sqrt(2.0 * std::log(1e16)) / beam.w();
  if (rule.lower() > -envelope || rule.upper() < envelope) {
    std::ostringstream msg;
    msg << "deflection_numeric: rule domain [" << rule.lower() << ", "
        << rule.upper() << "] does not cover the envelope |theta| <= "
        << envelope;
    throw CoverageError(msg.str());
  }
  const double norm = specfn::integrate(
      [&](double t) { return intensity(flux, t, beam); }, rule);
  const double first = specfn::integrate(
      [&](double t) { return t * intensity(flux, t, beam); }, rule);
  if (!(norm >= 1e-300)) {
    throw DegenerateError("deflection_numeric: normalisation integral vanishes");
  }
  return first / norm;
}

}  // namespace abwave::analytic
