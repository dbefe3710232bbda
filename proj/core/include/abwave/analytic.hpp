#pragma once

#include <complex>
#include <optional>

#include "abwave/quadrature.hpp"

// Closed-form paraxial scattering of a Gaussian beam by an ideal flux line.
namespace abwave::analytic {

/// Dimensionless beam-width parameter w. The incident r.m.s. angular width
/// is 1/(w sqrt(2)).
class ParaxialBeam {
 public:
  explicit ParaxialBeam(double w);
  double w() const { return w_; }

 private:
  double w_;
};

/// Enclosed flux in flux quanta, alpha = -e Phi / h. Not reduced modulo 1.
class FluxStrength {
 public:
  explicit FluxStrength(double alpha);
  /// Both forms given; they must agree to 1e-12 relative.
  FluxStrength(double alpha, double phi_weber);

  static FluxStrength from_flux(double phi_weber);

  double alpha() const { return alpha_; }
  /// Physical flux Phi = -alpha h / e in weber.
  double phi() const;
  /// Aharonov-Bohm phase difference between the two sides, 2 pi alpha.
  double ab_phase() const;

 private:
  double alpha_;
  std::optional<double> phi_;
};

/// exp(-w^2 theta^2 / 2) [cos(pi alpha) + sin(pi alpha) erfi(w theta / sqrt 2)]
///
/// Evaluated with the Gaussian folded into the erfi term, so arbitrarily
/// large |w theta| stays finite. The imaginary part is zero for real input.
std::complex<double> amplitude(const FluxStrength& flux, double theta,
                               const ParaxialBeam& beam);

/// |amplitude|^2.
double intensity(const FluxStrength& flux, double theta,
                 const ParaxialBeam& beam);

/// Mean deflection angle sin(2 pi alpha) / (w sqrt(pi)).
double deflection_formula(const FluxStrength& flux, const ParaxialBeam& beam);

/// Quadrature rule suited to first/zeroth moments of the paraxial intensity:
/// the |c|^2 tail decays only like 1/theta^2, so the rule covers the whole
/// line rather than the Gaussian envelope alone.
specfn::QuadratureRule moment_rule(const ParaxialBeam& beam);

/// <theta> = int theta |c|^2 / int |c|^2 under `rule`.
///
/// The rule must at least span the Gaussian envelope down to 1e-16 of its
/// peak (CoverageError otherwise). Throws DegenerateError when the
/// normalisation integral is below 1e-300.
double deflection_numeric(const FluxStrength& flux, const ParaxialBeam& beam,
                          const specfn::QuadratureRule& rule);

}  // namespace abwave::analytic
