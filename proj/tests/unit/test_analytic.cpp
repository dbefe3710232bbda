#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "abwave/analytic.hpp"
#include "abwave/constants.hpp"
#include "abwave/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace abwave::analytic;

namespace {
const ParaxialBeam unit_beam{1.0};

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}
}  // namespace

TEST(Types, RejectInvalidParameters) {
  EXPECT_THROW(ParaxialBeam(0.0), abwave::DomainError);
  EXPECT_THROW(ParaxialBeam(-1.0), abwave::DomainError);
  EXPECT_THROW(ParaxialBeam(std::numeric_limits<double>::infinity()), abwave::DomainError);
  EXPECT_THROW(FluxStrength(std::numeric_limits<double>::quiet_NaN()), abwave::DomainError);
}

TEST(FluxStrength, PhysicalFluxRoundTrip) {
  const FluxStrength f(0.39);
  const double phi = -0.39 * abwave::constants::planck / abwave::constants::elementary_charge;
  EXPECT_NEAR(f.phi(), phi, std::abs(phi) * 1e-15);
  EXPECT_NEAR(FluxStrength::from_flux(phi).alpha(), 0.39, 1e-15);
  EXPECT_NO_THROW(FluxStrength(0.39, phi));
  EXPECT_THROW(FluxStrength(0.39, phi * (1.0 + 1e-9)), abwave::DomainError);
  EXPECT_NEAR(f.ab_phase(), 2.0 * std::numbers::pi * 0.39, 1e-15);
  EXPECT_EQ(FluxStrength(7.25).alpha(), 7.25);
}

TEST(Amplitude, GaussianEnvelopeAtZeroFlux) {
  const auto c = amplitude(FluxStrength(0.0), 0.5, unit_beam);
  EXPECT_NEAR(c.real(), std::exp(-0.125), 1e-15);
  EXPECT_NEAR(c.real(), 0.8824969, 1e-7);
  EXPECT_EQ(c.imag(), 0.0);
}

TEST(Amplitude, HalfFluxVanishesOnAxis) {
  EXPECT_EQ(amplitude(FluxStrength(0.5), 0.0, unit_beam), std::complex<double>(0.0, 0.0));
  EXPECT_EQ(intensity(FluxStrength(-1.5), 0.0, unit_beam), 0.0);
}

TEST(Amplitude, QuarterFluxFavoursPositiveAngles) {
  const FluxStrength a(0.25);
  EXPECT_GT(intensity(a, 0.6, unit_beam), intensity(a, -0.6, unit_beam));
}

TEST(Amplitude, MatchesFactorwiseOracleInCore) {
  gen::Source g(0xa0a0);
  for (int i = 0; i < 2000; ++i) {
    const double alpha = g.alpha();
    const double w = g.beam_w();
    const double theta = g.uniform(-5.0, 5.0) / w;
    const double x = w * theta / std::numbers::sqrt2;
    const long double ref = std::exp(-static_cast<long double>(x) * x) *
                            (std::cos(std::numbers::pi_v<long double> * alpha) +
                             std::sin(std::numbers::pi_v<long double> * alpha) *
                                 oracle::erfi_series(x));
    const double got = amplitude(FluxStrength(alpha), theta, ParaxialBeam(w)).real();
    EXPECT_NEAR(got, static_cast<double>(ref), 1e-13) << alpha << " " << w << " " << theta;
  }
}

TEST(Amplitude, StaysFiniteFarIntoTheTails) {
  for (double wt : {27.0, 40.0, 1e3, 1e8}) {
    for (double s : {-1.0, 1.0}) {
      const auto c = amplitude(FluxStrength(0.3), s * wt, unit_beam);
      EXPECT_TRUE(std::isfinite(c.real()));
      // The Gaussian-damped erfi tends to 1 / (sqrt(pi) x) with x = theta / sqrt 2.
      const double x = s * wt / std::numbers::sqrt2;
      const double tail = std::sin(0.3 * std::numbers::pi) / (std::sqrt(std::numbers::pi) * x);
      EXPECT_NEAR(c.real() / tail, 1.0, 2.0 / (x * x));
    }
  }
  EXPECT_THROW(amplitude(FluxStrength(0.3), std::numeric_limits<double>::quiet_NaN(), unit_beam),
               abwave::DomainError);
}

TEST(Intensity, IntegerFluxIsTheBareGaussian) {
  for (double th = -4.0; th <= 4.0; th += 0.25) {
    EXPECT_NEAR(intensity(FluxStrength(1.0), th, unit_beam), std::exp(-th * th), 1e-15);
  }
}

TEST(Intensity, PeriodicInFluxProperty) {
  gen::Source g(0xa0a1);
  for (int i = 0; i < 3000; ++i) {
    const double alpha = g.alpha();
    const double theta = g.scaled_theta();
    const ParaxialBeam b(g.beam_w());
    const double th = theta / b.w();
    const double i0 = intensity(FluxStrength(alpha), th, b);
    const double i1 = intensity(FluxStrength(alpha + 1.0), th, b);
    EXPECT_GE(i0, 0.0);
    EXPECT_LE(rel_diff(i0, i1), 1e-12) << "alpha=" << alpha << " theta=" << th;
  }
}

TEST(Intensity, FluxReversalMirrorProperty) {
  gen::Source g(0xa0a2);
  for (int i = 0; i < 3000; ++i) {
    const double alpha = g.alpha();
    const double th = g.scaled_theta();
    EXPECT_EQ(intensity(FluxStrength(alpha), th, unit_beam),
              intensity(FluxStrength(-alpha), -th, unit_beam));
  }
}

TEST(DeflectionFormula, Examples) {
  EXPECT_EQ(deflection_formula(FluxStrength(0.0), unit_beam), 0.0);
  EXPECT_EQ(deflection_formula(FluxStrength(0.5), unit_beam), 0.0);
  EXPECT_NEAR(deflection_formula(FluxStrength(0.25), unit_beam), 0.5641895835, 1e-10);
  EXPECT_NEAR(deflection_formula(FluxStrength(0.25), ParaxialBeam(4.0)), 0.5641895835 / 4.0, 1e-10);
}

TEST(DeflectionFormula, OddAndVanishingOnHalfIntegers) {
  gen::Source g(0xa0a3);
  for (int i = 0; i < 1000; ++i) {
    const double a = g.uniform(-3.0, 3.0);
    const ParaxialBeam b(g.beam_w());
    EXPECT_EQ(deflection_formula(FluxStrength(-a), b), -deflection_formula(FluxStrength(a), b));
  }
  for (int k = -8; k <= 8; ++k) {
    EXPECT_EQ(deflection_formula(FluxStrength(0.5 * k), unit_beam), 0.0) << "alpha=" << 0.5 * k;
  }
}

TEST(DeflectionNumeric, ZeroFluxIsZero) {
  for (double w : {0.3, 1.0, 20.0}) {
    const ParaxialBeam b(w);
    EXPECT_NEAR(deflection_numeric(FluxStrength(0.0), b, moment_rule(b)), 0.0, 1e-12);
  }
}

TEST(DeflectionNumeric, MatchesFormula) {
  for (int i = 1; i <= 19; ++i) {
    const double a = 0.05 * i;
    if (std::abs(std::sin(2 * std::numbers::pi * a)) < 1e-12) continue;
    for (double w : {1.0, 3.0}) {
      const ParaxialBeam b(w);
      const double f = deflection_formula(FluxStrength(a), b);
      const double n = deflection_numeric(FluxStrength(a), b, moment_rule(b));
      EXPECT_LE(std::abs(n - f) / std::abs(f), 1e-6) << "alpha=" << a << " w=" << w;
    }
  }
}

TEST(DeflectionNumeric, PeriodicInFlux) {
  const auto rule = moment_rule(unit_beam);
  const double d0 = deflection_numeric(FluxStrength(0.25), unit_beam, rule);
  const double d1 = deflection_numeric(FluxStrength(1.25), unit_beam, rule);
  EXPECT_NEAR(d0, d1, 1e-12);
}

TEST(DeflectionNumeric, NarrowWindowIsACoverageError) {
  const auto narrow = abwave::specfn::QuadratureRule::gauss_legendre(20, -2.0, 2.0);
  EXPECT_THROW(deflection_numeric(FluxStrength(0.25), unit_beam, narrow), abwave::CoverageError);
}
