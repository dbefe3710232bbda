#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "abwave/analysis.hpp"
#include "abwave/constants.hpp"
#include "abwave/errors.hpp"
#include "abwave/propagator.hpp"
#include "generators.hpp"

using namespace abwave::analysis;
using abwave::analytic::FluxStrength;
using abwave::analytic::ParaxialBeam;
using abwave::wavefield::Grid1D;
using abwave::wavefield::NormConvention;
using abwave::wavefield::Provenance;

namespace {
constexpr double pi = std::numbers::pi;
const ParaxialBeam unit_beam{1.0};

DiffractionPattern analytic(double alpha, double theta_max = 400.0, std::size_t n = 40001) {
  return analytic_pattern(FluxStrength(alpha), unit_beam, theta_max, n);
}

// Near-plane field at 1% of 10 m for a 60 keV, 50 nm packet.
struct NearPlane {
  QuantumPotentialProfile q;
  std::vector<double> weight;
};

NearPlane near_plane(double alpha, std::size_t targets = 512) {
  const auto beam = abwave::wavefield::BeamParams::from_energy(60000.0, 50e-9);
  const double beta = 50e-9;
  const auto src = abwave::wavefield::phase_step_state(Grid1D::centered(2048, 12 * beta),
                                                       FluxStrength(alpha), beta);
  const double z = 0.1;
  const double zr = 0.5 * beam.wavenumber() * beta * beta;
  const double width = beta * std::hypot(1.0, z / zr);
  const auto target = Grid1D::centered(targets, 12 * width);
  const auto res =
      abwave::propagator::propagate_near(src, 0.01, 10.0, target, beam.lambda_db());
  NearPlane out{quantum_potential(res.field, abwave::constants::electron_mass, beta), {}};
  for (std::size_t i = 0; i < res.field.size(); ++i) out.weight.push_back(std::norm(res.field[i]));
  return out;
}

double mirror_residual(const QuantumPotentialProfile& p) {
  const std::size_t n = p.size();
  double qmax = 0.0, asym = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (p.masked[i]) continue;
    qmax = std::max(qmax, std::abs(p.Q[i]));
    if (!p.masked[n - i]) asym = std::max(asym, std::abs(p.Q[i] - p.Q[n - i]));
  }
  return asym / qmax;
}
}  // namespace

TEST(Pattern, InvariantsAndNormalisation) {
  EXPECT_THROW(DiffractionPattern({0, 1}, {1}, AngleUnit::radian, PatternNorm::raw, ""),
               abwave::GridMismatchError);
  EXPECT_THROW(DiffractionPattern({0, 0, 1}, {1, 1, 1}, AngleUnit::radian, PatternNorm::raw, ""),
               abwave::DomainError);
  EXPECT_THROW(DiffractionPattern({0, 1, 2}, {1, -1, 1}, AngleUnit::radian, PatternNorm::raw, ""),
               abwave::DomainError);
  const DiffractionPattern p({-1, 0, 1, 3}, {1, 4, 2, 0}, AngleUnit::milliradian,
                             PatternNorm::raw, "test");
  EXPECT_DOUBLE_EQ(p.area(), 2.5 + 3 + 2);
  EXPECT_DOUBLE_EQ(p.normalized(PatternNorm::unit_peak).peak(), 1.0);
  EXPECT_NEAR(p.normalized(PatternNorm::unit_area).area(), 1.0, 1e-15);
  const auto r = p.rescaled_angles(2.0, AngleUnit::scaled);
  EXPECT_EQ(r.angles()[3], 6.0);
  EXPECT_EQ(r.unit(), AngleUnit::scaled);
}

TEST(Expectation, SymmetricPatternIsZero) {
  EXPECT_NEAR(expectation_deflection(analytic(0.0)), 0.0, 1e-10);
  EXPECT_NEAR(expectation_deflection(analytic(1.0)), 0.0, 1e-10);
}

TEST(Expectation, HalfFluxIsZero) {
  EXPECT_NEAR(expectation_deflection(analytic(0.5)), 0.0, 1e-8);
}

TEST(Expectation, QuarterFluxApproachesTheFormula) {
  // The odd part of the pattern decays like a Gaussian, so the first moment is
  // captured in full. The even part decays like 1/theta^2 and a window of
  // +-400 misses a little of the area, which biases the normalised moment up.
  const double d = expectation_deflection(analytic(0.25));
  EXPECT_NEAR(d, 1.0 / std::sqrt(pi), 0.005 / std::sqrt(pi));
  EXPECT_GT(d, 1.0 / std::sqrt(pi));
}

TEST(Expectation, NarrowWindowIsACoverageError) {
  EXPECT_THROW(expectation_deflection(analytic(0.25, 3.0, 301)), abwave::CoverageError);
  EXPECT_THROW(asymmetry_metric(analytic(0.25, 3.0, 301)), abwave::CoverageError);
  const DiffractionPattern zero({-1, 0, 1}, {0, 0, 0}, AngleUnit::radian, PatternNorm::raw, "");
  EXPECT_THROW(expectation_deflection(zero), abwave::DegenerateError);
}

TEST(Asymmetry, Examples) {
  EXPECT_NEAR(asymmetry_metric(analytic(0.0)), 0.0, 1e-10);
  EXPECT_NEAR(asymmetry_metric(analytic(1.0)), 0.0, 1e-8);
  EXPECT_NEAR(asymmetry_metric(analytic(0.5)), 0.0, 1e-8);
  EXPECT_GT(asymmetry_metric(analytic(0.25)), 0.05);
  EXPECT_LT(asymmetry_metric(analytic(-0.25)), -0.05);
  const DiffractionPattern right({0.5, 1.0, 1.5}, {1, 1, 1}, AngleUnit::radian, PatternNorm::raw, "");
  EXPECT_THROW(asymmetry_metric(right), abwave::DomainError);
}

TEST(Asymmetry, BoundedAndSplitsInsideACell) {
  // Triangle on [-1, 2] with its apex at 1. The split at 0 falls inside the
  // first cell, where the interpolated I(0) = 0.5: negative side 0.25,
  // positive side 0.75 + 0.5.
  EXPECT_NEAR(asymmetry_metric(DiffractionPattern({-1, 1, 2}, {0, 1, 0}, AngleUnit::radian,
                                                  PatternNorm::raw, "")),
              (1.25 - 0.25) / 1.5, 1e-15);
  gen::Source g(0xd1d1);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a{-2, -1}, I{0, g.uniform(0, 1)};
    for (int i = 0; i < 6; ++i) {
      a.push_back(a.back() + g.uniform(0.1, 1.0));
      I.push_back(g.uniform(0, 1));
    }
    a.push_back(a.back() + 1.0);
    I.push_back(0.0);
    if (!(a.back() > 0)) continue;
    const DiffractionPattern q(a, I, AngleUnit::radian, PatternNorm::raw, "");
    const double A = asymmetry_metric(q);
    EXPECT_LE(std::abs(A), 1.0);
  }
}

TEST(QuantumPotential, GaussianMatchesClosedForm) {
  const auto g = Grid1D::centered(2048, 12.0);
  std::vector<abwave::wavefield::Complex> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-std::pow(g.coordinate(i), 2));
  const abwave::wavefield::WaveField1D f(g, v, NormConvention::raw, Provenance::synthetic);
  const auto q = quantum_potential(f, abwave::constants::electron_mass, 1.0);
  EXPECT_EQ(q.unit, PotentialUnit::beta_scaled);
  std::size_t used = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q.masked[i]) continue;
    ++used;
    const double y = q.y[i];
    // R = exp(-y^2): -R''/R = 2 - 4 y^2 in units of hbar^2 / (2 m beta^2).
    EXPECT_NEAR(q.Q[i], 2.0 - 4.0 * y * y, 1e-3 * (1.0 + 4.0 * y * y)) << "y=" << y;
  }
  EXPECT_GT(used, 800u);
}

TEST(QuantumPotential, FlatAmplitudeHasNoPotential) {
  const auto g = Grid1D::centered(64, 1.0);
  const abwave::wavefield::WaveField1D f(g, std::vector<abwave::wavefield::Complex>(64, {0.6, 0.8}));
  const auto q = quantum_potential(f, abwave::constants::electron_mass);
  EXPECT_EQ(q.unit, PotentialUnit::joule);
  for (std::size_t i = 1; i + 1 < 64; ++i) EXPECT_NEAR(q.Q[i], 0.0, 1e-40);
  EXPECT_TRUE(q.masked.front());
  EXPECT_TRUE(q.masked.back());
}

TEST(QuantumPotential, RejectsUnpropagatedStep) {
  const auto step = abwave::wavefield::phase_step_state(Grid1D::centered(64, 6.0),
                                                        FluxStrength(0.25), 1.0);
  EXPECT_THROW(quantum_potential(step, abwave::constants::electron_mass), abwave::SmoothnessError);
}

TEST(QuantumPotential, SymmetryDichotomy) {
  const auto zero = near_plane(0.0);
  const auto quarter = near_plane(0.25);
  const double r0 = mirror_residual(zero.q);
  const double r = mirror_residual(quarter.q);
  EXPECT_LE(r0, 1e-6);
  EXPECT_GE(r, 10.0 * r0);
  EXPECT_GT(r, 0.1);
  const auto integer = near_plane(1.0);
  EXPECT_LE(mirror_residual(integer.q), 1e-6);
}

TEST(ForceMoment, PolynomialPotential) {
  QuantumPotentialProfile p;
  const std::size_t n = 401;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    p.y.push_back(y);
    p.R.push_back(1.0);
    p.Q.push_back(y * y * y + y);
    p.masked.push_back(false);
  }
  const std::vector<double> w(n, 1.0);
  const auto m = quantum_force_moment(p, w);
  EXPECT_NEAR(m.unweighted, 4.0, 1e-4);
  EXPECT_NEAR(m.weighted, 4.0, 1e-4);
  EXPECT_NEAR(m.variation, 4.0, 1e-4);
  EXPECT_DOUBLE_EQ(m.coverage, 1.0);
  // Masking the middle third drops coverage below 95%.
  for (std::size_t i = 130; i < 270; ++i) p.masked[i] = true;
  EXPECT_THROW(quantum_force_moment(p, w), abwave::CoverageError);
}

TEST(ForceMoment, VanishesForZeroFluxAndIsOddInFlux) {
  const auto zero = near_plane(0.0);
  const auto m0 = quantum_force_moment(zero.q, zero.weight);
  // The mirror symmetry of Q itself only holds to ~1e-8 after the direct sum,
  // so the zero-flux moments are judged at the same 1e-6 level.
  EXPECT_LE(std::abs(m0.unweighted), 1e-6 * m0.variation);
  EXPECT_LE(std::abs(m0.weighted), 1e-6 * m0.weighted_variation);
  const auto plus = near_plane(0.25);
  const auto minus = near_plane(-0.25);
  const auto mp = quantum_force_moment(plus.q, plus.weight);
  const auto mm = quantum_force_moment(minus.q, minus.weight);
  EXPECT_GE(mp.coverage, 0.95);
  EXPECT_NEAR(mp.unweighted, -mm.unweighted, 1e-9 * mp.variation);
  EXPECT_NEAR(mp.weighted, -mm.weighted, 1e-9 * mp.weighted_variation);
  EXPECT_NEAR(mp.variation, mm.variation, 1e-9 * mp.variation);
}

TEST(Coherence, ZeroWidthIsIdentity) {
  const auto p = analytic(0.25, 20.0, 2001);
  const auto q = apply_partial_coherence(p, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.intensities()[i], q.intensities()[i]);
}

TEST(Coherence, PreservesAreaAndFillsTheDip) {
  const auto p = analytic(0.5, 400.0, 8001);
  const auto q = apply_partial_coherence(p, 0.3);
  EXPECT_NEAR(q.area() / p.area(), 1.0, 1e-10);
  const std::size_t centre = 4000;
  EXPECT_EQ(p.intensities()[centre], 0.0);
  EXPECT_GT(q.intensities()[centre] / q.peak(), 0.01);
}

TEST(Coherence, AsymmetryDecaysMonotonically) {
  const auto p = analytic(0.39, 400.0, 8001);
  double previous = std::abs(asymmetry_metric(p));
  const double sign = asymmetry_metric(p) > 0 ? 1.0 : -1.0;
  for (double s : {0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4}) {
    const double a = asymmetry_metric(apply_partial_coherence(p, s));
    EXPECT_LE(std::abs(a), previous) << "source_rms=" << s;
    EXPECT_GT(sign * a, 0.0);
    previous = std::abs(a);
  }
}

TEST(Coherence, MarginIsEnforced) {
  const auto p = analytic(0.25, 5.0, 501);
  EXPECT_THROW(apply_partial_coherence(p, 1.0), abwave::MarginError);
  EXPECT_THROW(apply_partial_coherence(p, -1.0), abwave::DomainError);
}

TEST(Momentum, ParsevalOnRandomFields) {
  gen::Source g(0xd2d2);
  for (int t = 0; t < 20; ++t) {
    const auto grid = Grid1D(static_cast<std::size_t>(g.integer(16, 700)), g.uniform(0.5, 20.0),
                             -g.uniform(0.1, 0.4));
    std::vector<abwave::wavefield::Complex> v(grid.size());
    for (auto& z : v) z = {g.uniform(-1, 1), g.uniform(-1, 1)};
    const abwave::wavefield::WaveField1D f(grid, v);
    const auto s = momentum_spectrum(f);
    EXPECT_NEAR(s.total_probability() / f.total_probability(), 1.0, 1e-10);
  }
}

TEST(Momentum, GaussianReciprocity) {
  const double beta = 0.7;
  const auto f = abwave::wavefield::phase_step_state(Grid1D::centered(1024, 40.0),
                                                     FluxStrength(0.0), beta);
  const auto s = momentum_spectrum(f);
  // exp(-y^2/beta^2) <-> exp(-k^2 beta^2 / 4): amplitude falls to 1/e at k = 2/beta.
  double peak = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) peak = std::max(peak, s.magnitude(i));
  double k_e = 0.0;
  for (std::size_t i = s.size() / 2; i + 1 < s.size(); ++i) {
    const double a = s.magnitude(i) / peak, b = s.magnitude(i + 1) / peak;
    if (a >= std::exp(-1.0) && b < std::exp(-1.0)) {
      const double t = (a - std::exp(-1.0)) / (a - b);
      k_e = s.k()[i] + t * s.dk();
      break;
    }
  }
  EXPECT_NEAR(k_e * beta / 2.0, 1.0, 0.01);
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_NEAR(s.magnitude(i), s.magnitude(s.size() - i), 1e-12 * peak);
  }
}

TEST(Momentum, QuarterFluxStepIsNotEven) {
  const auto f = abwave::wavefield::phase_step_state(Grid1D::centered(1024, 40.0),
                                                     FluxStrength(0.25), 1.0);
  const auto s = momentum_spectrum(f);
  double peak = 0.0, odd = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    peak = std::max(peak, s.magnitude(i));
    odd = std::max(odd, std::abs(s.magnitude(i) - s.magnitude(s.size() - i)));
  }
  EXPECT_GT(odd / peak, 0.01);
}

TEST(PhaseOnly, ControlsAndTheAharonovBohmStep) {
  const auto grid = Grid1D::centered(1024, 40.0);
  const auto bare = momentum_spectrum(
      abwave::wavefield::phase_step_state(grid, FluxStrength(0.0), 1.0));
  std::vector<abwave::wavefield::Complex> global, shifted;
  for (std::size_t i = 0; i < bare.size(); ++i) {
    global.push_back(bare.amplitude()[i] * std::polar(1.0, 0.3));
    shifted.push_back(bare.amplitude()[i] * std::polar(1.0, 1.7 * bare.k()[i]));
  }
  const MomentumSpectrum g({bare.k().begin(), bare.k().end()}, global, bare.dk());
  const MomentumSpectrum t({bare.k().begin(), bare.k().end()}, shifted, bare.dk());
  const auto rg = phase_only_test(bare, g);
  const auto rt = phase_only_test(bare, t);
  EXPECT_TRUE(rg.is_phase_only);
  EXPECT_LT(rg.magnitude_deviation, 1e-6);
  EXPECT_TRUE(rt.is_phase_only);
  EXPECT_LT(rt.magnitude_deviation, 1e-6);
  const auto ab = momentum_spectrum(
      abwave::wavefield::phase_step_state(grid, FluxStrength(0.25), 1.0));
  const auto r = phase_only_test(bare, ab);
  EXPECT_FALSE(r.is_phase_only);
  EXPECT_GT(r.magnitude_deviation, 0.01);
  const auto other = momentum_spectrum(
      abwave::wavefield::phase_step_state(Grid1D::centered(1024, 30.0), FluxStrength(0.0), 1.0));
  EXPECT_THROW(phase_only_test(bare, other), abwave::GridMismatchError);
}

TEST(Zeilinger, ConstantLinearAndQuadraticPhase) {
  const std::size_t n = 2001;
  std::vector<double> k(n), w(n), zero(n, 0.0), flat(n, 2.5), lin(n), quad(n);
  const double k0 = 1.3, sigma = 0.4;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = -5.0 + 10.0 * static_cast<double>(i) / (n - 1);
    w[i] = std::exp(-std::pow((k[i] - k0) / sigma, 2) / 2);
    sum += w[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    w[i] /= sum;
    lin[i] = 0.75 * k[i];
    quad[i] = k[i] * k[i];
  }
  EXPECT_EQ(zeilinger_dispersion_term(k, w, flat), 0.0);
  EXPECT_EQ(zeilinger_dispersion_term(k, w, zero), 0.0);
  EXPECT_NEAR(zeilinger_dispersion_term(k, w, lin), 0.75, 1e-10);
  EXPECT_NEAR(zeilinger_dispersion_term(k, w, quad), 2.0 * k0, 1e-6);
  std::vector<double> bad(w);
  bad[0] += 1e-6;
  EXPECT_THROW(zeilinger_dispersion_term(k, bad, lin), abwave::DomainError);
  EXPECT_THROW(zeilinger_dispersion_term(k, w, std::vector<double>(n - 1)),
               abwave::GridMismatchError);
}
