#pragma once

#include <span>
#include <string>
#include <vector>

#include "abwave/wavefield.hpp"

namespace abwave::analysis {

using wavefield::Complex;
using wavefield::WaveField1D;
using wavefield::WaveField2D;

/// radian/milliradian are physical angles; `scaled` is the dimensionless
/// w * theta used by the paraxial amplitude.
enum class AngleUnit { radian, milliradian, scaled };
enum class PatternNorm { unit_peak, unit_area, raw };

const char* to_string(AngleUnit u);
const char* to_string(PatternNorm n);

/// Intensity versus angle on a strictly increasing (not necessarily
/// uniform) angle axis.
class DiffractionPattern {
 public:
  DiffractionPattern(std::vector<double> angles, std::vector<double> intensities,
                     AngleUnit unit, PatternNorm normalization,
                     std::string provenance);

  std::span<const double> angles() const { return angles_; }
  std::span<const double> intensities() const { return intensities_; }
  std::size_t size() const { return angles_.size(); }
  AngleUnit unit() const { return unit_; }
  PatternNorm normalization() const { return normalization_; }
  const std::string& provenance() const { return provenance_; }

  /// Trapezoidal integral of the intensity.
  double area() const;
  double peak() const;
  DiffractionPattern normalized(PatternNorm target) const;
  /// Same intensities on angles multiplied by `factor` (> 0).
  DiffractionPattern rescaled_angles(double factor, AngleUnit unit) const;

 private:
  std::vector<double> angles_;
  std::vector<double> intensities_;
  AngleUnit unit_;
  PatternNorm normalization_;
  std::string provenance_;
};

/// Samples |c(alpha, theta)|^2 on n points of [-theta_max, theta_max].
DiffractionPattern analytic_pattern(const analytic::FluxStrength& flux,
                                    const analytic::ParaxialBeam& beam,
                                    double theta_max, std::size_t n);

/// Far-field intensity of a propagated 1-D field; angle = x / distance (rad).
DiffractionPattern far_field_pattern(const WaveField1D& field, double distance,
                                     std::string provenance);

enum class ProfileMode { projection, central_line };

/// Profile of a 2-D far field along the axis transverse to a bar lying along
/// x, i.e. versus theta_y = y / distance. `projection` integrates over
/// theta_x; `central_line` takes the theta_x = 0 column. Samples without a
/// mirror partner (the FFT Nyquist bin) are dropped so the angle axis is
/// symmetric.
DiffractionPattern far_field_profile(const WaveField2D& field, double distance,
                                     ProfileMode mode, std::string provenance);

/// <theta> = sum theta_i I_i / sum I_i with trapezoid weights.
///
/// Throws CoverageError if the pattern is estimated to hold less than 99% of
/// the total intensity. The estimate extrapolates each edge as a 1/theta^2
/// tail, i.e. adds I_edge * |theta_edge - centre| per side.
double expectation_deflection(const DiffractionPattern& p);

/// (int_{theta>0} I - int_{theta<0} I) / int I, splitting the trapezoid at 0.
double asymmetry_metric(const DiffractionPattern& p);

enum class PotentialUnit { joule, beta_scaled };

struct QuantumPotentialProfile {
  std::vector<double> y;       ///< metres
  std::vector<double> R;       ///< |psi|
  std::vector<double> Q;       ///< 0 where masked
  std::vector<bool> masked;    ///< boundary samples and R < 1e-6 max R
  PotentialUnit unit = PotentialUnit::joule;
  double unit_scale = 1.0;     ///< joules per reported unit

  std::size_t size() const { return y.size(); }
};

/// Q = -hbar^2 R'' / (2 m R), R'' by centred second differences.
///
/// Rejects fields that still carry the initial phase discontinuity
/// (SmoothnessError). With `beta` > 0, Q is reported in units of
/// hbar^2 / (2 m beta^2).
QuantumPotentialProfile quantum_potential(const WaveField1D& field,
                                          double mass, double beta = 0.0);

struct QuantumForceMoment {
  double unweighted;  ///< int dQ/dy dy over unmasked runs
  double weighted;    ///< int |psi|^2 dQ/dy dy over unmasked runs
  double coverage;    ///< share of sum(weight) on samples that were used
  double variation;   ///< int |dQ/dy| dy, the scale the unweighted moment is judged against
  double weighted_variation;  ///< int |psi|^2 |dQ/dy| dy
};

/// Only samples whose mirror sample y -> -y is present and unmasked take
/// part, so the domain is symmetric about the flux line.
/// Requires the unmasked samples to carry >= 95% of sum(weight)
/// (CoverageError). dQ/dy by centred differences with second-order one-sided
/// closures at the ends of each unmasked run.
QuantumForceMoment quantum_force_moment(const QuantumPotentialProfile& profile,
                                        std::span<const double> weight);

/// Incoherent Gaussian source of r.m.s. width source_rms (same unit as the
/// pattern angles): every sample is spread over its neighbours with a
/// Gaussian whose discrete weights are normalised, so the trapezoidal area
/// is preserved. Requires >= 5 source_rms between each end of the domain
/// and the nearest sample above 1e-3 of the peak (MarginError).
DiffractionPattern apply_partial_coherence(const DiffractionPattern& p,
                                           double source_rms);

class MomentumSpectrum {
 public:
  MomentumSpectrum(std::vector<double> k, std::vector<Complex> amplitude,
                   double dk);
  std::span<const double> k() const { return k_; }
  std::span<const Complex> amplitude() const { return amplitude_; }
  std::size_t size() const { return k_.size(); }
  double dk() const { return dk_; }
  double magnitude(std::size_t i) const;
  double phase(std::size_t i) const;
  /// Sum |phi|^2 dk.
  double total_probability() const;

 private:
  std::vector<double> k_;
  std::vector<Complex> amplitude_;
  double dk_;
};

/// phi(k_m) = dy / sqrt(2 pi) sum_j psi_j exp(-i k_m y_j), k_m = 2 pi m /
/// extent for m = -n/2 ... n/2 - 1. Discrete Parseval holds exactly.
MomentumSpectrum momentum_spectrum(const WaveField1D& field);

struct PhaseOnlyResult {
  bool is_phase_only;
  double magnitude_deviation;
};

/// max_k ||after| - |before|| / max |before|; phase-only when < 1e-6.
PhaseOnlyResult phase_only_test(const MomentumSpectrum& before,
                                const MomentumSpectrum& after);

/// sum_i w_i (d delta / dk)(k_i), the dispersive term of the longitudinal
/// position shift. Weights must sum to 1 within 1e-9.
double zeilinger_dispersion_term(std::span<const double> k,
                                 std::span<const double> weight,
                                 std::span<const double> delta);

}  // namespace abwave::analysis
