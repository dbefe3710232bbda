#pragma once

#include <string>

#include "abwave/wavefield.hpp"

// Free-space propagation of transverse wavefields by direct summation over
// source points (the path-sum form of the free propagator) and by FFT in
// the Fraunhofer limit.
namespace abwave::propagator {

using wavefield::Grid1D;
using wavefield::Grid2D;
using wavefield::NormConvention;
using wavefield::WaveField;
using wavefield::WaveField1D;
using wavefield::WaveField2D;

/// Wavenumber used in the kernel exp(i k l). `two_pi` is the standard
/// k = 2 pi / lambda; `pi` reproduces the literal exp(i pi l / lambda)
/// form, which doubles every far-field angle.
enum class KernelPhase { two_pi, pi };
enum class Regime { near, far, automatic };

const char* to_string(KernelPhase k);
const char* to_string(Regime r);

double kernel_wavenumber(double lambda_db, KernelPhase kernel);

template <class Grid>
struct PropagationGeometry {
  double distance;  ///< source plane to target plane, metres
  Grid target_grid;
  Regime regime_hint = Regime::automatic;
  KernelPhase kernel = KernelPhase::two_pi;
};

struct PropagationOptions {
  /// raw: N = 1 times the source cell measure. unit_peak: rescaled to
  /// max |psi| = 1. unit_total_probability: source scaled to unit
  /// probability and the unitary paraxial kernel prefactor applied
  /// (1/sqrt(i lambda L) per transverse dimension); the output is NOT
  /// renormalised, so its probability is the captured fraction.
  NormConvention norm = NormConvention::raw;
  /// 0 = hardware concurrency. Results are bit-identical for any value.
  unsigned threads = 0;
};

template <class Grid>
struct PropagationResult {
  WaveField<Grid> field;
  std::string normalization_applied;
  double fresnel_number;
  /// Sum |psi_f|^2 dA; meaningful for unit_total_probability requests.
  double captured_probability;
  KernelPhase kernel;
  std::string route;  ///< "direct" or "fraunhofer"
};

using PropagationResult1D = PropagationResult<Grid1D>;
using PropagationResult2D = PropagationResult<Grid2D>;

/// a^2 / (lambda L), a = largest |r| at which |psi|^2 >= 1e-12 of its peak.
double fresnel_number(const WaveField1D& source, double distance,
                      double lambda_db, KernelPhase kernel = KernelPhase::two_pi);
double fresnel_number(const WaveField2D& source, double distance,
                      double lambda_db, KernelPhase kernel = KernelPhase::two_pi);

/// Largest phase difference between neighbouring source samples seen from
/// any target point (per axis, worst case). Must not exceed pi.
struct AliasingReport {
  double max_phase_step;  ///< radians
  bool ok;
  std::string detail;
};
AliasingReport check_aliasing(const Grid1D& source,
                              const PropagationGeometry<Grid1D>& geom,
                              double lambda_db);
AliasingReport check_aliasing(const Grid2D& source,
                              const PropagationGeometry<Grid2D>& geom,
                              double lambda_db);

/// psi_f(x) = N sum_j exp(i k (l_j - L)) psi_j dA, l_j = sqrt(L^2 + |x - x_j|^2).
///
/// The constant exp(i k L) is dropped. Source samples that are exactly zero
/// are skipped; the remaining terms are added by pairwise summation in
/// ascending source index, one independent reduction per target sample.
/// Throws AliasingError if check_aliasing fails.
PropagationResult1D propagate_direct(const WaveField1D& source,
                                     const PropagationGeometry<Grid1D>& geom,
                                     double lambda_db,
                                     const PropagationOptions& options = {});
PropagationResult2D propagate_direct(const WaveField2D& source,
                                     const PropagationGeometry<Grid2D>& geom,
                                     double lambda_db,
                                     const PropagationOptions& options = {});

/// Target grid on which the FFT far field is sampled: spacing
/// lambda L / extent, n samples, bin -n/2 first.
Grid1D fraunhofer_grid(const Grid1D& source, double distance, double lambda_db,
                       KernelPhase kernel = KernelPhase::two_pi);
Grid2D fraunhofer_grid(const Grid2D& source, double distance, double lambda_db,
                       KernelPhase kernel = KernelPhase::two_pi);

/// Far field by DFT with the target-side quadratic phase exp(i k x^2 / 2L).
/// Requires a Fresnel number below 0.1 (RegimeError) and
/// geom.target_grid == fraunhofer_grid(...) (GridMismatchError).
PropagationResult1D propagate_fraunhofer(const WaveField1D& source,
                                         const PropagationGeometry<Grid1D>& geom,
                                         double lambda_db,
                                         const PropagationOptions& options = {});
PropagationResult2D propagate_fraunhofer(const WaveField2D& source,
                                         const PropagationGeometry<Grid2D>& geom,
                                         double lambda_db,
                                         const PropagationOptions& options = {});

/// Direct summation to the plane at fraction * total_distance.
PropagationResult1D propagate_near(const WaveField1D& source, double fraction,
                                   double total_distance,
                                   const Grid1D& target_grid, double lambda_db,
                                   KernelPhase kernel = KernelPhase::two_pi,
                                   const PropagationOptions& options = {});

/// Dispatches on geom.regime_hint. `automatic` picks the FFT route for 2-D
/// sources when the Fresnel number is below 0.1 and the target grid is the
/// natural FFT grid, otherwise direct summation.
PropagationResult1D propagate(const WaveField1D& source,
                              const PropagationGeometry<Grid1D>& geom,
                              double lambda_db,
                              const PropagationOptions& options = {});
PropagationResult2D propagate(const WaveField2D& source,
                              const PropagationGeometry<Grid2D>& geom,
                              double lambda_db,
                              const PropagationOptions& options = {});

}  // namespace abwave::propagator
