#pragma once

#include <complex>
#include <span>
#include <vector>

#include "abwave/analytic.hpp"
#include "abwave/grid.hpp"

namespace abwave::wavefield {

using analytic::FluxStrength;
using Complex = std::complex<double>;

enum class NormConvention { unit_total_probability, unit_peak, raw };

/// Where a field came from. Fresh step and aperture states carry a phase
/// discontinuity; spatial derivatives are only meaningful after propagation.
enum class Provenance { step_state, aperture_state, propagated, synthetic };

const char* to_string(NormConvention c);
const char* to_string(Provenance p);

/// Complex samples on a fixed grid. Immutable once built; every sample is
/// finite, and a unit_total_probability field sums to 1 within 1e-10.
template <class Grid>
class WaveField {
 public:
  WaveField(Grid grid, std::vector<Complex> values,
            NormConvention norm = NormConvention::raw,
            Provenance provenance = Provenance::synthetic);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  NormConvention norm() const { return norm_; }
  Provenance provenance() const { return provenance_; }

  /// Sum |psi|^2 * cell measure.
  double total_probability() const;
  double peak_amplitude() const;

  /// Rescaled copy obeying `target`; `raw` just relabels.
  WaveField normalized(NormConvention target) const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
  NormConvention norm_;
  Provenance provenance_;
};

using WaveField1D = WaveField<Grid1D>;
using WaveField2D = WaveField<Grid2D>;

/// Relativistic electron wavelength h / p with
/// p = sqrt(2 m0 E + (E/c)^2); E in eV, result in metres.
double de_broglie_wavelength(double kinetic_energy_ev);

class BeamParams {
 public:
  /// packet_width_beta: the beta of exp(-y^2/beta^2), metres.
  /// coherence_width: r.m.s. angular source size (rad), 0 for coherent.
  static BeamParams from_energy(double kinetic_energy_ev,
                                double packet_width_beta,
                                double coherence_width = 0.0);

  double kinetic_energy() const { return kinetic_energy_; }
  double lambda_db() const { return lambda_db_; }
  double packet_width_beta() const { return beta_; }
  double coherence_width() const { return coherence_width_; }
  double wavenumber() const;
  /// w = k beta / sqrt(2): a Gaussian of width beta has far-field r.m.s.
  /// angular width 1/(k beta), which equals 1/(w sqrt 2).
  double paraxial_w() const;
  analytic::ParaxialBeam paraxial_beam() const;

  /// Recomputes the wavelength from the energy; throws DomainError if the
  /// stored value disagrees beyond 1e-12 relative.
  void validate() const;

 private:
  BeamParams(double e, double lambda, double beta, double coherence);
  double kinetic_energy_;
  double lambda_db_;
  double beta_;
  double coherence_width_;
};

enum class BarOrientation { along_x, along_y };

/// Uniformly magnetised bar of width `width` (0: ideal line).
struct FluxBar {
  double width = 0.0;
  FluxStrength flux{0.0};
  BarOrientation orientation = BarOrientation::along_x;
};

/// exp(-i alpha pi) exp(-y^2/beta^2) for y < 0, exp(+i alpha pi) ... for
/// y > 0. A sample exactly on y = 0 gets the mean of the two branches,
/// cos(alpha pi).
WaveField1D phase_step_state(const Grid1D& grid, const FluxStrength& flux,
                             double beta);

/// Phase factor of a flux bar across `grid` (the coordinate transverse to
/// the bar). Width 0 reproduces the ideal step, including the cos(alpha pi)
/// value at y = 0. Width d > 0: phase -alpha pi below -d/2, +alpha pi above
/// +d/2, linear in between.
std::vector<Complex> flux_bar_phase_mask(const Grid1D& grid,
                                         const FluxBar& bar);

/// Unit disc of `radius` centred on the origin, opaque over the bar
/// footprint and carrying the bar's phase mask. The disc plus a 20% margin
/// must fit on both axes (GeometryError), and the bar may not be wider than
/// the disc.
WaveField2D circular_aperture_state(const Grid2D& grid, double radius,
                                    const FluxBar& bar);

}  // namespace abwave::wavefield
