#include "abwave/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "abwave/constants.hpp"
#include "abwave/errors.hpp"

namespace abwave::wavefield {

const char* to_string(NormConvention c) {
  switch (c) {
    case NormConvention::unit_total_probability:
      return "unit-total-probability";
    case NormConvention::unit_peak:
      return "unit-peak";
    case NormConvention::raw:
      return "raw";
  }
  return "?";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::step_state:
      return "step-state";
    case Provenance::aperture_state:
      return "aperture-state";
    case Provenance::propagated:
      return "propagated";
    case Provenance::synthetic:
      return "synthetic";
  }
  return "?";
}

template <class Grid>
WaveField<Grid>::WaveField(Grid grid, std::vector<Complex> values,
                           NormConvention norm, Provenance provenance)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      norm_(norm),
      provenance_(provenance) {
  if (values_.size() != grid_.size()) {
    std::ostringstream msg;
    msg << "WaveField: " << values_.size() << " values for a grid of "
        << grid_.size() << " samples";
    throw GridMismatchError(msg.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      std::ostringstream msg;
      msg << "WaveField: sample " << i << " is not finite";
      throw DomainError(msg.str());
    }
  }
  if (norm_ == NormConvention::unit_total_probability &&
      std::abs(total_probability() - 1.0) > 1e-10) {
    throw DomainError("WaveField: unit-total-probability field does not sum to 1");
  }
}

template <class Grid>
double WaveField<Grid>::total_probability() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * grid_.cell_measure();
}

template <class Grid>
double WaveField<Grid>::peak_amplitude() const {
  double peak = 0.0;
  for (const auto& v : values_) peak = std::max(peak, std::abs(v));
  return peak;
}

template <class Grid>
WaveField<Grid> WaveField<Grid>::normalized(NormConvention target) const {
  double scale = 1.0;
  if (target == NormConvention::unit_total_probability) {
    const double p = total_probability();
    if (!(p > 0.0)) throw DegenerateError("normalized: field is identically zero");
    scale = 1.0 / std::sqrt(p);
  } else if (target == NormConvention::unit_peak) {
    const double peak = peak_amplitude();
    if (!(peak > 0.0)) throw DegenerateError("normalized: field is identically zero");
    scale = 1.0 / peak;
  }
  std::vector<Complex> out(values_.begin(), values_.end());
  for (auto& v : out) v *= scale;
  return WaveField(grid_, std::move(out), target, provenance_);
}

template class WaveField<Grid1D>;
template class WaveField<Grid2D>;

double de_broglie_wavelength(double kinetic_energy_ev) {
  if (!(kinetic_energy_ev > 0.0) || !std::isfinite(kinetic_energy_ev)) {
    std::ostringstream msg;
    msg << "de_broglie_wavelength: energy must be positive (got "
        << kinetic_energy_ev << " eV)";
    throw DomainError(msg.str());
  }
  using namespace constants;
  const double e_joule = kinetic_energy_ev * elementary_charge;
  const double pc = e_joule / speed_of_light;
  const double p = std::sqrt(2.0 * electron_mass * e_joule + pc * pc);
  return planck / p;
}

BeamParams::BeamParams(double e, double lambda, double beta, double coherence)
    : kinetic_energy_(e),
      lambda_db_(lambda),
      beta_(beta),
      coherence_width_(coherence) {}

BeamParams BeamParams::from_energy(double kinetic_energy_ev,
                                   double packet_width_beta,
                                   double coherence_width) {
  if (!(packet_width_beta > 0.0) || !std::isfinite(packet_width_beta)) {
    throw DomainError("BeamParams: packet width beta must be positive");
  }
  if (!(coherence_width >= 0.0) || !std::isfinite(coherence_width)) {
    throw DomainError("BeamParams: coherence width must be non-negative");
  }
  return BeamParams(kinetic_energy_ev, de_broglie_wavelength(kinetic_energy_ev),
                    packet_width_beta, coherence_width);
}

double BeamParams::wavenumber() const {
  return 2.0 * std::numbers::pi / lambda_db_;
}

double BeamParams::paraxial_w() const {
  return wavenumber() * beta_ / std::numbers::sqrt2;
}

analytic::ParaxialBeam BeamParams::paraxial_beam() const {
  return analytic::ParaxialBeam(paraxial_w());
}

void BeamParams::validate() const {
  const double fresh = de_broglie_wavelength(kinetic_energy_);
  if (std::abs(fresh - lambda_db_) > 1e-12 * fresh) {
    throw DomainError("BeamParams: stored wavelength inconsistent with energy");
  }
  if (!(beta_ > 0.0)) throw DomainError("BeamParams: beta must be positive");
}

WaveField1D phase_step_state(const Grid1D& grid, const FluxStrength& flux,
                             double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("phase_step_state: beta must be positive");
  }
  const auto mask = flux_bar_phase_mask(grid, FluxBar{0.0, flux});
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.coordinate(i) / beta;
    values[i] = mask[i] * std::exp(-y * y);
  }
  return WaveField1D(grid, std::move(values), NormConvention::raw,
                     Provenance::step_state);
}

std::vector<Complex> flux_bar_phase_mask(const Grid1D& grid,
                                         const FluxBar& bar) {
  if (!(bar.width >= 0.0) || !std::isfinite(bar.width)) {
    throw DomainError("flux_bar_phase_mask: bar width must be >= 0");
  }
  const double half_phase = std::numbers::pi * bar.flux.alpha();
  const double half_width = 0.5 * bar.width;
  std::vector<Complex> mask(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.coordinate(i);
    if (bar.width == 0.0 && y == 0.0) {
      mask[i] = Complex(std::cos(half_phase), 0.0);
      continue;
    }
    double phase = 0.0;
    if (y <= -half_width) {
      phase = -half_phase;
    } else if (y >= half_width) {
      phase = half_phase;
    } else {
      // Enclosed flux grows linearly across a uniformly magnetised bar.
      phase = half_phase * (y / half_width);
    }
    mask[i] = std::polar(1.0, phase);
  }
  return mask;
}

WaveField2D circular_aperture_state(const Grid2D& grid, double radius,
                                    const FluxBar& bar) {
  std::ostringstream msg;
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw GeometryError("circular_aperture_state: radius must be positive");
  }
  const double padded = 1.2 * radius;
  for (const Grid1D* axis : {&grid.x(), &grid.y()}) {
    if (-axis->first() < padded || axis->last() < padded) {
      msg << "circular_aperture_state: aperture radius " << radius
          << " m plus 20% margin does not fit in grid extent "
          << axis->extent() << " m";
      throw GeometryError(msg.str());
    }
  }
  if (bar.width > 2.0 * radius) {
    msg << "circular_aperture_state: bar width " << bar.width
        << " m exceeds aperture diameter " << 2.0 * radius << " m";
    throw GeometryError(msg.str());
  }
  const bool along_x = bar.orientation == BarOrientation::along_x;
  const Grid1D& transverse = along_x ? grid.y() : grid.x();
  const auto mask = flux_bar_phase_mask(transverse, bar);
  const double half_width = 0.5 * bar.width;
  const double r2 = radius * radius;

  std::vector<Complex> values(grid.size(), Complex(0.0, 0.0));
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double y = grid.y().coordinate(iy);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = grid.x().coordinate(ix);
      if (x * x + y * y > r2) continue;
      const double t = along_x ? y : x;
      if (std::abs(t) < half_width) continue;  // opaque rod
      values[grid.index(ix, iy)] = mask[along_x ? iy : ix];
    }
  }
  return WaveField2D(grid, std::move(values), NormConvention::raw,
                     Provenance::aperture_state);
}

}  // namespace abwave::wavefield
