#include "abwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "abwave/constants.hpp"
#include "abwave/detail/fft.hpp"
#include "abwave/errors.hpp"

namespace abwave::analysis {

const char* to_string(AngleUnit u) {
  switch (u) {
    case AngleUnit::radian:
      return "rad";
    case AngleUnit::milliradian:
      return "mrad";
    case AngleUnit::scaled:
      return "w*rad";
  }
  return "?";
}

const char* to_string(PatternNorm n) {
  switch (n) {
    case PatternNorm::unit_peak:
      return "unit-peak";
    case PatternNorm::unit_area:
      return "unit-area";
    case PatternNorm::raw:
      return "raw";
  }
  return "?";
}

namespace {

std::vector<double> trapezoid_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

// Derivative at each point of a run, exact for quadratics, written in
// difference form so a constant input gives exactly zero.
std::vector<double> derivative(std::span<const double> x,
                               std::span<const double> f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = (h1 * h1 * (f[i + 1] - f[i]) + h2 * h2 * (f[i] - f[i - 1])) /
           (h1 * h2 * (h1 + h2));
  }
  const auto one_sided = [](double h1, double h2, double a, double b) {
    return (h1 + h2) / (h1 * h2) * a - h1 / (h2 * (h1 + h2)) * b;
  };
  d[0] = one_sided(x[1] - x[0], x[2] - x[1], f[1] - f[0], f[2] - f[0]);
  d[n - 1] = -one_sided(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3],
                        f[n - 2] - f[n - 1], f[n - 3] - f[n - 1]);
  return d;
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    sum += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
  }
  return sum;
}

// Trapezoidal total, after checking the pattern is non-degenerate and holds
// at least 99% of the (extrapolated) intensity.
double checked_total(const DiffractionPattern& p, const char* fn) {
  const auto a = p.angles();
  const auto I = p.intensities();
  const double total = trapezoid(a, I);
  if (!(total > 0.0)) {
    std::ostringstream msg;
    msg << fn << ": pattern has zero total intensity";
    throw DegenerateError(msg.str());
  }
  const double centre = 0.5 * (a.front() + a.back());
  const double tail = I.front() * std::abs(a.front() - centre) +
                      I.back() * std::abs(a.back() - centre);
  const double coverage = total / (total + tail);
  if (coverage < 0.99) {
    std::ostringstream msg;
    msg << fn << ": pattern covers an estimated " << 100.0 * coverage
        << "% of the total intensity (< 99%); widen the angular window";
    throw CoverageError(msg.str());
  }
  return total;
}

}  // namespace

DiffractionPattern::DiffractionPattern(std::vector<double> angles,
                                       std::vector<double> intensities,
                                       AngleUnit unit,
                                       PatternNorm normalization,
                                       std::string provenance)
    : angles_(std::move(angles)),
      intensities_(std::move(intensities)),
      unit_(unit),
      normalization_(normalization),
      provenance_(std::move(provenance)) {
  if (angles_.size() != intensities_.size() || angles_.size() < 3) {
    throw GridMismatchError(
        "DiffractionPattern: angles and intensities must have the same length (>= 3)");
  }
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    if (!std::isfinite(angles_[i]) || !std::isfinite(intensities_[i]) ||
        intensities_[i] < 0.0) {
      std::ostringstream msg;
      msg << "DiffractionPattern: invalid sample " << i;
      throw DomainError(msg.str());
    }
    if (i > 0 && !(angles_[i] > angles_[i - 1])) {
      throw DomainError("DiffractionPattern: angles must be strictly increasing");
    }
  }
}

double DiffractionPattern::area() const {
  return trapezoid(angles_, intensities_);
}

double DiffractionPattern::peak() const {
  return *std::max_element(intensities_.begin(), intensities_.end());
}

DiffractionPattern DiffractionPattern::normalized(PatternNorm target) const {
  double scale = 1.0;
  if (target == PatternNorm::unit_peak) {
    scale = peak();
  } else if (target == PatternNorm::unit_area) {
    scale = area();
  }
  if (!(scale > 0.0)) throw DegenerateError("DiffractionPattern: cannot normalise a zero pattern");
  std::vector<double> out(intensities_);
  for (auto& v : out) v /= scale;
  return DiffractionPattern(angles_, std::move(out), unit_, target, provenance_);
}

DiffractionPattern DiffractionPattern::rescaled_angles(double factor,
                                                       AngleUnit unit) const {
  if (!(factor > 0.0)) throw DomainError("rescaled_angles: factor must be positive");
  std::vector<double> a(angles_);
  for (auto& v : a) v *= factor;
  return DiffractionPattern(std::move(a), intensities_, unit, normalization_,
                            provenance_);
}

DiffractionPattern analytic_pattern(const analytic::FluxStrength& flux,
                                    const analytic::ParaxialBeam& beam,
                                    double theta_max, std::size_t n) {
  if (!(theta_max > 0.0) || n < 3) {
    throw DomainError("analytic_pattern: need theta_max > 0 and n >= 3");
  }
  std::vector<double> theta(n);
  std::vector<double> I(n);
  const double step = 2.0 * theta_max / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = -theta_max + static_cast<double>(i) * step;
    I[i] = analytic::intensity(flux, theta[i], beam);
  }
  return DiffractionPattern(std::move(theta), std::move(I), AngleUnit::radian,
                            PatternNorm::raw, "analytic");
}

DiffractionPattern far_field_pattern(const WaveField1D& field, double distance,
                                     std::string provenance) {
  if (!(distance > 0.0)) throw DomainError("far_field_pattern: distance must be positive");
  std::vector<double> theta(field.size());
  std::vector<double> I(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    theta[i] = field.grid().coordinate(i) / distance;
    I[i] = std::norm(field[i]);
  }
  return DiffractionPattern(std::move(theta), std::move(I), AngleUnit::radian,
                            PatternNorm::raw, std::move(provenance));
}

DiffractionPattern far_field_profile(const WaveField2D& field, double distance,
                                     ProfileMode mode, std::string provenance) {
  if (!(distance > 0.0)) throw DomainError("far_field_profile: distance must be positive");
  const auto& g = field.grid();
  std::size_t centre_x = 0;
  double best = std::abs(g.x().coordinate(0));
  for (std::size_t ix = 1; ix < g.nx(); ++ix) {
    if (std::abs(g.x().coordinate(ix)) < best) {
      best = std::abs(g.x().coordinate(ix));
      centre_x = ix;
    }
  }
  const double dtheta_x = g.x().spacing() / distance;
  std::vector<double> theta;
  std::vector<double> I;
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    if (!g.y().mirror_index(iy)) continue;
    double value = 0.0;
    if (mode == ProfileMode::projection) {
      for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        value += std::norm(field[g.index(ix, iy)]);
      }
      value *= dtheta_x;
    } else {
      value = std::norm(field[g.index(centre_x, iy)]);
    }
    theta.push_back(g.y().coordinate(iy) / distance);
    I.push_back(value);
  }
  return DiffractionPattern(std::move(theta), std::move(I), AngleUnit::radian,
                            PatternNorm::raw, std::move(provenance));
}

double expectation_deflection(const DiffractionPattern& p) {
  const double total = checked_total(p, "expectation_deflection");
  const auto a = p.angles();
  const auto I = p.intensities();
  const auto w = trapezoid_weights(a);
  double first = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) first += w[i] * a[i] * I[i];
  return first / total;
}

double asymmetry_metric(const DiffractionPattern& p) {
  const auto a = p.angles();
  const auto I = p.intensities();
  if (!(a.front() < 0.0 && a.back() > 0.0)) {
    throw DomainError("asymmetry_metric: theta = 0 must lie inside the pattern");
  }
  const double total = checked_total(p, "asymmetry_metric");
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double x0 = a[i];
    const double x1 = a[i + 1];
    if (x0 >= 0.0) {
      pos += 0.5 * (I[i] + I[i + 1]) * (x1 - x0);
    } else if (x1 <= 0.0) {
      neg += 0.5 * (I[i] + I[i + 1]) * (x1 - x0);
    } else {
      const double t = -x0 / (x1 - x0);
      const double i0 = I[i] + t * (I[i + 1] - I[i]);
      neg += 0.5 * (I[i] + i0) * (-x0);
      pos += 0.5 * (i0 + I[i + 1]) * x1;
    }
  }
  return (pos - neg) / total;
}

QuantumPotentialProfile quantum_potential(const WaveField1D& field,
                                          double mass, double beta) {
  using wavefield::Provenance;
  if (field.provenance() == Provenance::step_state ||
      field.provenance() == Provenance::aperture_state) {
    std::ostringstream msg;
    msg << "quantum_potential: field provenance is '"
        << wavefield::to_string(field.provenance())
        << "'; the phase discontinuity must be propagated away first";
    throw SmoothnessError(msg.str());
  }
  if (!(mass > 0.0)) throw DomainError("quantum_potential: mass must be positive");
  if (beta < 0.0) throw DomainError("quantum_potential: beta must be >= 0");

  const auto& g = field.grid();
  const std::size_t n = g.size();
  QuantumPotentialProfile out;
  out.y.resize(n);
  out.R.resize(n);
  out.Q.assign(n, 0.0);
  out.masked.assign(n, false);
  const double hbar = constants::hbar;
  if (beta > 0.0) {
    out.unit = PotentialUnit::beta_scaled;
    out.unit_scale = hbar * hbar / (2.0 * mass * beta * beta);
  }
  double r_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.y[i] = g.coordinate(i);
    out.R[i] = std::abs(field[i]);
    r_max = std::max(r_max, out.R[i]);
  }
  if (!(r_max > 0.0)) throw DegenerateError("quantum_potential: field is identically zero");
  const double h = g.spacing();
  const double prefactor = -hbar * hbar / (2.0 * mass) / out.unit_scale;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || i + 1 == n || out.R[i] < 1e-6 * r_max) {
      out.masked[i] = true;
      continue;
    }
    const double lap = (out.R[i + 1] - 2.0 * out.R[i] + out.R[i - 1]) / (h * h);
    out.Q[i] = prefactor * lap / out.R[i];
  }
  return out;
}

QuantumForceMoment quantum_force_moment(const QuantumPotentialProfile& profile,
                                        std::span<const double> weight) {
  const std::size_t n = profile.size();
  if (weight.size() != n) {
    throw GridMismatchError("quantum_force_moment: weight length differs from profile");
  }
  double total_weight = 0.0;
  for (double w : weight) total_weight += w;
  if (!(total_weight > 0.0)) throw DegenerateError("quantum_force_moment: zero weight");

  // Restrict to samples whose mirror image exists and is unmasked too, so
  // the integration domain is symmetric about the flux line.
  std::vector<bool> skip(profile.masked);
  if (n >= 2) {
    const double h = profile.y[1] - profile.y[0];
    for (std::size_t i = 0; i < n; ++i) {
      const double j = std::round((-profile.y[i] - profile.y[0]) / h);
      if (j < 0.0 || j > static_cast<double>(n - 1)) {
        skip[i] = true;
        continue;
      }
      const auto m = static_cast<std::size_t>(j);
      if (std::abs(profile.y[m] + profile.y[i]) > 1e-9 * std::abs(h) ||
          profile.masked[m]) {
        skip[i] = true;
      }
    }
  }

  QuantumForceMoment result{0.0, 0.0, 0.0, 0.0, 0.0};
  double used_weight = 0.0;
  std::size_t i = 0;
  while (i < n) {
    if (skip[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !skip[j]) ++j;
    if (j - i >= 3) {
      const std::span<const double> y(profile.y.data() + i, j - i);
      const std::span<const double> q(profile.Q.data() + i, j - i);
      const auto dq = derivative(y, q);
      std::vector<double> weighted(dq.size());
      std::vector<double> abs_dq(dq.size());
      std::vector<double> abs_weighted(dq.size());
      for (std::size_t m = 0; m < dq.size(); ++m) {
        weighted[m] = weight[i + m] * dq[m];
        abs_dq[m] = std::abs(dq[m]);
        abs_weighted[m] = std::abs(weighted[m]);
        used_weight += weight[i + m];
      }
      result.unweighted += trapezoid(y, dq);
      result.weighted += trapezoid(y, weighted);
      result.variation += trapezoid(y, abs_dq);
      result.weighted_variation += trapezoid(y, abs_weighted);
    }
    i = j;
  }
  result.coverage = used_weight / total_weight;
  if (result.coverage < 0.95) {
    std::ostringstream msg;
    msg << "quantum_force_moment: unmasked samples carry only "
        << 100.0 * result.coverage << "% of the weight (< 95%)";
    throw CoverageError(msg.str());
  }
  return result;
}

DiffractionPattern apply_partial_coherence(const DiffractionPattern& p,
                                           double source_rms) {
  if (!(source_rms >= 0.0) || !std::isfinite(source_rms)) {
    throw DomainError("apply_partial_coherence: source_rms must be >= 0");
  }
  std::ostringstream tag;
  tag << p.provenance() << " + gaussian source (rms " << source_rms << " "
      << to_string(p.unit()) << ")";
  const auto a = p.angles();
  const auto I = p.intensities();
  const std::size_t n = a.size();
  if (source_rms == 0.0) {
    return DiffractionPattern({a.begin(), a.end()}, {I.begin(), I.end()},
                              p.unit(), p.normalization(), tag.str());
  }

  const double threshold = 1e-3 * p.peak();
  std::size_t lo = 0;
  while (lo < n && I[lo] < threshold) ++lo;
  std::size_t hi = n - 1;
  while (hi > 0 && I[hi] < threshold) --hi;
  const double margin = std::min(a[lo] - a.front(), a.back() - a[hi]);
  if (margin < 5.0 * source_rms) {
    std::ostringstream msg;
    msg << "apply_partial_coherence: pattern margin " << margin
        << " is below 5 * source_rms = " << 5.0 * source_rms;
    throw MarginError(msg.str());
  }

  const auto w = trapezoid_weights(a);
  const double reach = 8.0 * source_rms;
  const double inv2s2 = 1.0 / (2.0 * source_rms * source_rms);
  std::vector<double> out(n, 0.0);
  std::vector<double> kernel;
  for (std::size_t j = 0; j < n; ++j) {
    if (I[j] == 0.0) continue;
    const auto first = static_cast<std::size_t>(
        std::lower_bound(a.begin(), a.end(), a[j] - reach) - a.begin());
    const auto last = static_cast<std::size_t>(
        std::upper_bound(a.begin(), a.end(), a[j] + reach) - a.begin());
    kernel.assign(last - first, 0.0);
    double z = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      const double d = a[i] - a[j];
      kernel[i - first] = std::exp(-d * d * inv2s2);
      z += kernel[i - first] * w[i];
    }
    const double mass = I[j] * w[j] / z;
    for (std::size_t i = first; i < last; ++i) {
      out[i] += mass * kernel[i - first];
    }
  }
  return DiffractionPattern({a.begin(), a.end()}, std::move(out), p.unit(),
                            p.normalization(), tag.str());
}

MomentumSpectrum::MomentumSpectrum(std::vector<double> k,
                                   std::vector<Complex> amplitude, double dk)
    : k_(std::move(k)), amplitude_(std::move(amplitude)), dk_(dk) {
  if (k_.size() != amplitude_.size() || k_.empty()) {
    throw GridMismatchError("MomentumSpectrum: k and amplitude lengths differ");
  }
  if (!(dk_ > 0.0)) throw DomainError("MomentumSpectrum: dk must be positive");
}

double MomentumSpectrum::magnitude(std::size_t i) const {
  return std::abs(amplitude_[i]);
}

double MomentumSpectrum::phase(std::size_t i) const {
  return std::arg(amplitude_[i]);
}

double MomentumSpectrum::total_probability() const {
  double sum = 0.0;
  for (const auto& v : amplitude_) sum += std::norm(v);
  return sum * dk_;
}

MomentumSpectrum momentum_spectrum(const WaveField1D& field) {
  const auto& g = field.grid();
  const std::size_t n = g.size();
  std::vector<Complex> data(field.values().begin(), field.values().end());
  detail::fft_forward(data);
  const double dk = 2.0 * std::numbers::pi / g.extent();
  const double scale = g.spacing() / std::sqrt(2.0 * std::numbers::pi);
  std::vector<double> k(n);
  std::vector<Complex> amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long m = static_cast<long>(i) - static_cast<long>(n / 2);
    const auto bin = static_cast<std::size_t>((m + static_cast<long>(n)) %
                                              static_cast<long>(n));
    k[i] = static_cast<double>(m) * dk;
    amp[i] = scale * data[bin] * std::polar(1.0, -k[i] * g.origin());
  }
  return MomentumSpectrum(std::move(k), std::move(amp), dk);
}

PhaseOnlyResult phase_only_test(const MomentumSpectrum& before,
                                const MomentumSpectrum& after) {
  if (before.size() != after.size()) {
    throw GridMismatchError("phase_only_test: spectra have different lengths");
  }
  double k_scale = 0.0;
  double max_before = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    k_scale = std::max(k_scale, std::abs(before.k()[i]));
    max_before = std::max(max_before, before.magnitude(i));
  }
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (std::abs(before.k()[i] - after.k()[i]) > 1e-12 * k_scale) {
      throw GridMismatchError("phase_only_test: spectra use different k grids");
    }
  }
  if (!(max_before > 0.0)) throw DegenerateError("phase_only_test: reference spectrum is zero");
  double deviation = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    deviation = std::max(deviation,
                         std::abs(after.magnitude(i) - before.magnitude(i)));
  }
  deviation /= max_before;
  return {deviation < 1e-6, deviation};
}

double zeilinger_dispersion_term(std::span<const double> k,
                                 std::span<const double> weight,
                                 std::span<const double> delta) {
  if (k.size() != weight.size() || k.size() != delta.size() || k.size() < 3) {
    throw GridMismatchError(
        "zeilinger_dispersion_term: k, weight and delta must share one grid (>= 3 samples)");
  }
  double sum_w = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i > 0 && !(k[i] > k[i - 1])) {
      throw DomainError("zeilinger_dispersion_term: k must be strictly increasing");
    }
    sum_w += weight[i];
  }
  if (std::abs(sum_w - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "zeilinger_dispersion_term: weights sum to " << sum_w << ", not 1";
    throw DomainError(msg.str());
  }
  const auto d = derivative(k, delta);
  double term = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) term += weight[i] * d[i];
  return term;
}

}  // namespace abwave::analysis
