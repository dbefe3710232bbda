#include "abwave/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "abwave/detail/fft.hpp"
#include "abwave/detail/parallel.hpp"
#include "abwave/errors.hpp"

namespace abwave::propagator {

using wavefield::Complex;
using wavefield::Provenance;

const char* to_string(KernelPhase k) {
  return k == KernelPhase::two_pi ? "two_pi" : "pi";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::near:
      return "near";
    case Regime::far:
      return "far";
    case Regime::automatic:
      return "auto";
  }
  return "?";
}

double kernel_wavenumber(double lambda_db, KernelPhase kernel) {
  if (!(lambda_db > 0.0)) throw DomainError("kernel_wavenumber: lambda must be positive");
  const double factor = kernel == KernelPhase::two_pi ? 2.0 : 1.0;
  return factor * std::numbers::pi / lambda_db;
}

namespace {

constexpr double kFraunhoferLimit = 0.1;
constexpr std::size_t kPairwiseBlock = 16;

struct Sum {
  double re = 0.0;
  double im = 0.0;
};

// Cascade summation of term(lo) ... term(hi - 1), fixed tree for a given
// range length.
template <class Term>
Sum pairwise(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= kPairwiseBlock) {
    Sum s;
    for (std::size_t j = lo; j < hi; ++j) {
      const Sum t = term(j);
      s.re += t.re;
      s.im += t.im;
    }
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const Sum a = pairwise(lo, mid, term);
  const Sum b = pairwise(mid, hi, term);
  return {a.re + b.re, a.im + b.im};
}

void require_distance(double distance) {
  if (!(distance > 0.0) || !std::isfinite(distance)) {
    std::ostringstream msg;
    msg << "propagation distance must be positive (got " << distance << " m)";
    throw DomainError(msg.str());
  }
}

// l - L computed without cancellation.
inline double path_excess(double d2, double distance) {
  return d2 / (std::sqrt(distance * distance + d2) + distance);
}

double axis_phase_step(const Grid1D& source, const Grid1D& target,
                       double distance, double k) {
  const double d = std::max(std::abs(target.last() - source.first()),
                            std::abs(target.first() - source.last()));
  const double sin_theta = d / std::hypot(distance, d);
  return k * sin_theta * source.spacing();
}

std::string aliasing_detail(const char* axis, const Grid1D& source,
                            const Grid1D& target, double step) {
  std::ostringstream msg;
  msg << axis << ": source extent " << source.extent() << " m with "
      << source.size() << " samples (spacing " << source.spacing()
      << " m) gives a phase step of " << step
      << " rad between neighbouring samples at the extreme target point "
      << std::max(std::abs(target.first()), std::abs(target.last()))
      << " m";
  if (step > std::numbers::pi) {
    const double needed =
        std::ceil(static_cast<double>(source.size()) * step / std::numbers::pi);
    msg << "; needs at least " << static_cast<long long>(needed)
        << " samples over the same extent";
  }
  return msg.str();
}

template <class Grid>
double support_radius_sq(const WaveField<Grid>& field);

template <>
double support_radius_sq(const WaveField1D& field) {
  const double peak = field.peak_amplitude();
  double r2 = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (std::norm(field[i]) >= 1e-12 * peak * peak) {
      const double y = field.grid().coordinate(i);
      r2 = std::max(r2, y * y);
    }
  }
  return r2;
}

template <>
double support_radius_sq(const WaveField2D& field) {
  const double peak = field.peak_amplitude();
  const auto& g = field.grid();
  double r2 = 0.0;
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    const double y = g.y().coordinate(iy);
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      if (std::norm(field[g.index(ix, iy)]) >= 1e-12 * peak * peak) {
        const double x = g.x().coordinate(ix);
        r2 = std::max(r2, x * x + y * y);
      }
    }
  }
  return r2;
}

// Source scale and output prefactor for the requested convention.
struct Normalisation {
  double source_scale = 1.0;
  Complex prefactor{1.0, 0.0};
  std::string description;
};

template <class Grid>
Normalisation normalisation_for(const WaveField<Grid>& source,
                                const PropagationOptions& options, double k,
                                double distance, int dims) {
  Normalisation n;
  const double cell = source.grid().cell_measure();
  if (options.norm == NormConvention::unit_total_probability) {
    const double p = source.total_probability();
    if (!(p > 0.0)) throw DegenerateError("propagate: source field is identically zero");
    n.source_scale = 1.0 / std::sqrt(p);
    const double lambda_eff = 2.0 * std::numbers::pi / k;
    // (i lambda L)^(-dims/2)
    const double mag = std::pow(lambda_eff * distance, -0.5 * dims);
    n.prefactor = std::polar(mag * cell, -0.25 * std::numbers::pi * dims);
    n.description =
        "source scaled to unit probability; N = (i lambda L)^(-d/2) * dA "
        "(unitary paraxial kernel)";
  } else {
    n.prefactor = Complex(cell, 0.0);
    n.description = "N = dA (raw path sum)";
  }
  return n;
}

template <class Grid>
PropagationResult<Grid> finish(const Grid& target, std::vector<Complex> values,
                               const PropagationOptions& options,
                               Normalisation norm, double fresnel,
                               KernelPhase kernel, const char* route) {
  WaveField<Grid> field(target, std::move(values), NormConvention::raw,
                        Provenance::propagated);
  const double captured = field.total_probability();
  if (options.norm == NormConvention::unit_peak) {
    field = field.normalized(NormConvention::unit_peak);
    norm.description += "; rescaled to unit peak";
  }
  return PropagationResult<Grid>{std::move(field), norm.description, fresnel,
                                 captured, kernel, route};
}

}  // namespace

double fresnel_number(const WaveField1D& source, double distance,
                      double lambda_db, KernelPhase kernel) {
  require_distance(distance);
  const double lambda_eff = 2.0 * std::numbers::pi / kernel_wavenumber(lambda_db, kernel);
  return support_radius_sq(source) / (lambda_eff * distance);
}

double fresnel_number(const WaveField2D& source, double distance,
                      double lambda_db, KernelPhase kernel) {
  require_distance(distance);
  const double lambda_eff = 2.0 * std::numbers::pi / kernel_wavenumber(lambda_db, kernel);
  return support_radius_sq(source) / (lambda_eff * distance);
}

AliasingReport check_aliasing(const Grid1D& source,
                              const PropagationGeometry<Grid1D>& geom,
                              double lambda_db) {
  require_distance(geom.distance);
  const double k = kernel_wavenumber(lambda_db, geom.kernel);
  const double step = axis_phase_step(source, geom.target_grid, geom.distance, k);
  return {step, step <= std::numbers::pi,
          aliasing_detail("y", source, geom.target_grid, step)};
}

AliasingReport check_aliasing(const Grid2D& source,
                              const PropagationGeometry<Grid2D>& geom,
                              double lambda_db) {
  require_distance(geom.distance);
  const double k = kernel_wavenumber(lambda_db, geom.kernel);
  const double sx =
      axis_phase_step(source.x(), geom.target_grid.x(), geom.distance, k);
  const double sy =
      axis_phase_step(source.y(), geom.target_grid.y(), geom.distance, k);
  const bool x_worse = sx >= sy;
  const double step = std::max(sx, sy);
  return {step, step <= std::numbers::pi,
          x_worse ? aliasing_detail("x", source.x(), geom.target_grid.x(), sx)
                  : aliasing_detail("y", source.y(), geom.target_grid.y(), sy)};
}

PropagationResult1D propagate_direct(const WaveField1D& source,
                                     const PropagationGeometry<Grid1D>& geom,
                                     double lambda_db,
                                     const PropagationOptions& options) {
  const auto alias = check_aliasing(source.grid(), geom, lambda_db);
  if (!alias.ok) throw AliasingError("propagate_direct: aliasing, " + alias.detail);
  const double k = kernel_wavenumber(lambda_db, geom.kernel);
  const double L = geom.distance;
  const auto norm = normalisation_for(source, options, k, L, 1);

  std::vector<double> ys;
  std::vector<double> re;
  std::vector<double> im;
  for (std::size_t j = 0; j < source.size(); ++j) {
    const Complex v = source[j] * norm.source_scale;
    if (v == Complex(0.0, 0.0)) continue;
    ys.push_back(source.grid().coordinate(j));
    re.push_back(v.real());
    im.push_back(v.imag());
  }

  const Grid1D& target = geom.target_grid;
  std::vector<Complex> out(target.size());
  detail::parallel_for(target.size(), options.threads,
                       [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = target.coordinate(i);
      const auto term = [&](std::size_t j) {
        const double d = x - ys[j];
        const double phase = k * path_excess(d * d, L);
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        return Sum{re[j] * c - im[j] * s, re[j] * s + im[j] * c};
      };
      const Sum total = pairwise(0, ys.size(), term);
      out[i] = norm.prefactor * Complex(total.re, total.im);
    }
  });
  const double fresnel = fresnel_number(source, L, lambda_db, geom.kernel);
  return finish(target, std::move(out), options, norm, fresnel, geom.kernel,
                "direct");
}

PropagationResult2D propagate_direct(const WaveField2D& source,
                                     const PropagationGeometry<Grid2D>& geom,
                                     double lambda_db,
                                     const PropagationOptions& options) {
  const auto alias = check_aliasing(source.grid(), geom, lambda_db);
  if (!alias.ok) throw AliasingError("propagate_direct: aliasing, " + alias.detail);
  const double k = kernel_wavenumber(lambda_db, geom.kernel);
  const double L = geom.distance;
  const auto norm = normalisation_for(source, options, k, L, 2);

  const auto& sg = source.grid();
  std::vector<double> xs, ys, re, im;
  for (std::size_t iy = 0; iy < sg.ny(); ++iy) {
    for (std::size_t ix = 0; ix < sg.nx(); ++ix) {
      const Complex v = source[sg.index(ix, iy)] * norm.source_scale;
      if (v == Complex(0.0, 0.0)) continue;
      xs.push_back(sg.x().coordinate(ix));
      ys.push_back(sg.y().coordinate(iy));
      re.push_back(v.real());
      im.push_back(v.imag());
    }
  }

  const Grid2D& target = geom.target_grid;
  std::vector<Complex> out(target.size());
  detail::parallel_for(target.size(), options.threads,
                       [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = target.x().coordinate(i % target.nx());
      const double y = target.y().coordinate(i / target.nx());
      const auto term = [&](std::size_t j) {
        const double dx = x - xs[j];
        const double dy = y - ys[j];
        const double phase = k * path_excess(dx * dx + dy * dy, L);
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        return Sum{re[j] * c - im[j] * s, re[j] * s + im[j] * c};
      };
      const Sum total = pairwise(0, xs.size(), term);
      out[i] = norm.prefactor * Complex(total.re, total.im);
    }
  });
  const double fresnel = fresnel_number(source, L, lambda_db, geom.kernel);
  return finish(target, std::move(out), options, norm, fresnel, geom.kernel,
                "direct");
}

Grid1D fraunhofer_grid(const Grid1D& source, double distance, double lambda_db,
                       KernelPhase kernel) {
  require_distance(distance);
  const double lambda_eff = 2.0 * std::numbers::pi / kernel_wavenumber(lambda_db, kernel);
  const double step = lambda_eff * distance / source.extent();
  const auto n = source.size();
  return Grid1D(n, step * static_cast<double>(n),
                -step * static_cast<double>(n / 2));
}

Grid2D fraunhofer_grid(const Grid2D& source, double distance, double lambda_db,
                       KernelPhase kernel) {
  return Grid2D(fraunhofer_grid(source.x(), distance, lambda_db, kernel),
                fraunhofer_grid(source.y(), distance, lambda_db, kernel));
}

namespace {

template <class Grid>
void require_fraunhofer(const WaveField<Grid>& source, const Grid& target,
                        const Grid& natural, double fresnel) {
  if (!(fresnel < kFraunhoferLimit)) {
    std::ostringstream msg;
    msg << "propagate_fraunhofer: Fresnel number " << fresnel
        << " is not below " << kFraunhoferLimit
        << "; use direct summation or a longer distance";
    throw RegimeError(msg.str());
  }
  if (!target.same_as(natural)) {
    throw GridMismatchError(
        "propagate_fraunhofer: target grid must equal fraunhofer_grid(source)");
  }
  (void)source;
}

// exp(-2 pi i m origin / extent) for the signed bin m.
inline double origin_phase(long m, const Grid1D& g) {
  return -2.0 * std::numbers::pi * static_cast<double>(m) * g.origin() /
         g.extent();
}

}  // namespace

PropagationResult1D propagate_fraunhofer(const WaveField1D& source,
                                         const PropagationGeometry<Grid1D>& geom,
                                         double lambda_db,
                                         const PropagationOptions& options) {
  const double L = geom.distance;
  const double fresnel = fresnel_number(source, L, lambda_db, geom.kernel);
  const auto natural = fraunhofer_grid(source.grid(), L, lambda_db, geom.kernel);
  require_fraunhofer(source, geom.target_grid, natural, fresnel);
  const double k = kernel_wavenumber(lambda_db, geom.kernel);
  const auto norm = normalisation_for(source, options, k, L, 1);

  const std::size_t n = source.size();
  std::vector<Complex> data(source.values().begin(), source.values().end());
  for (auto& v : data) v *= norm.source_scale;
  detail::fft_forward(data);

  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long m = static_cast<long>(i) - static_cast<long>(n / 2);
    const auto bin = static_cast<std::size_t>((m + static_cast<long>(n)) %
                                              static_cast<long>(n));
    const double x = natural.coordinate(i);
    const double phase = origin_phase(m, source.grid()) + k * x * x / (2.0 * L);
    out[i] = norm.prefactor * data[bin] * std::polar(1.0, phase);
  }
  return finish(natural, std::move(out), options, norm, fresnel, geom.kernel,
                "fraunhofer");
}

PropagationResult2D propagate_fraunhofer(const WaveField2D& source,
                                         const PropagationGeometry<Grid2D>& geom,
                                         double lambda_db,
                                         const PropagationOptions& options) {
  const double L = geom.distance;
  const double fresnel = fresnel_number(source, L, lambda_db, geom.kernel);
  const auto natural = fraunhofer_grid(source.grid(), L, lambda_db, geom.kernel);
  require_fraunhofer(source, geom.target_grid, natural, fresnel);
  const double k = kernel_wavenumber(lambda_db, geom.kernel);
  const auto norm = normalisation_for(source, options, k, L, 2);

  const auto& sg = source.grid();
  const std::size_t nx = sg.nx();
  const std::size_t ny = sg.ny();
  std::vector<Complex> data(source.values().begin(), source.values().end());
  for (auto& v : data) v *= norm.source_scale;
  detail::fft_forward_2d(data, nx, ny);

  std::vector<Complex> out(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const long my = static_cast<long>(iy) - static_cast<long>(ny / 2);
    const auto by = static_cast<std::size_t>((my + static_cast<long>(ny)) %
                                             static_cast<long>(ny));
    const double y = natural.y().coordinate(iy);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const long mx = static_cast<long>(ix) - static_cast<long>(nx / 2);
      const auto bx = static_cast<std::size_t>((mx + static_cast<long>(nx)) %
                                               static_cast<long>(nx));
      const double x = natural.x().coordinate(ix);
      const double phase = origin_phase(mx, sg.x()) + origin_phase(my, sg.y()) +
                           k * (x * x + y * y) / (2.0 * L);
      out[natural.index(ix, iy)] =
          norm.prefactor * data[by * nx + bx] * std::polar(1.0, phase);
    }
  }
  return finish(natural, std::move(out), options, norm, fresnel, geom.kernel,
                "fraunhofer");
}

PropagationResult1D propagate_near(const WaveField1D& source, double fraction,
                                   double total_distance,
                                   const Grid1D& target_grid, double lambda_db,
                                   KernelPhase kernel,
                                   const PropagationOptions& options) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    std::ostringstream msg;
    msg << "propagate_near: fraction must lie in (0, 1] (got " << fraction << ")";
    throw DomainError(msg.str());
  }
  require_distance(total_distance);
  PropagationGeometry<Grid1D> geom{fraction * total_distance, target_grid,
                                   Regime::near, kernel};
  return propagate_direct(source, geom, lambda_db, options);
}

PropagationResult1D propagate(const WaveField1D& source,
                              const PropagationGeometry<Grid1D>& geom,
                              double lambda_db,
                              const PropagationOptions& options) {
  if (geom.regime_hint == Regime::far) {
    return propagate_fraunhofer(source, geom, lambda_db, options);
  }
  return propagate_direct(source, geom, lambda_db, options);
}

PropagationResult2D propagate(const WaveField2D& source,
                              const PropagationGeometry<Grid2D>& geom,
                              double lambda_db,
                              const PropagationOptions& options) {
  switch (geom.regime_hint) {
    case Regime::far:
      return propagate_fraunhofer(source, geom, lambda_db, options);
    case Regime::near:
      return propagate_direct(source, geom, lambda_db, options);
    case Regime::automatic:
      break;
  }
  const auto natural =
      fraunhofer_grid(source.grid(), geom.distance, lambda_db, geom.kernel);
  if (geom.target_grid.same_as(natural) &&
      fresnel_number(source, geom.distance, lambda_db, geom.kernel) <
          kFraunhoferLimit) {
    return propagate_fraunhofer(source, geom, lambda_db, options);
  }
  return propagate_direct(source, geom, lambda_db, options);
}

}  // namespace abwave::propagator
