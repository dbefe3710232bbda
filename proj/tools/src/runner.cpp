#include "abwave/tools/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "abwave/analysis.hpp"
#include "abwave/analytic.hpp"
#include "abwave/constants.hpp"
#include "abwave/detail/parallel.hpp"
#include "abwave/errors.hpp"
#include "abwave/propagator.hpp"
#include "abwave/tools/errors.hpp"
#include "abwave/wavefield.hpp"

#ifndef ABWAVE_VERSION
#define ABWAVE_VERSION "0.0.0"
#endif

namespace abwave::tools {

using analysis::AngleUnit;
using analysis::DiffractionPattern;
using analysis::PatternNorm;
using analytic::FluxStrength;
using analytic::ParaxialBeam;
using nlohmann::json;
using propagator::KernelPhase;
using propagator::PropagationGeometry;
using propagator::PropagationOptions;
using propagator::Regime;
using wavefield::BeamParams;
using wavefield::Grid1D;
using wavefield::Grid2D;
using wavefield::NormConvention;

std::string software_version() { return ABWAVE_VERSION; }

namespace {

std::string unit_name(const ScenarioConfig& c) { return analysis::to_string(c.angle_unit); }

/// Multiplier taking physical radians to the configured angle unit.
double angle_factor(AngleUnit unit, double w) {
  switch (unit) {
    case AngleUnit::radian: return 1.0;
    case AngleUnit::milliradian: return 1e3;
    case AngleUnit::scaled: return w;
  }
  return 1.0;
}

Regime regime_for(RouteChoice r) {
  switch (r) {
    case RouteChoice::direct: return Regime::near;
    case RouteChoice::fraunhofer: return Regime::far;
    case RouteChoice::automatic: return Regime::automatic;
  }
  return Regime::automatic;
}

std::vector<double> peak_normalized(const DiffractionPattern& p) {
  const auto q = p.normalized(PatternNorm::unit_peak);
  return {q.intensities().begin(), q.intensities().end()};
}

PatternSummary summarize(const DiffractionPattern& p, std::optional<double> formula) {
  PatternSummary s;
  s.deflection_formula = formula;
  try {
    s.expectation_deflection = analysis::expectation_deflection(p);
  } catch (const abwave::Error& e) {
    s.notes.push_back(e.what());
  }
  try {
    s.asymmetry_metric = analysis::asymmetry_metric(p);
  } catch (const abwave::Error& e) {
    s.notes.push_back(e.what());
  }
  return s;
}

json summary_json(const PatternSummary& s) {
  json j;
  j["expectation_deflection"] = s.expectation_deflection ? json(*s.expectation_deflection) : json();
  j["asymmetry_metric"] = s.asymmetry_metric ? json(*s.asymmetry_metric) : json();
  j["deflection_formula"] = s.deflection_formula ? json(*s.deflection_formula) : json();
  if (!s.notes.empty()) j["notes"] = s.notes;
  return j;
}

/// Lowest sample between the strongest maximum on each side of theta = 0.
std::optional<double> central_dip(std::span<const double> theta, std::span<const double> I) {
  std::optional<std::size_t> neg, pos;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i] < 0.0 && (!neg || I[i] > I[*neg])) neg = i;
    if (theta[i] > 0.0 && (!pos || I[i] > I[*pos])) pos = i;
  }
  if (!neg || !pos) return std::nullopt;
  double lowest = I[*neg];
  for (std::size_t i = *neg; i <= *pos; ++i) lowest = std::min(lowest, I[i]);
  return lowest;
}

void add_common_conventions(const ScenarioConfig& c, Computation& out) {
  out.conventions["kernel_phase_factor"] = propagator::to_string(c.kernel);
  out.conventions["angle_unit"] = unit_name(c);
  out.conventions["flux_sign"] =
      "alpha = -e Phi / h; for 0 < alpha < 1/2 the theta > 0 side is enhanced";
}

Computation compute_analytic(const ScenarioConfig& c) {
  Computation out;
  add_common_conventions(c, out);
  const FluxStrength flux(c.flux_alpha());
  const auto beam = BeamParams::from_energy(c.energy_ev, c.beta);
  const bool scaled = c.angle_unit == AngleUnit::scaled;
  const double w = scaled ? 1.0 : beam.paraxial_w();
  const double factor = angle_factor(c.angle_unit, w);
  auto pattern = analysis::analytic_pattern(flux, ParaxialBeam(w), c.theta_max / factor,
                                            c.target_samples);
  if (factor != 1.0) pattern = pattern.rescaled_angles(factor, c.angle_unit);

  const std::string u = unit_name(c);
  out.table.add_numeric("theta(" + u + ")", {pattern.angles().begin(), pattern.angles().end()});
  out.table.add_numeric("I_analytic(peak=1)", peak_normalized(pattern));
  out.plot = PlotSpec{c.name + ": paraxial intensity, alpha = " + format_double(flux.alpha()),
                      "theta", {"I_analytic"}, "", c.name + ".csv"};
  out.summary = summarize(pattern, analytic::deflection_formula(flux, ParaxialBeam(w)) * factor);
  out.conventions["pattern_normalization"] = "unit_peak";
  out.diagnostics["paraxial_w"] = w;
  out.diagnostics["physical_w"] = beam.paraxial_w();
  return out;
}

struct SourceSetup {
  Grid1D grid;
  BeamParams beam;
};

SourceSetup source_1d(const ScenarioConfig& c) {
  return {Grid1D::centered(c.source_samples, c.source_extent.value_or(12.0 * c.beta)),
          BeamParams::from_energy(c.energy_ev, c.beta)};
}

Grid1D far_target_1d(const ScenarioConfig& c, double theta_phys_max) {
  const std::size_t n = c.target_samples;
  const double half = c.distance * theta_phys_max;
  const double step = 2.0 * half / static_cast<double>(n - 1);
  return Grid1D(n, step * static_cast<double>(n), -half);
}

Computation compute_far_1d(const ScenarioConfig& c, unsigned threads) {
  Computation out;
  add_common_conventions(c, out);
  const FluxStrength flux(c.flux_alpha());
  const auto [src_grid, beam] = source_1d(c);
  const double w = beam.paraxial_w();
  const double factor = angle_factor(c.angle_unit, w);
  const Grid1D target = far_target_1d(c, c.theta_max / factor);
  const PropagationGeometry<Grid1D> geom{c.distance, target, regime_for(c.route), c.kernel};
  const PropagationOptions opts{NormConvention::raw, threads};

  auto pattern_for = [&](double alpha, json& diag) {
    const auto src = wavefield::phase_step_state(src_grid, FluxStrength(alpha), c.beta);
    const auto res = propagator::propagate(src, geom, beam.lambda_db(), opts);
    diag["route"] = res.route;
    diag["fresnel_number"] = res.fresnel_number;
    auto p = analysis::far_field_pattern(res.field, c.distance, "path integral 1-D");
    if (factor != 1.0) p = p.rescaled_angles(factor, c.angle_unit);
    return p;
  };

  json& d = out.diagnostics;
  const auto alias = propagator::check_aliasing(src_grid, geom, beam.lambda_db());
  d["aliasing_max_phase_step"] = alias.max_phase_step;
  d["paraxial_w"] = w;
  d["lambda_db"] = beam.lambda_db();
  const auto src_probe = wavefield::phase_step_state(src_grid, flux, c.beta);
  d["source_edge_to_peak"] =
      std::max(std::abs(src_probe[0]), std::abs(src_probe[src_probe.size() - 1])) /
      src_probe.peak_amplitude();

  json mag_diag;
  const auto magnetized = pattern_for(flux.alpha(), mag_diag);
  d["route"] = mag_diag["route"];
  d["fresnel_number"] = mag_diag["fresnel_number"];

  const std::string u = unit_name(c);
  const auto angles = magnetized.angles();
  out.table.add_numeric("theta(" + u + ")", {angles.begin(), angles.end()});
  if (c.camera_length) {
    std::vector<double> x(angles.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = *c.camera_length * angles[i] / factor;
    out.table.add_numeric("x_detector(m)", std::move(x));
  }

  std::vector<std::string> plotted;
  if (c.compare_analytic) {
    std::vector<double> I(angles.size());
    const bool scaled = c.angle_unit == AngleUnit::scaled;
    const ParaxialBeam pb(scaled ? 1.0 : w);
    for (std::size_t i = 0; i < I.size(); ++i) {
      I[i] = analytic::intensity(flux, scaled ? angles[i] : angles[i] / factor, pb);
    }
    const DiffractionPattern an({angles.begin(), angles.end()}, std::move(I), c.angle_unit,
                                PatternNorm::raw, "analytic");
    const auto a = peak_normalized(an);
    const auto p = peak_normalized(magnetized);
    double linf = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] >= 0.01) linf = std::max(linf, std::abs(a[i] - p[i]));
    }
    d["linf_vs_analytic"] = linf;
    out.table.add_numeric("I_analytic(peak=1)", a);
    plotted.push_back("I_analytic");
  }

  DiffractionPattern main = magnetized;
  if (c.source_rms > 0.0) {
    main = analysis::apply_partial_coherence(magnetized, c.source_rms);
  }
  out.table.add_numeric("I_pathintegral(peak=1)", peak_normalized(main));
  plotted.push_back("I_pathintegral");
  if (c.source_rms > 0.0) {
    out.table.add_numeric("I_pathintegral_no_blur(peak=1)", peak_normalized(magnetized));
  }
  if (c.compare_demagnetized) {
    json demag_diag;
    auto demag = pattern_for(0.0, demag_diag);
    const auto demag_sharp = demag;
    if (c.source_rms > 0.0) demag = analysis::apply_partial_coherence(demag, c.source_rms);
    out.table.add_numeric("I_demagnetized(peak=1)", peak_normalized(demag));
    plotted.push_back("I_demagnetized");
    if (c.source_rms > 0.0) {
      out.table.add_numeric("I_demagnetized_no_blur(peak=1)", peak_normalized(demag_sharp));
    }
    d["demagnetized"] = summary_json(summarize(demag, std::nullopt));
  }

  out.plot = PlotSpec{c.name + ": far field, alpha = " + format_double(flux.alpha()), "theta",
                      plotted, "", c.name + ".csv"};
  out.summary = summarize(main, analytic::deflection_formula(flux, ParaxialBeam(w)) * factor);
  out.conventions["propagation_normalization"] = "raw";
  out.conventions["pattern_normalization"] = "unit_peak";
  out.conventions["angle"] = "theta = x / distance on the detector plane";
  if (c.kernel == KernelPhase::pi) {
    out.summary->notes.push_back(
        "kernel_phase_factor = pi doubles far-field angles; the formula column assumes two_pi");
  }
  return out;
}

Computation compute_quantum_potential(const ScenarioConfig& c, unsigned threads) {
  Computation out;
  add_common_conventions(c, out);
  const FluxStrength flux(c.flux_alpha());
  const auto [src_grid, beam] = source_1d(c);
  const double k = propagator::kernel_wavenumber(beam.lambda_db(), c.kernel);
  const double z = c.fraction * c.distance;
  const double rayleigh = 0.5 * k * c.beta * c.beta;
  const double width = c.beta * std::sqrt(1.0 + (z / rayleigh) * (z / rayleigh));
  const Grid1D target = Grid1D::centered(c.target_samples, c.target_extent.value_or(12.0 * width));
  const PropagationOptions opts{NormConvention::raw, threads};

  json& d = out.diagnostics;
  d["near_plane_distance"] = z;
  d["propagated_width"] = width;
  const PropagationGeometry<Grid1D> geom{z, target, Regime::near, c.kernel};
  d["aliasing_max_phase_step"] =
      propagator::check_aliasing(src_grid, geom, beam.lambda_db()).max_phase_step;

  struct Profile {
    analysis::QuantumPotentialProfile q;
    std::vector<double> weight;
    double residual;
  };
  auto profile_for = [&](double alpha) {
    const auto src = wavefield::phase_step_state(src_grid, FluxStrength(alpha), c.beta);
    const auto res = propagator::propagate_near(src, c.fraction, c.distance, target,
                                                beam.lambda_db(), c.kernel, opts);
    Profile p{analysis::quantum_potential(res.field, constants::electron_mass, c.beta), {}, 0.0};
    p.weight.resize(res.field.size());
    for (std::size_t i = 0; i < p.weight.size(); ++i) p.weight[i] = std::norm(res.field[i]);
    double qmax = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      if (p.q.masked[i]) continue;
      qmax = std::max(qmax, std::abs(p.q.Q[i]));
      const auto m = target.mirror_index(i);
      if (m && !p.q.masked[*m]) asym = std::max(asym, std::abs(p.q.Q[i] - p.q.Q[*m]));
    }
    p.residual = qmax > 0.0 ? asym / qmax : 0.0;
    return p;
  };

  const Profile mag = profile_for(flux.alpha());
  d["asymmetry_residual"] = mag.residual;
  try {
    const auto m = analysis::quantum_force_moment(mag.q, mag.weight);
    d["force_moment"] = {{"unweighted", m.unweighted},
                         {"weighted", m.weighted},
                         {"variation", m.variation},
                         {"weighted_variation", m.weighted_variation},
                         {"coverage", m.coverage}};
  } catch (const abwave::Error& e) {
    d["force_moment"] = {{"error", e.what()}};
  }
  d["deflection_formula_sign"] =
      analytic::deflection_formula(flux, beam.paraxial_beam()) > 0.0   ? 1
      : analytic::deflection_formula(flux, beam.paraxial_beam()) < 0.0 ? -1
                                                                       : 0;

  const std::size_t n = target.size();
  std::vector<double> y(n), yb(n), masked(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = mag.q.y[i];
    yb[i] = mag.q.y[i] / c.beta;
    masked[i] = mag.q.masked[i] ? 1.0 : 0.0;
  }
  out.table.add_numeric("y(m)", y);
  out.table.add_numeric("y(beta)", yb);
  out.table.add_numeric("R(arb)", mag.q.R);
  out.table.add_numeric("Q(hbar^2/(2 m beta^2))", mag.q.Q);
  std::vector<std::string> plotted{"Q"};
  if (c.compare_demagnetized) {
    const Profile demag = profile_for(0.0);
    d["demagnetized_asymmetry_residual"] = demag.residual;
    out.table.add_numeric("R_demagnetized(arb)", demag.q.R);
    out.table.add_numeric("Q_demagnetized(hbar^2/(2 m beta^2))", demag.q.Q);
    for (std::size_t i = 0; i < n; ++i) {
      if (demag.q.masked[i]) masked[i] = 1.0;
    }
    plotted.push_back("Q_demagnetized");
  }
  out.table.add_numeric("masked(1)", masked);
  out.plot = PlotSpec{c.name + ": quantum potential at " + format_double(c.fraction) +
                          " of the distance, alpha = " + format_double(flux.alpha()),
                      "y(beta)", plotted, "masked", c.name + ".csv"};
  out.conventions["potential_unit"] = "hbar^2 / (2 m beta^2), m = electron rest mass";
  out.conventions["mask"] = "boundary samples and R < 1e-6 max R; union over columns";
  return out;
}

Computation compute_2d(const ScenarioConfig& c, unsigned threads) {
  Computation out;
  add_common_conventions(c, out);
  const FluxStrength flux(c.flux_alpha());
  const double lambda = wavefield::de_broglie_wavelength(c.energy_ev);
  const Grid2D grid = Grid2D::centered(c.samples_2d, c.samples_2d, c.extent_2d, c.extent_2d);
  const Grid2D target = propagator::fraunhofer_grid(grid, c.distance, lambda, c.kernel);
  const PropagationGeometry<Grid2D> geom{c.distance, target, regime_for(c.route), c.kernel};
  const PropagationOptions opts{NormConvention::raw, threads};
  const double factor = angle_factor(c.angle_unit, 1.0);

  json& d = out.diagnostics;
  d["lambda_db"] = lambda;
  auto profile_for = [&](double alpha) {
    const wavefield::FluxBar bar{c.bar_width, FluxStrength(alpha),
                                 wavefield::BarOrientation::along_x};
    const auto src = wavefield::circular_aperture_state(grid, c.aperture_radius, bar);
    const auto res = propagator::propagate(src, geom, lambda, opts);
    d["route"] = res.route;
    d["fresnel_number"] = res.fresnel_number;
    auto p = analysis::far_field_profile(res.field, c.distance, c.profile, "path integral 2-D");
    if (factor != 1.0) p = p.rescaled_angles(factor, c.angle_unit);
    return p;
  };

  const auto mag_sharp = profile_for(flux.alpha());
  const auto mag = c.source_rms > 0.0 ? analysis::apply_partial_coherence(mag_sharp, c.source_rms)
                                      : mag_sharp;
  const std::string u = unit_name(c);
  const auto angles = mag.angles();
  out.table.add_numeric("theta(" + u + ")", {angles.begin(), angles.end()});
  if (c.camera_length) {
    std::vector<double> x(angles.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = *c.camera_length * angles[i] / factor;
    out.table.add_numeric("x_detector(m)", std::move(x));
  }
  const auto mag_norm = peak_normalized(mag);
  out.table.add_numeric("I_magnetized(peak=1)", mag_norm);
  std::vector<std::string> plotted{"I_magnetized"};

  auto dip_json = [&](const DiffractionPattern& p) {
    const auto v = peak_normalized(p);
    const auto dip = central_dip(p.angles(), v);
    return dip ? json(*dip) : json();
  };
  d["magnetized"] = summary_json(summarize(mag, std::nullopt));
  d["magnetized"]["central_dip"] = dip_json(mag);
  if (c.source_rms > 0.0) {
    d["magnetized_no_blur"] = summary_json(summarize(mag_sharp, std::nullopt));
    d["magnetized_no_blur"]["central_dip"] = dip_json(mag_sharp);
  }
  if (c.compare_demagnetized) {
    const auto demag_sharp = profile_for(0.0);
    const auto demag = c.source_rms > 0.0
                           ? analysis::apply_partial_coherence(demag_sharp, c.source_rms)
                           : demag_sharp;
    out.table.add_numeric("I_demagnetized(peak=1)", peak_normalized(demag));
    plotted.push_back("I_demagnetized");
    d["demagnetized"] = summary_json(summarize(demag, std::nullopt));
    if (c.source_rms > 0.0) {
      out.table.add_numeric("I_magnetized_no_blur(peak=1)", peak_normalized(mag_sharp));
      out.table.add_numeric("I_demagnetized_no_blur(peak=1)", peak_normalized(demag_sharp));
      d["demagnetized_no_blur"] = summary_json(summarize(demag_sharp, std::nullopt));
    }
  } else if (c.source_rms > 0.0) {
    out.table.add_numeric("I_magnetized_no_blur(peak=1)", peak_normalized(mag_sharp));
  }
  if (d.value("route", "") == "direct") {
    d["aliasing_max_phase_step"] = propagator::check_aliasing(grid, geom, lambda).max_phase_step;
  }

  out.plot = PlotSpec{c.name + ": far-field profile, alpha = " + format_double(flux.alpha()),
                      "theta", plotted, "", c.name + ".csv"};
  out.summary = summarize(mag, std::nullopt);
  out.summary->notes.push_back("no closed-form deflection for the finite bar and aperture");
  out.conventions["propagation_normalization"] = "raw";
  out.conventions["pattern_normalization"] = "unit_peak";
  out.conventions["profile"] = c.profile == analysis::ProfileMode::projection
                                   ? "projection: integrated over theta_x"
                                   : "central_line: theta_x = 0";
  out.conventions["bar_orientation"] = "bar along x; profile versus theta_y";
  out.conventions["detector_axis"] =
      c.camera_length ? "angle plus x_detector = camera_length * theta" : "angle only";
  return out;
}

json constants_json(const ScenarioConfig& c) {
  json j;
  j["planck_J_s"] = constants::planck;
  j["hbar_J_s"] = constants::hbar;
  j["elementary_charge_C"] = constants::elementary_charge;
  j["electron_mass_kg"] = constants::electron_mass;
  j["speed_of_light_m_s"] = constants::speed_of_light;
  const double lambda = wavefield::de_broglie_wavelength(c.energy_ev);
  j["lambda_db_m"] = lambda;
  j["kernel_wavenumber_per_m"] = propagator::kernel_wavenumber(lambda, c.kernel);
  if (c.beta > 0.0) {
    j["paraxial_w"] = BeamParams::from_energy(c.energy_ev, c.beta).paraxial_w();
  }
  return j;
}

json config_json(const ScenarioConfig& c) {
  json j;
  j["source"] = c.source;
  j["ini"] = to_ini(c);
  return j;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory: " + ec.message(), dir);
  }
}

json plot_json(const PlotSpec& p) {
  return {{"title", p.title},
          {"x_column", p.x_column},
          {"y_columns", p.y_columns},
          {"mask_column", p.mask_column},
          {"source_csv", p.source_csv}};
}

json column_names(const Table& t) {
  json cols = json::array();
  for (const auto& c : t.columns()) cols.push_back(c.header);
  return cols;
}

/// Writes csv/svg/manifest for a table; returns the manifest outputs list.
RunResult write_outputs(const std::string& out_dir, const std::string& stem, const Table& table,
                        PlotSpec plot, bool csv, bool svg, json manifest) {
  ensure_dir(out_dir);
  RunResult r;
  json outputs = json::array();
  const std::string csv_name = stem + ".csv";
  plot.source_csv = csv_name;
  if (csv) {
    write_text_file(join_path(out_dir, csv_name), table.to_csv());
    r.files.push_back(join_path(out_dir, csv_name));
    outputs.push_back({{"file", csv_name}, {"kind", "csv"}, {"columns", column_names(table)}});
  }
  if (svg) {
    const std::string svg_name = stem + ".svg";
    write_text_file(join_path(out_dir, svg_name), render_svg(table, plot));
    r.files.push_back(join_path(out_dir, svg_name));
    outputs.push_back({{"file", svg_name}, {"kind", "svg"}, {"plot", plot_json(plot)}});
  }
  manifest["outputs"] = outputs;
  r.manifest_path = join_path(out_dir, stem + ".manifest.json");
  write_text_file(r.manifest_path, manifest.dump(2) + "\n");
  r.files.push_back(r.manifest_path);
  r.manifest = std::move(manifest);
  return r;
}

json manifest_header(const ScenarioConfig& c, const std::string& command) {
  json m;
  m["format"] = "abwave-manifest/1";
  m["software"] = {{"name", "abwave"}, {"version", software_version()}};
  m["command"] = command;
  m["scenario"] = c.name;
  m["mode"] = to_string(c.mode);
  m["analysis"] = to_string(c.analysis);
  m["config"] = config_json(c);
  m["constants"] = constants_json(c);
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Computation compute_scenario(const ScenarioConfig& c, unsigned threads) {
  switch (c.mode) {
    case Mode::analytic: return compute_analytic(c);
    case Mode::path_integral_1d:
      return c.analysis == AnalysisKind::quantum_potential ? compute_quantum_potential(c, threads)
                                                           : compute_far_1d(c, threads);
    case Mode::path_integral_2d: return compute_2d(c, threads);
  }
  throw ConfigError("unsupported mode", c.source, c.line_of("scenario.mode"), "scenario.mode");
}

RunResult run_scenario(const ScenarioConfig& c, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Computation comp = compute_scenario(c, options.threads);
  json m = manifest_header(c, "run");
  m["conventions"] = comp.conventions;
  m["diagnostics"] = comp.diagnostics;
  if (comp.summary) m["summary"] = summary_json(*comp.summary);
  m["duration_seconds"] = seconds_since(t0);
  return write_outputs(options.out_dir, c.name, comp.table, comp.plot, c.write_csv, c.write_svg,
                       std::move(m));
}

std::vector<double> parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("expected a:b:step with finite numbers, got '" + text + "'", {}, 0,
                        "--values");
    }
  };
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 3) {
    throw ConfigError("expected a:b:step, got '" + text + "'", {}, 0, "--values");
  }
  const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
  if (!(step > 0.0) || b < a) {
    throw ConfigError("need step > 0 and b >= a, got '" + text + "'", {}, 0, "--values");
  }
  const double span = (b - a) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9 * std::max(1.0, span))) + 1;
  if (count > 100000) throw ConfigError("too many sweep points", {}, 0, "--values");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = a + static_cast<double>(i) * step;
  return values;
}

RunResult run_sweep(const ScenarioConfig& base, const std::string& parameter,
                    const std::vector<double>& values, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string param = resolve_parameter(parameter);
  if (base.analysis != AnalysisKind::far_field) {
    throw ConfigError("sweeps report far-field figures; set analysis = far_field", base.source,
                      base.line_of("scenario.analysis"), "scenario.analysis");
  }
  if (values.empty()) throw ConfigError("no sweep values", {}, 0, "--values");

  struct Point {
    std::string status = "ok";
    std::string message;
    double deflection = std::nan("");
    double asymmetry = std::nan("");
    double formula = std::nan("");
    int exit_code = 0;
  };
  std::vector<Point> points(values.size());
  const unsigned outer = std::min<unsigned>(detail::resolve_threads(options.threads),
                                            static_cast<unsigned>(values.size()));
  const unsigned inner = outer > 1 ? 1 : options.threads;
  detail::parallel_for(values.size(), outer, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Point& p = points[i];
      try {
        ScenarioConfig c = base;
        set_parameter(c, param, values[i]);
        validate_config(c);
        const auto comp = compute_scenario(c, inner);
        const auto& s = *comp.summary;
        if (s.expectation_deflection) p.deflection = *s.expectation_deflection;
        if (s.asymmetry_metric) p.asymmetry = *s.asymmetry_metric;
        if (s.deflection_formula) p.formula = *s.deflection_formula;
        std::string notes;
        for (const auto& n : s.notes) notes += (notes.empty() ? "" : "; ") + n;
        p.message = notes;
        if (!s.expectation_deflection || !s.asymmetry_metric) {
          p.status = "numerical_error";
          p.exit_code = 3;
        }
      } catch (const ConfigError& e) {
        p = Point{"config_error", e.what(), p.deflection, p.asymmetry, p.formula, 2};
      } catch (const IoError& e) {
        p = Point{"io_error", e.what(), p.deflection, p.asymmetry, p.formula, 4};
      } catch (const abwave::Error& e) {
        p = Point{"numerical_error", e.what(), p.deflection, p.asymmetry, p.formula, 3};
      } catch (const std::exception& e) {
        p = Point{"error", e.what(), p.deflection, p.asymmetry, p.formula, 1};
      }
    }
  });

  const std::string u = unit_name(base);
  Table t;
  std::vector<double> d, a, f;
  std::vector<std::string> status, message;
  std::size_t failed = 0;
  for (const auto& p : points) {
    d.push_back(p.deflection);
    a.push_back(p.asymmetry);
    f.push_back(p.formula);
    status.push_back(p.status);
    message.push_back(p.message);
    if (p.exit_code != 0) ++failed;
  }
  t.add_numeric(param + "(" + parameter_unit(base, param) + ")", values);
  t.add_text("status", status);
  t.add_numeric("expectation_deflection(" + u + ")", d);
  t.add_numeric("asymmetry_metric(1)", a);
  t.add_numeric("deflection_formula(" + u + ")", f);
  t.add_text("message", message);

  const std::string stem = base.name + "_sweep_" + param;
  PlotSpec plot{base.name + ": sweep of " + param, param,
                {"expectation_deflection", "deflection_formula"}, "", stem + ".csv"};
  json m = manifest_header(base, "sweep");
  m["sweep"] = {{"parameter", param}, {"values", values}, {"failed_points", failed}};
  m["conventions"] = {{"angle_unit", u},
                      {"kernel_phase_factor", propagator::to_string(base.kernel)},
                      {"row_order", "as given by --values"}};
  m["duration_seconds"] = seconds_since(t0);
  RunResult r = write_outputs(options.out_dir, stem, t, plot, true, base.write_svg, std::move(m));
  if (failed == points.size()) {
    r.manifest["all_failed_exit_code"] = points.front().exit_code;
  }
  return r;
}

int ValidationReport::exit_code() const {
  bool numerical = false;
  for (const auto& i : issues) {
    if (i.kind == ValidationIssue::Kind::config) return 2;
    numerical = true;
  }
  return numerical ? 3 : 0;
}

std::string ValidationReport::text() const {
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& [k, v] : items) width = std::max(width, k.size());
  for (const auto& [k, v] : items) {
    out << "  " << k << std::string(width - k.size(), ' ') << " : " << v << '\n';
  }
  if (issues.empty()) {
    out << "status: ok\n";
  } else {
    out << "issues:\n";
    for (const auto& i : issues) {
      out << "  [" << (i.kind == ValidationIssue::Kind::config ? "config" : "numerical") << "] "
          << i.message << '\n';
    }
  }
  return out.str();
}

ValidationReport validate_file(const std::string& path) {
  ValidationReport r;
  ScenarioConfig c;
  try {
    c = load_config(path);
  } catch (const ConfigError& e) {
    r.issues.push_back({ValidationIssue::Kind::config, e.what()});
    return r;
  }
  auto item = [&](const std::string& k, const std::string& v) { r.items.emplace_back(k, v); };
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
  };
  auto numerical = [&](const std::string& m) {
    r.issues.push_back({ValidationIssue::Kind::numerical, m});
  };

  item("scenario", c.name);
  item("mode", std::string(to_string(c.mode)) + " / " + to_string(c.analysis));
  const double lambda = wavefield::de_broglie_wavelength(c.energy_ev);
  item("lambda_db", num(lambda * 1e12) + " pm");
  item("kernel_phase_factor", propagator::to_string(c.kernel));
  item("kernel wavenumber", num(propagator::kernel_wavenumber(lambda, c.kernel)) + " 1/m");
  const auto beam = BeamParams::from_energy(c.energy_ev, c.beta);
  item("w from beta", num(beam.paraxial_w()) + " (beta = " + num(c.beta) + " m)");
  const double factor = angle_factor(c.angle_unit, beam.paraxial_w());

  try {
    if (c.mode == Mode::analytic) {
      item("angle window", "+-" + num(c.theta_max) + " " + unit_name(c) + " = +-" +
                               num(c.theta_max / factor) + " rad");
    } else if (c.mode == Mode::path_integral_1d) {
      const auto [src_grid, b] = source_1d(c);
      item("source grid", std::to_string(src_grid.size()) + " samples, spacing " +
                              num(src_grid.spacing()) + " m");
      const auto src = wavefield::phase_step_state(src_grid, FluxStrength(c.flux_alpha()), c.beta);
      if (c.analysis == AnalysisKind::far_field) {
        const Grid1D target = far_target_1d(c, c.theta_max / factor);
        const PropagationGeometry<Grid1D> geom{c.distance, target, regime_for(c.route), c.kernel};
        item("detector", std::to_string(target.size()) + " samples over +-" +
                             num(c.theta_max / factor) + " rad at " + num(c.distance) + " m");
        item("fresnel number", num(propagator::fresnel_number(src, c.distance, lambda, c.kernel)));
        item("route", "direct");
        const auto a = propagator::check_aliasing(src_grid, geom, lambda);
        item("aliasing margin", num(a.max_phase_step) + " rad per sample step (limit pi)");
        if (!a.ok) numerical("aliasing: " + a.detail);
      } else {
        const double z = c.fraction * c.distance;
        const double k = propagator::kernel_wavenumber(lambda, c.kernel);
        const double zr = 0.5 * k * c.beta * c.beta;
        const double width = c.beta * std::sqrt(1.0 + (z / zr) * (z / zr));
        const Grid1D target = Grid1D::centered(c.target_samples, c.target_extent.value_or(12.0 * width));
        const PropagationGeometry<Grid1D> geom{z, target, Regime::near, c.kernel};
        item("near plane", num(z) + " m (" + num(c.fraction) + " of " + num(c.distance) + " m)");
        item("propagated width", num(width) + " m");
        item("near-plane grid", std::to_string(target.size()) + " samples over " +
                                    num(target.extent()) + " m");
        item("fresnel number", num(propagator::fresnel_number(src, z, lambda, c.kernel)));
        item("route", "direct");
        const auto a = propagator::check_aliasing(src_grid, geom, lambda);
        item("aliasing margin", num(a.max_phase_step) + " rad per sample step (limit pi)");
        if (!a.ok) numerical("aliasing: " + a.detail);
      }
    } else {
      const Grid2D grid = Grid2D::centered(c.samples_2d, c.samples_2d, c.extent_2d, c.extent_2d);
      const wavefield::FluxBar bar{c.bar_width, FluxStrength(c.flux_alpha()),
                                   wavefield::BarOrientation::along_x};
      const auto src = wavefield::circular_aperture_state(grid, c.aperture_radius, bar);
      const double nf = propagator::fresnel_number(src, c.distance, lambda, c.kernel);
      const Grid2D target = propagator::fraunhofer_grid(grid, c.distance, lambda, c.kernel);
      item("source grid", std::to_string(c.samples_2d) + "^2 samples, spacing " +
                              num(grid.x().spacing()) + " m");
      item("fresnel number", num(nf));
      item("far-field angle step", num(target.y().spacing() / c.distance) + " rad");
      std::string route;
      switch (c.route) {
        case RouteChoice::automatic: route = nf < 0.1 ? "fraunhofer" : "direct"; break;
        case RouteChoice::fraunhofer: route = "fraunhofer"; break;
        case RouteChoice::direct: route = "direct"; break;
      }
      item("route", route + (c.route == RouteChoice::automatic ? " (automatic)" : ""));
      if (route == "fraunhofer" && nf >= 0.1) {
        numerical("fresnel number " + num(nf) + " >= 0.1: the Fraunhofer route does not apply");
      }
      if (route == "direct") {
        const PropagationGeometry<Grid2D> geom{c.distance, target, Regime::near, c.kernel};
        const auto a = propagator::check_aliasing(grid, geom, lambda);
        item("aliasing margin", num(a.max_phase_step) + " rad per sample step (limit pi)");
        if (!a.ok) numerical("aliasing: " + a.detail);
      }
    }
  } catch (const abwave::Error& e) {
    numerical(e.what());
  }
  return r;
}

ScenarioConfig config_from_manifest(const std::string& manifest_path) {
  json m;
  try {
    m = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what(), manifest_path);
  }
  if (!m.contains("config") || !m["config"].contains("ini")) {
    throw ConfigError("manifest has no config.ini echo", manifest_path);
  }
  return config_from_text(m["config"]["ini"].get<std::string>(), manifest_path + "#config.ini");
}

std::string rederive_svg(const json& svg_entry, const std::string& csv_text) {
  const auto& p = svg_entry.at("plot");
  PlotSpec spec{p.at("title").get<std::string>(), p.at("x_column").get<std::string>(),
                p.at("y_columns").get<std::vector<std::string>>(),
                p.at("mask_column").get<std::string>(), p.at("source_csv").get<std::string>()};
  return render_svg(Table::from_csv(csv_text), spec);
}

}  // namespace abwave::tools
