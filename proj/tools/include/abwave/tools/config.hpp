#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abwave/analysis.hpp"
#include "abwave/propagator.hpp"
#include "abwave/tools/ini.hpp"

namespace abwave::tools {

enum class Mode { analytic, path_integral_1d, path_integral_2d };
enum class AnalysisKind { far_field, quantum_potential };
enum class RouteChoice { automatic, direct, fraunhofer };

const char* to_string(Mode m);
const char* to_string(AnalysisKind a);
const char* to_string(RouteChoice r);

/// One named experiment. Every field has a default except scenario.name,
/// scenario.mode and the flux (flux.alpha or flux.phi).
///
/// Lengths are metres, energies eV. theta_max and source_rms are in the
/// detector angle unit.
struct ScenarioConfig {
  std::string source;  ///< file the config came from, for messages

  // [scenario]
  std::string name;
  Mode mode = Mode::analytic;
  AnalysisKind analysis = AnalysisKind::far_field;
  bool write_csv = true;
  bool write_svg = true;

  // [flux]
  std::optional<double> alpha;
  std::optional<double> phi;  ///< weber
  double bar_width = 0.0;

  // [beam]
  double energy_ev = 60000.0;
  double beta = 50e-9;

  // [grid]
  std::size_t source_samples = 8192;
  std::optional<double> source_extent;  ///< default 12 beta
  std::size_t target_samples = 1001;
  double theta_max = 10.0;
  std::optional<double> target_extent;  ///< near plane; default 12 widths
  std::size_t samples_2d = 1024;
  double extent_2d = 40e-6;

  // [aperture]
  double aperture_radius = 2.5e-6;

  // [geometry]
  double distance = 10.0;
  double fraction = 0.01;
  propagator::KernelPhase kernel = propagator::KernelPhase::two_pi;
  RouteChoice route = RouteChoice::automatic;

  // [detector]
  analysis::AngleUnit angle_unit = analysis::AngleUnit::scaled;
  std::optional<double> camera_length;
  analysis::ProfileMode profile = analysis::ProfileMode::projection;

  // [coherence]
  double source_rms = 0.0;

  // [compare]
  bool compare_analytic = false;
  bool compare_demagnetized = false;

  /// "section.key" -> line in `source`, for error attribution.
  std::map<std::string, std::size_t> lines;

  /// Flux in quantum units, from alpha or from phi.
  double flux_alpha() const;
  std::size_t line_of(const std::string& field) const;
};

/// Parses and validates; errors carry file, line and field.
ScenarioConfig parse_config(const IniDocument& doc);
ScenarioConfig load_config(const std::string& path);
ScenarioConfig config_from_text(const std::string& text, const std::string& source);

/// Throws ConfigError if any field or combination of fields is invalid.
void validate_config(const ScenarioConfig& config);

/// Canonical INI text with every field spelled out; parsing it yields the
/// same configuration.
std::string to_ini(const ScenarioConfig& config);

/// Names accepted by set_parameter ("section.key" or a unique bare key).
std::vector<std::string> numeric_parameters();
/// Resolves a bare key to "section.key"; ConfigError if unknown or ambiguous.
std::string resolve_parameter(const std::string& name);
/// Assigns a numeric field by name. The result is not validated.
void set_parameter(ScenarioConfig& config, const std::string& name, double value);
double get_parameter(const ScenarioConfig& config, const std::string& name);
/// Unit annotation of a numeric field, e.g. "m" or "1".
std::string parameter_unit(const ScenarioConfig& config, const std::string& name);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace abwave::tools
