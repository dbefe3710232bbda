#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abwave/tools/config.hpp"
#include "abwave/tools/table.hpp"

namespace abwave::tools {

/// Far-field figures of merit of the main pattern, in the detector angle
/// unit. Any of them may be missing (e.g. the window is too narrow for the
/// coverage check); `notes` then says why.
struct PatternSummary {
  std::optional<double> expectation_deflection;
  std::optional<double> asymmetry_metric;
  std::optional<double> deflection_formula;
  std::vector<std::string> notes;
};

/// Everything a scenario produces, before anything touches the disk.
struct Computation {
  Table table;
  PlotSpec plot;
  nlohmann::json diagnostics = nlohmann::json::object();
  nlohmann::json conventions = nlohmann::json::object();
  std::optional<PatternSummary> summary;
};

/// Runs the pipeline for one configuration. `threads` = 0 uses all cores;
/// results do not depend on it.
Computation compute_scenario(const ScenarioConfig& config, unsigned threads = 0);

struct RunOptions {
  std::string out_dir = ".";
  unsigned threads = 0;
};

struct RunResult {
  std::string manifest_path;
  std::vector<std::string> files;  ///< every file written, manifest last
  nlohmann::json manifest;
};

/// compute_scenario, then writes <name>.csv, <name>.svg and
/// <name>.manifest.json into out_dir (created if needed).
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// "a:b:step" -> a, a+step, ... up to b inclusive (1e-9 relative slack).
/// A single number is a one-point list.
std::vector<double> parse_range(const std::string& text);

/// One row per value; a failing point is recorded with its error and the
/// sweep carries on. Writes <name>_sweep_<param>.{csv,svg,manifest.json}.
RunResult run_sweep(const ScenarioConfig& base, const std::string& parameter,
                    const std::vector<double>& values, const RunOptions& options);

struct ValidationIssue {
  enum class Kind { config, numerical };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<std::pair<std::string, std::string>> items;
  std::vector<ValidationIssue> issues;

  /// 0 clean, 2 if any configuration issue, else 3 for numerical ones.
  int exit_code() const;
  std::string text() const;
};

/// Dry run: loads the file, derives the beam, grid and propagation
/// quantities and checks preconditions without propagating anything.
ValidationReport validate_file(const std::string& path);

/// The configuration echoed in a manifest, re-parsed.
ScenarioConfig config_from_manifest(const std::string& manifest_path);

/// Builds the SVG text for an output described in a manifest from its
/// sibling CSV file.
std::string rederive_svg(const nlohmann::json& svg_entry, const std::string& csv_text);

std::string software_version();

}  // namespace abwave::tools
