#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "abwave/errors.hpp"
#include "abwave/tools/config.hpp"
#include "abwave/tools/errors.hpp"
#include "abwave/tools/runner.hpp"

namespace {

using namespace abwave::tools;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

// Looks for <name>.ini in $ABWAVE_PRESET_DIR, then the installed data
// directory, then the source tree.
std::string find_preset(const std::string& name) {
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("ABWAVE_PRESET_DIR")) dirs.emplace_back(env);
#ifdef ABWAVE_INSTALL_PRESET_DIR
  dirs.emplace_back(ABWAVE_INSTALL_PRESET_DIR);
#endif
#ifdef ABWAVE_SOURCE_PRESET_DIR
  dirs.emplace_back(ABWAVE_SOURCE_PRESET_DIR);
#endif
  for (const auto& d : dirs) {
    const auto p = d / (name + ".ini");
    if (std::filesystem::is_regular_file(p)) return p.string();
  }
  throw ConfigError("no preset named '" + name + "' (searched $ABWAVE_PRESET_DIR and the "
                    "installed preset directory)");
}

ScenarioConfig load_any(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".json") return config_from_manifest(path);
  return load_config(path);
}

void report(const RunResult& r) {
  for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abwave: electron diffraction past a magnetic flux line"};
  app.set_version_flag("--version", software_version());
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string config_path;
  std::string out_dir = ".";

  auto* run = app.add_subcommand("run", "run one scenario (a config file or a manifest)");
  run->add_option("config", config_path, "configuration file or *.manifest.json")->required();
  run->add_option("--out", out_dir, "output directory");

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "vary one numeric field");
  sweep->add_option("config", config_path, "configuration file")->required();
  sweep->add_option("--param", param, "field name, e.g. flux.alpha")->required();
  sweep->add_option("--values", values, "a:b:step (inclusive)")->required();
  sweep->add_option("--out", out_dir, "output directory");

  auto* validate = app.add_subcommand("validate", "dry-run checks and derived quantities");
  validate->add_option("config", config_path, "configuration file")->required();

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "run a shipped preset");
  preset->add_option("name", preset_name, "fig2a, fig2b, fig2c, fig3, fig5 or another preset")
      ->required();
  preset->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const RunOptions options{out_dir, threads};
    if (*run) {
      report(run_scenario(load_any(config_path), options));
    } else if (*preset) {
      report(run_scenario(load_config(find_preset(preset_name)), options));
    } else if (*sweep) {
      const auto r = run_sweep(load_any(config_path), param, parse_range(values), options);
      report(r);
      const auto failed = r.manifest["sweep"]["failed_points"].get<std::size_t>();
      if (failed > 0) std::cerr << "abwave: " << failed << " sweep point(s) failed; see the csv\n";
      if (r.manifest.contains("all_failed_exit_code")) {
        return r.manifest["all_failed_exit_code"].get<int>();
      }
    } else if (*validate) {
      const auto report = validate_file(config_path);
      std::cout << report.text();
      return report.exit_code();
    }
  } catch (const ConfigError& e) {
    std::cerr << "abwave: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "abwave: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const abwave::Error& e) {
    std::cerr << "abwave: numerical precondition failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "abwave: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
