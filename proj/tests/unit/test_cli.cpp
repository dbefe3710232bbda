#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "abwave/tools/runner.hpp"
#include "abwave/tools/table.hpp"

namespace fs = std::filesystem;
using abwave::tools::read_text_file;
using abwave::tools::write_text_file;

namespace {

struct Outcome {
  int code;
  std::string output;
};

Outcome run(const std::string& args) {
  const fs::path log = fs::path(::testing::TempDir()) / "abwave_cli_log.txt";
  const std::string cmd = std::string(ABWAVE_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(log.string())};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("abwave_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Small 1-D path-integral scenario that runs in well under a second.
const char* kQuick = R"([scenario]
name = quick
mode = path_integral_1d

[flux]
alpha = 0.25

[grid]
source_samples = 1024
source_extent = 6e-7
target_samples = 301
theta_max = 6

[compare]
analytic = true
)";

}  // namespace

TEST(Cli, RunWritesCsvSvgAndManifest) {
  const auto dir = fresh_dir("run");
  write_text_file((dir / "quick.ini").string(), kQuick);
  const auto r = run("run " + (dir / "quick.ini").string() + " --out " + (dir / "out").string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"quick.csv", "quick.svg", "quick.manifest.json"})
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  const auto m = nlohmann::json::parse(read_text_file((dir / "out" / "quick.manifest.json").string()));
  EXPECT_EQ(m["format"], "abwave-manifest/1");
  EXPECT_TRUE(m.contains("constants"));
  EXPECT_TRUE(m.contains("conventions"));
  EXPECT_TRUE(m.contains("diagnostics"));
  EXPECT_TRUE(m["duration_seconds"].is_number());
  EXPECT_EQ(m["outputs"].size(), 2u);
  const auto csv = read_text_file((dir / "out" / "quick.csv").string());
  EXPECT_EQ(csv.rfind("theta(w*rad),", 0), 0u) << csv.substr(0, 80);
}

TEST(Cli, RerunIsByteIdentical) {
  const auto dir = fresh_dir("rerun");
  write_text_file((dir / "quick.ini").string(), kQuick);
  ASSERT_EQ(run("run " + (dir / "quick.ini").string() + " --out " + (dir / "a").string()).code, 0);
  ASSERT_EQ(run("--threads 3 run " + (dir / "quick.ini").string() + " --out " + (dir / "b").string()).code, 0);
  for (const char* f : {"quick.csv", "quick.svg"}) {
    EXPECT_EQ(read_text_file((dir / "a" / f).string()), read_text_file((dir / "b" / f).string())) << f;
  }
}

TEST(Cli, EverySvgIsDerivableFromItsCsv) {
  const auto dir = fresh_dir("svg");
  write_text_file((dir / "quick.ini").string(), kQuick);
  ASSERT_EQ(run("run " + (dir / "quick.ini").string() + " --out " + dir.string()).code, 0);
  const auto m = nlohmann::json::parse(read_text_file((dir / "quick.manifest.json").string()));
  std::size_t checked = 0;
  for (const auto& out : m["outputs"]) {
    if (out["kind"] != "svg") continue;
    const auto csv = read_text_file((dir / out["plot"]["source_csv"].get<std::string>()).string());
    EXPECT_EQ(abwave::tools::rederive_svg(out, csv),
              read_text_file((dir / out["file"].get<std::string>()).string()));
    ++checked;
  }
  EXPECT_EQ(checked, 1u);
}

TEST(Cli, ManifestReproducesOutputs) {
  const auto dir = fresh_dir("manifest");
  write_text_file((dir / "quick.ini").string(), kQuick);
  ASSERT_EQ(run("run " + (dir / "quick.ini").string() + " --out " + (dir / "a").string()).code, 0);
  const auto r = run("run " + (dir / "a" / "quick.manifest.json").string() + " --out " + (dir / "b").string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"quick.csv", "quick.svg"}) {
    EXPECT_EQ(read_text_file((dir / "a" / f).string()), read_text_file((dir / "b" / f).string())) << f;
  }
}

TEST(Cli, ExitCodes) {
  const auto dir = fresh_dir("codes");
  // 2: configuration error, with file and line.
  write_text_file((dir / "bad.ini").string(), "[scenario]\nname = x\nmode = warp\n[flux]\nalpha = 0\n");
  auto r = run("run " + (dir / "bad.ini").string() + " --out " + dir.string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("bad.ini:3"), std::string::npos) << r.output;
  EXPECT_EQ(run("frobnicate").code, 2);
  // 3: numerical precondition (aliasing), naming the offending sampling.
  write_text_file((dir / "alias.ini").string(),
                  "[scenario]\nname = a\nmode = path_integral_1d\n[flux]\nalpha = 0.25\n"
                  "[grid]\nsource_samples = 16\nsource_extent = 6e-7\ntheta_max = 40\n");
  r = run("run " + (dir / "alias.ini").string() + " --out " + dir.string());
  EXPECT_EQ(r.code, 3) << r.output;
  EXPECT_NE(r.output.find("alias"), std::string::npos) << r.output;
  // 4: I/O, both for a missing input and an unwritable output.
  EXPECT_EQ(run("run " + (dir / "missing.ini").string()).code, 4);
  write_text_file((dir / "quick.ini").string(), kQuick);
  write_text_file((dir / "blocker").string(), "not a directory");
  r = run("run " + (dir / "quick.ini").string() + " --out " + (dir / "blocker" / "sub").string());
  EXPECT_EQ(r.code, 4) << r.output;
}

TEST(Cli, ValidateReportsWithoutRunning) {
  const auto dir = fresh_dir("validate");
  write_text_file((dir / "quick.ini").string(), kQuick);
  auto r = run("validate " + (dir / "quick.ini").string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("4.866"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir / "quick.csv"));
}

TEST(Cli, ValidateFig5ReportsRoute) {
  const auto r = run("validate " + std::string(ABWAVE_PRESET_DIR) + "/fig5.ini");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("fresnel number"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("fraunhofer"), std::string::npos) << r.output;
}

TEST(Cli, SweepContinuesPastFailedPoints) {
  const auto dir = fresh_dir("sweep");
  std::string cfg = kQuick;
  cfg.replace(cfg.find("alpha = 0.25"), 12, "alpha = 0");
  write_text_file((dir / "quick.ini").string(), cfg);
  // source_samples = 16 aliases; the other points run.
  const auto r = run("sweep " + (dir / "quick.ini").string() +
                     " --param source_samples --values 16:2064:1024 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto t = abwave::tools::Table::from_csv(
      read_text_file((dir / "quick_sweep_grid.source_samples.csv").string()));
  ASSERT_EQ(t.rows(), 3u);
  const auto& status = t.column("status").text;
  EXPECT_EQ(status[0], "numerical_error");
  EXPECT_EQ(status[1], "ok");
  EXPECT_EQ(status[2], "ok");
  EXPECT_TRUE(std::isnan(t.column("expectation_deflection").numbers[0]));
}

TEST(Cli, AlphaSweepTracksTheFormula) {
  const auto dir = fresh_dir("alpha");
  write_text_file((dir / "a.ini").string(),
                  "[scenario]\nname = a\nmode = analytic\n[flux]\nalpha = 0\n"
                  "[grid]\ntarget_samples = 40001\ntheta_max = 400\n");
  ASSERT_EQ(run("sweep " + (dir / "a.ini").string() + " --param alpha --values 0:1:0.25 --out " +
                dir.string()).code, 0);
  const auto t = abwave::tools::Table::from_csv(read_text_file((dir / "a_sweep_flux.alpha.csv").string()));
  ASSERT_EQ(t.rows(), 5u);
  const auto& d = t.column("expectation_deflection").numbers;
  const auto& f = t.column("deflection_formula").numbers;
  EXPECT_NEAR(d[0], 0.0, 1e-10);
  EXPECT_NEAR(d[4], 0.0, 1e-10);
  EXPECT_NEAR(d[1] / f[1], 1.0, 0.01);
  EXPECT_NEAR(d[3] / f[3], 1.0, 0.01);
}

TEST(Cli, PresetWritesOutputs) {
  const auto dir = fresh_dir("preset");
  const auto r = run("preset fig2b --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto t = abwave::tools::Table::from_csv(read_text_file((dir / "fig2b.csv").string()));
  EXPECT_NO_THROW(t.index_of("theta"));
  EXPECT_NO_THROW(t.index_of("I_analytic"));
  EXPECT_NO_THROW(t.index_of("I_pathintegral"));
  EXPECT_EQ(run("preset fig9 --out " + dir.string()).code, 2);
}
