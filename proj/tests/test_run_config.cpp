#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hopfmcf/errors.hpp"
#include "hopfmcf/run_config.hpp"
#include "json.hpp"

using namespace hopfmcf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hopfmcf_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config defaults and fields") {
  const RunConfig rc = parse_run_config(R"({"curve": {"family": "latitude", "theta0": 1.0}})");
  CHECK(rc.evolution.r0 == 1.0);
  const auto& spec = std::get<CurveFamilySpec>(rc.evolution.initial_curve);
  CHECK(spec.family == CurveFamilySpec::Family::latitude);
  CHECK(spec.resolution == 512);
  CHECK(spec.theta0 == 1.0);
  CHECK(rc.evolution.csf.cfl == 0.25);
  CHECK(rc.frame_count == 5);
  CHECK(rc.exports.csv);
  CHECK_FALSE(rc.exports.obj3d);
  CHECK_FALSE(rc.stereo_pole.has_value());

  const RunConfig full = parse_run_config(R"({
    "r0": 2, "N": 64, "cfl": 0.1, "resample_every": 5, "length_epsilon": 1e-4, "max_steps": 1000,
    "tbar_horizon": 0.7, "record_dtbar": 0.01, "frame_times": [0, 0.1], "n_beta": 16,
    "output_dir": "x", "export": {"csv": false, "obj3d": true}, "stereo_pole": [0, 0, 0, 2],
    "curve": {"family": "perturbed_great_circle", "mode": 4, "amplitude": 0.02}})");
  CHECK(full.evolution.r0 == 2);
  CHECK(full.evolution.csf.resample_every == 5);
  CHECK(full.evolution.csf.max_steps == 1000);
  CHECK(full.evolution.frame_times.size() == 2);
  CHECK(full.evolution.n_beta == 16);
  CHECK(full.output_dir == "x");
  CHECK_FALSE(full.exports.csv);
  CHECK(full.exports.mesh4d);
  CHECK(full.stereo_pole.value() == Point4{0, 0, 0, 1});
  const auto& p = std::get<CurveFamilySpec>(full.evolution.initial_curve);
  CHECK(p.mode == 4);
  CHECK(p.amplitude == 0.02);
  CHECK(p.resolution == 64);
}

TEST_CASE("config rejections") {
  const char* bad[] = {
      R"({"curve": {"family": "latitude", "theta0": 1.0}, "N": 4})",
      R"({"curve": {"family": "latitude", "theta0": 1.0}, "colour": 1})",
      R"({"curve": {"family": "latitude", "theta0": 1.0, "axis": [0, 0, 1]}})",
      R"({"curve": {"family": "latitude"}})",
      R"({"curve": {"family": "spiral"}})",
      R"({"r0": 1})",
      R"({"curve": {"family": "great_circle"}, "cfl": 0.7})",
      R"({"curve": {"family": "great_circle"}, "cfl": "fast"})",
      R"({"curve": {"family": "great_circle"}, "N": 64.5})",
      R"({"curve": {"family": "great_circle"}, "frames": 3, "frame_times": [0]})",
      R"({"curve": {"family": "great_circle"}, "frame_times": [0.3]})",
      R"({"curve": {"family": "great_circle"}, "export": {"png": true}})",
      R"({"curve": {"family": "great_circle"}, "stereo_pole": [1, 0, 0]})",
      R"({"curve": {"family": "great_circle"}, "r0": -1})",
      R"({"curve": {"family": "great_circle"}, "n_beta": 2})",
      R"([1, 2])",
      R"({"curve": )",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_run_config(text), ValidationError);
  }
}

TEST_CASE("bundled configs parse") {
  for (const char* name : {"clifford.json", "cap60.json"}) {
    const RunConfig rc = load_run_config(std::string(HOPFMCF_SOURCE_DIR) + "/configs/" + name);
    CHECK(rc.evolution.csf.cfl == 0.25);
    CHECK(rc.exports.obj3d);
  }
}

TEST_CASE("point list path is relative to the config") {
  const fs::path dir = scratch("pl");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "curve.txt");
    for (int k = 0; k < 16; ++k) {
      const double a = 2 * kPi * k / 16;
      f << 0.3 * std::cos(a) << ' ' << 0.3 * std::sin(a) << ' ' << 0.4 << '\n';
    }
    std::ofstream c(dir / "run.json");
    c << R"({"curve": {"family": "point_list", "file": "curve.txt"}})";
  }
  const RunConfig rc = load_run_config((dir / "run.json").string());
  const auto& spec = std::get<CurveFamilySpec>(rc.evolution.initial_curve);
  CHECK(fs::path(spec.file) == dir / "curve.txt");
  CHECK(make_family(spec).size() == 16);
  fs::remove_all(dir);
}

TEST_CASE("run writes records, frames and a report") {
  const fs::path dir = scratch("run");
  RunConfig rc = parse_run_config(R"({"r0": 2, "N": 64, "n_beta": 12, "frames": 3,
      "export": {"obj3d": true}, "curve": {"family": "latitude", "theta0": 1.0471975511965976}})");
  rc.output_dir = dir.string();
  const RunOutcome out = execute_run(rc);
  CHECK(out.files.size() == 1 + 2 * 4 + 1);
  for (const std::string& f : out.files) CHECK(fs::exists(f));

  const std::string csv = slurp(dir / "records.csv");
  CHECK(csv.rfind("t,tbar,R,length,area,area_predicted,max_kappa,sup_sigma_sq,typeI\n", 0) == 0);

  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["report"]["kind"] == "circle_cylinder");
  CHECK(report["predicted"]["T"].get<double>() == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(report["report"]["T"].get<double>() == doctest::Approx(report["predicted"]["T"].get<double>()).epsilon(2e-2));
  CHECK(report["comparison"].size() == 3);
  CHECK(report["extinct"] == true);
  CHECK(report["frames"].size() == 4);
  CHECK(report["frames"][3]["final"] == true);
  CHECK(report["typeI"]["bounded"] == true);

  // Same config, same bytes.
  const fs::path again = scratch("run2");
  rc.output_dir = again.string();
  execute_run(rc);
  for (const char* f : {"records.csv", "frame_0002.v4", "frame_0003.obj", "report.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / f) == slurp(again / f));
  }
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("equal-area run report") {
  const fs::path dir = scratch("cliff");
  RunConfig rc = parse_run_config(R"({"N": 64, "n_beta": 12, "frames": 2, "tbar_horizon": 0.5,
      "export": {"mesh4d": false}, "curve": {"family": "great_circle"}})");
  rc.output_dir = dir.string();
  const RunOutcome out = execute_run(rc);
  const auto report = nlohmann::json::parse(out.report_json);
  CHECK(report["report"]["kind"] == "point_clifford");
  CHECK(report["report"]["T"].is_null());
  CHECK(report["area_drift"].get<double>() <= 1e-3);
  CHECK(report["extinct"] == false);
  CHECK(out.files.size() == 2);
  fs::remove_all(dir);
}
