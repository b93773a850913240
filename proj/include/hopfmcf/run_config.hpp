// JSON run configuration and the end-to-end run driver behind `hopfmcf run`.
// The accepted keys are listed in configs/run_config.schema.json; anything
// else is rejected.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hopfmcf/flow_composer.hpp"

namespace hopfmcf {

struct ExportFlags {
  bool csv = true;
  bool mesh4d = true;
  bool obj3d = false;
};

struct RunConfig {
  EvolutionConfig evolution;  // frame_times empty means default_frame_times(frame_count)
  std::size_t frame_count = 5;
  std::string output_dir = "hopfmcf_out";
  ExportFlags exports;
  std::optional<Point4> stereo_pole;
};

// Relative point-list paths are resolved against base_dir.  Throws
// ValidationError on malformed JSON, unknown keys or out-of-range values.
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

struct RunOutcome {
  EvolutionResult result;
  std::vector<std::string> files;  // everything written, in order
  std::string report_json;
};

// Pole used for the OBJ export when the config does not set one: the fiber
// point over the antipode of the extinction point for a cylinder, and
// -fiber_point(north pole) otherwise.
Point4 default_stereo_pole(const EvolutionResult& r);

// Runs the evolution and writes records.csv, frame_XXXX.v4 / .obj and
// report.json into output_dir (created if missing).
RunOutcome execute_run(const RunConfig& config);

}  // namespace hopfmcf
