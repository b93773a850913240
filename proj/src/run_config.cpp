#include "hopfmcf/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hopfmcf/errors.hpp"
#include "hopfmcf/mesh_io.hpp"
#include "json.hpp"

namespace hopfmcf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

long long integer(const json& obj, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
  return v.get<long long>();
}

bool flag(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ValidationError(std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

std::vector<double> numbers(const json& v, const char* key, std::size_t expect = 0) {
  if (!v.is_array()) throw ValidationError(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ValidationError(std::string("'") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  if (expect && out.size() != expect) {
    throw ValidationError(std::string("'") + key + "' must have " + std::to_string(expect) + " entries");
  }
  return out;
}

CurveFamilySpec parse_curve(const json& c, std::size_t n, const std::string& base_dir) {
  if (!c.is_object()) throw ValidationError("'curve' must be an object");
  if (!c.contains("family") || !c.at("family").is_string()) throw ValidationError("'curve.family' is required");
  const std::string family = c.at("family").get<std::string>();
  if (family == "latitude") {
    reject_unknown(c, {"family", "theta0"}, "curve");
    if (!c.contains("theta0")) throw ValidationError("latitude curve needs 'theta0'");
    const double theta0 = number(c, "theta0", 0);
    if (!(theta0 > 0) || !(theta0 < kPi)) throw ValidationError("theta0 must lie in (0, pi)");
    return CurveFamilySpec::latitude(theta0, n);
  }
  if (family == "great_circle") {
    reject_unknown(c, {"family", "axis"}, "curve");
    Point3 axis{0, 0, 1};
    if (c.contains("axis")) {
      const std::vector<double> a = numbers(c.at("axis"), "axis", 3);
      axis = {a[0], a[1], a[2]};
    }
    return CurveFamilySpec::great_circle(n, axis);
  }
  if (family == "perturbed_great_circle") {
    reject_unknown(c, {"family", "mode", "amplitude"}, "curve");
    return CurveFamilySpec::perturbed_great_circle(static_cast<int>(integer(c, "mode", 3)), number(c, "amplitude", 0.05), n);
  }
  if (family == "point_list") {
    reject_unknown(c, {"family", "file"}, "curve");
    if (!c.contains("file") || !c.at("file").is_string()) throw ValidationError("point_list curve needs 'file'");
    fs::path p = c.at("file").get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    return CurveFamilySpec::point_list(p.string());
  }
  throw ValidationError("unknown curve family '" + family + "'");
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json comparison_row(const char* name, double predicted, double measured) {
  json row{{"quantity", name}, {"predicted", finite_or_null(predicted)}, {"measured", finite_or_null(measured)}};
  row["rel_error"] = std::isfinite(predicted) && std::isfinite(measured) && predicted != 0
                         ? json(std::abs(measured - predicted) / std::abs(predicted))
                         : json(nullptr);
  return row;
}

std::string frame_name(std::size_t i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.%s", i, ext);
  return buf;
}

void open_for_write(std::ofstream& out, const fs::path& p) {
  out.open(p);
  if (!out) throw ValidationError("cannot write " + p.string());
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(j,
                 {"r0", "curve", "N", "cfl", "resample_every", "length_epsilon", "max_steps", "tbar_horizon",
                  "record_dtbar", "frames", "frame_times", "n_beta", "output_dir", "export", "stereo_pole"},
                 "config");

  RunConfig rc;
  EvolutionConfig& ev = rc.evolution;
  ev.r0 = number(j, "r0", 1.0);
  const long long n = integer(j, "N", 512);
  if (n < static_cast<long long>(kMinCurvePoints)) {
    throw ValidationError("N must be at least " + std::to_string(kMinCurvePoints));
  }
  if (!j.contains("curve")) throw ValidationError("'curve' is required");
  ev.initial_curve = parse_curve(j.at("curve"), static_cast<std::size_t>(n), base_dir);

  ev.csf.cfl = number(j, "cfl", ev.csf.cfl);
  ev.csf.resample_every = static_cast<int>(integer(j, "resample_every", ev.csf.resample_every));
  ev.csf.length_epsilon = number(j, "length_epsilon", ev.csf.length_epsilon);
  ev.csf.max_steps = integer(j, "max_steps", ev.csf.max_steps);
  validate(ev.csf);
  ev.tbar_horizon = number(j, "tbar_horizon", ev.tbar_horizon);
  ev.record_dtbar = number(j, "record_dtbar", ev.record_dtbar);
  const long long nb = integer(j, "n_beta", static_cast<long long>(ev.n_beta));
  if (nb < 8) throw ValidationError("n_beta must be at least 8");
  ev.n_beta = static_cast<std::size_t>(nb);

  if (j.contains("frames") && j.contains("frame_times")) throw ValidationError("give either 'frames' or 'frame_times'");
  if (j.contains("frame_times")) ev.frame_times = numbers(j.at("frame_times"), "frame_times");
  const long long frames = integer(j, "frames", static_cast<long long>(rc.frame_count));
  if (frames < 0 || frames > 10000) throw ValidationError("'frames' must lie in [0, 10000]");
  rc.frame_count = static_cast<std::size_t>(frames);

  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ValidationError("'output_dir' must be a string");
    rc.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("export")) {
    const json& e = j.at("export");
    if (!e.is_object()) throw ValidationError("'export' must be an object");
    reject_unknown(e, {"csv", "mesh4d", "obj3d"}, "export");
    rc.exports.csv = flag(e, "csv", rc.exports.csv);
    rc.exports.mesh4d = flag(e, "mesh4d", rc.exports.mesh4d);
    rc.exports.obj3d = flag(e, "obj3d", rc.exports.obj3d);
  }
  if (j.contains("stereo_pole")) {
    const std::vector<double> p = numbers(j.at("stereo_pole"), "stereo_pole", 4);
    const Point4 pole{p[0], p[1], p[2], p[3]};
    if (!(norm(pole) > 0)) throw ValidationError("'stereo_pole' must be nonzero");
    rc.stereo_pole = pole / norm(pole);
  }
  validate(ev);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), fs::path(path).parent_path().string());
}

Point4 default_stereo_pole(const EvolutionResult& r) {
  if (r.predicted.kind == SingularityKind::circle_cylinder && norm(r.extinction_point) > 0) {
    return fiber_point(-1.0 * r.extinction_point, 1.0);
  }
  return -1.0 * fiber_point({0, 0, kBaseRadius}, 1.0);
}

RunOutcome execute_run(const RunConfig& config) {
  EvolutionConfig ev = config.evolution;
  SphereCurve c0 = std::holds_alternative<SphereCurve>(ev.initial_curve)
                       ? std::get<SphereCurve>(ev.initial_curve)
                       : make_family(std::get<CurveFamilySpec>(ev.initial_curve));
  if (ev.frame_times.empty()) {
    ev.frame_times = default_frame_times(predict(c0.area(), ev.r0), ev.r0, config.frame_count, ev.tbar_horizon);
  }
  ev.initial_curve = std::move(c0);

  const fs::path dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create " + dir.string() + ": " + ec.message());

  RunOutcome out;
  out.result = evolve(ev);
  const EvolutionResult& r = out.result;

  if (config.exports.csv) {
    std::ofstream f;
    open_for_write(f, dir / "records.csv");
    write_records_csv(f, r.records);
    out.files.push_back((dir / "records.csv").string());
  }
  const Point4 pole = config.stereo_pole ? *config.stereo_pole : default_stereo_pole(r);
  json frames = json::array();
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    const HopfTorusMesh& m = r.frames[i];
    json fr{{"index", i}, {"t", m.t}, {"tbar", r.frame_tbars[i]}, {"R", m.radius}, {"final", i + 1 == r.frames.size()}};
    if (config.exports.mesh4d) {
      std::ofstream f;
      open_for_write(f, dir / frame_name(i, "v4"));
      write_v4(f, m);
      out.files.push_back((dir / frame_name(i, "v4")).string());
      fr["v4"] = frame_name(i, "v4");
    }
    if (config.exports.obj3d) {
      std::ofstream f;
      open_for_write(f, dir / frame_name(i, "obj"));
      write_obj(f, m, pole);
      out.files.push_back((dir / frame_name(i, "obj")).string());
      fr["obj"] = frame_name(i, "obj");
    }
    frames.push_back(fr);
  }

  double drift = 0;
  for (const FlowRecord& rec : r.records) drift = std::max(drift, std::abs(rec.area - rec.area_predicted));
  const TypeIMonitor mon = typeI_monitor(r.records, r.predicted);
  const SingularityReport& p = r.predicted;
  const SingularityReport& m = r.measured;

  json report;
  report["a0"] = r.a0;
  report["r0"] = ev.r0;
  report["report"] = {{"kind", kind_name(m.kind)},
                      {"T", finite_or_null(m.T)},
                      {"limit_radius", m.limit_radius},
                      {"typeI_sup", finite_or_null(m.typeI_sup)},
                      {"limit_fit_residual", finite_or_null(m.limit_fit_residual)}};
  report["predicted"] = {{"kind", kind_name(p.kind)},
                         {"T", p.T},
                         {"tau", finite_or_null(p.tau)},
                         {"limit_radius", p.limit_radius}};
  report["comparison"] = json::array({comparison_row("T", p.T, m.T), comparison_row("tau", p.tau, m.tau),
                                      comparison_row("limit_radius", p.limit_radius, m.limit_radius)});
  report["extinct"] = r.extinct;
  report["final_tbar"] = r.final_tbar;
  report["final_t"] = r.frames.back().t;
  report["extinction_point"] = r.extinct ? json::array({r.extinction_point.x, r.extinction_point.y, r.extinction_point.z})
                                         : json(nullptr);
  report["area_drift"] = drift;
  report["typeI"] = {{"sup", mon.typeI_sup}, {"c_est", mon.c_est}, {"bounded", mon.bounded}, {"g_increasing", mon.g_increasing}};
  report["records"] = r.records.size();
  report["frames"] = frames;
  report["stereo_pole"] = json::array({pole.a, pole.b, pole.c, pole.d});
  out.report_json = report.dump(2);

  std::ofstream f;
  open_for_write(f, dir / "report.json");
  f << out.report_json << '\n';
  out.files.push_back((dir / "report.json").string());
  return out;
}

}  // namespace hopfmcf
