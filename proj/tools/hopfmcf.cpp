// hopfmcf: predict, run, lift, verify.
// Exit codes: 0 ok, 1 bad input, 2 numerical failure (or failed verification).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopfmcf/errors.hpp"
#include "hopfmcf/flow_composer.hpp"
#include "hopfmcf/mesh_io.hpp"
#include "hopfmcf/run_config.hpp"
#include "hopfmcf/verify.hpp"

using namespace hopfmcf;

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct PredictArgs {
  std::optional<double> a0, theta0;
  double r0 = 1;
};

int cmd_predict(const PredictArgs& args) {
  double a0 = 0;
  if (args.theta0) {
    const double th = *args.theta0;
    if (!(th > 0) || !(th < kPi)) throw ValidationError("theta0 must lie in (0, pi)");
    // Cap area on S^2(1/2); the smaller side is the enclosed one.
    const double cap = (kPi / 2) * (1 - std::cos(th));
    a0 = std::min(cap, kPi - cap);
  } else {
    a0 = *args.a0;
  }
  const SingularityReport r = predict(a0, args.r0);
  const bool clifford = r.kind == SingularityKind::point_clifford;
  std::printf("initial area A0      %s  (half the sphere is %s)\n", short_num(a0).c_str(), short_num(kPi / 2).c_str());
  std::printf("hypersphere radius   %s\n", short_num(args.r0).c_str());
  std::printf("singular time T      %s  (tbar clock: %s)\n", short_num(r.T).c_str(), short_num(r.tau).c_str());
  if (clifford) {
    std::printf("limit                the torus shrinks to the origin; rescaled to S^3(1) it tends to a Clifford torus\n");
  } else {
    std::printf("limit                a circle of radius %s; blown up, a round cylinder of radius %s\n",
                short_num(r.limit_radius).c_str(), short_num(r.limit_radius * std::sqrt(a0 / kPi)).c_str());
  }
  std::printf("\nkind=%s\na0=%s\nr0=%s\nT=%s\ntau=%s\nlimit_radius=%s\n", kind_name(r.kind), num(a0).c_str(),
              num(args.r0).c_str(), num(r.T).c_str(), num(r.tau).c_str(), num(r.limit_radius).c_str());
  return 0;
}

int cmd_run(const std::string& path, const std::string& output_dir) {
  RunConfig rc = load_run_config(path);
  if (!output_dir.empty()) rc.output_dir = output_dir;
  const RunOutcome out = execute_run(rc);
  const EvolutionResult& r = out.result;
  double drift = 0;
  for (const FlowRecord& rec : r.records) drift = std::max(drift, std::abs(rec.area - rec.area_predicted));
  std::printf("kind           %s\n", kind_name(r.predicted.kind));
  std::printf("A0             %s\n", short_num(r.a0).c_str());
  std::printf("T predicted    %s\n", short_num(r.predicted.T).c_str());
  if (r.extinct) {
    const double rel = std::abs(r.measured.T - r.predicted.T) / r.predicted.T;
    std::printf("T measured     %s  (tbar %s, relative error %.6f)\n", short_num(r.measured.T).c_str(),
                short_num(r.final_tbar).c_str(), rel);
    std::printf("limit radius   %s  (predicted %s)\n", short_num(r.measured.limit_radius).c_str(),
                short_num(r.predicted.limit_radius).c_str());
  } else {
    std::printf("no extinction up to tbar %s (t %s)\n", short_num(r.final_tbar).c_str(),
                short_num(r.frames.back().t).c_str());
  }
  std::printf("area drift     %.3e\n", drift);
  std::printf("records        %zu\nframes         %zu\n", r.records.size(), r.frames.size());
  std::printf("output         %s (%zu files)\n", rc.output_dir.c_str(), out.files.size());
  return 0;
}

struct LiftArgs {
  std::string family = "great_circle";
  double theta0 = kPi / 4;
  std::vector<double> axis{0, 0, 1};
  int mode = 3;
  double amplitude = 0.05;
  std::size_t n = 256;
  std::string file;
  std::size_t n_beta = 64;
  std::string v4, obj;
};

int cmd_lift(const LiftArgs& a) {
  CurveFamilySpec spec;
  if (!a.file.empty()) {
    spec = CurveFamilySpec::point_list(a.file);
  } else if (a.family == "latitude") {
    spec = CurveFamilySpec::latitude(a.theta0, a.n);
  } else if (a.family == "great_circle") {
    if (a.axis.size() != 3) throw ValidationError("--axis needs three numbers");
    spec = CurveFamilySpec::great_circle(a.n, {a.axis[0], a.axis[1], a.axis[2]});
  } else if (a.family == "perturbed_great_circle") {
    spec = CurveFamilySpec::perturbed_great_circle(a.mode, a.amplitude, a.n);
  } else {
    throw ValidationError("unknown family '" + a.family + "'");
  }
  const SphereCurve c = make_family(spec);
  if (!is_simple(c)) throw ValidationError("curve is not simple");
  const HorizontalLift lift = horizontal_lift(c);
  const HopfTorusMesh mesh = build_torus(lift, a.n_beta, 1.0);
  const double area = c.area();
  std::printf("points               %zu\n", c.size());
  std::printf("enclosed area        %s\n", short_num(area).c_str());
  std::printf("holonomy phase       %s  (2A mod 2pi = %s)\n", short_num(lift.holonomy_phase).c_str(),
              short_num(std::fmod(2 * c.left_area(), 2 * kPi)).c_str());
  std::printf("\nholonomy=%s\narea=%s\nleft_area=%s\nhorizontality=%s\nlagrangian_residual=%s\n",
              num(lift.holonomy_phase).c_str(), num(area).c_str(), num(c.left_area()).c_str(),
              num(horizontality_residual(lift)).c_str(), num(check_lagrangian(mesh)).c_str());
  if (!a.v4.empty()) {
    std::ofstream f(a.v4);
    if (!f) throw ValidationError("cannot write " + a.v4);
    write_v4(f, mesh);
  }
  if (!a.obj.empty()) {
    std::ofstream f(a.obj);
    if (!f) throw ValidationError("cannot write " + a.obj);
    write_obj(f, mesh, -1.0 * fiber_point({0, 0, kBaseRadius}, 1.0));
  }
  return 0;
}

int cmd_verify(const VerifyOptions& opts) {
  int failed = 0, total = 0;
  run_verification(opts, [&](const CriterionResult& r) {
    std::printf("%s  %2d %-18s %s\n      expected: %s\n      tolerance: %s  (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.measured.c_str(), r.expected.c_str(), r.tolerance.c_str(), r.seconds);
    std::fflush(stdout);
    failed += !r.pass;
    ++total;
  });
  if (total == 0) throw ValidationError("--filter matched no criterion");
  std::printf("%d passed, %d failed\n", total - failed, failed);
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean curvature flow of Hopf tori through the curve shortening flow of their base curves"};
  app.require_subcommand(1);

  PredictArgs pa;
  auto* predict_cmd = app.add_subcommand("predict", "singular time and limit for a given initial area");
  auto* a0_opt = predict_cmd->add_option("--a0", pa.a0, "enclosed area of the base curve on S^2(1/2), in (0, pi/2]");
  auto* th_opt = predict_cmd->add_option("--theta0", pa.theta0, "polar angle of a latitude circle (radians)");
  a0_opt->excludes(th_opt);
  predict_cmd->add_option("--r0", pa.r0, "radius of the initial hypersphere")->capture_default_str();

  std::string config_path, output_dir;
  auto* run_cmd = app.add_subcommand("run", "evolve a configuration and write records, frames and a report");
  run_cmd->add_option("config", config_path, "JSON run configuration")->required();
  run_cmd->add_option("--output-dir", output_dir, "override output_dir from the config");

  LiftArgs la;
  auto* lift_cmd = app.add_subcommand("lift", "horizontal lift and Hopf torus of a base curve");
  lift_cmd->add_option("--family", la.family, "latitude, great_circle or perturbed_great_circle")->capture_default_str();
  lift_cmd->add_option("--theta0", la.theta0, "latitude polar angle")->capture_default_str();
  lift_cmd->add_option("--axis", la.axis, "great circle axis x y z")->expected(3);
  lift_cmd->add_option("--mode", la.mode, "perturbation mode")->capture_default_str();
  lift_cmd->add_option("--amplitude", la.amplitude, "perturbation amplitude")->capture_default_str();
  lift_cmd->add_option("-N,--points", la.n, "points on the curve")->capture_default_str();
  lift_cmd->add_option("--file", la.file, "point list, one 'x y z' per line (overrides --family)");
  lift_cmd->add_option("--n-beta", la.n_beta, "rows around the fiber")->capture_default_str();
  lift_cmd->add_option("--v4", la.v4, "write the torus as a .v4 mesh");
  lift_cmd->add_option("--obj", la.obj, "write a stereographic OBJ");

  VerifyOptions vo;
  double cfl = 0;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
  verify_cmd->add_option("--filter", vo.filter, "comma-separated criterion numbers or name fragments");
  auto* cfl_opt = verify_cmd->add_option("--cfl", cfl, "override the step-size factor of the flow runs");
  verify_cmd->add_option("-N,--points", vo.resolution, "curve resolution")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*predict_cmd) {
      if (!pa.a0 && !pa.theta0) throw ValidationError("give --a0 or --theta0");
      return cmd_predict(pa);
    }
    if (*run_cmd) return cmd_run(config_path, output_dir);
    if (*lift_cmd) return cmd_lift(la);
    if (*verify_cmd) {
      if (*cfl_opt) vo.cfl = cfl;
      return cmd_verify(vo);
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 1;
}
