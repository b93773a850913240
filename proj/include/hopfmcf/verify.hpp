// Acceptance suite on canonical inputs.  Each criterion reports what was
// measured, what was expected and the tolerance used.  Long flows are run
// once and shared between the criteria that need them.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hopfmcf {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string expected;
  std::string tolerance;
  double seconds = 0;
};

struct VerifyOptions {
  // Comma-separated; a criterion runs if a token is its number or a substring of its name.
  std::string filter;
  // Overrides the step-size factor of every flow run (not the built-in cfl = 2 control).
  std::optional<double> cfl;
  std::size_t resolution = 512;
};

// In order: area-law, latitude-exact, extinction, limit-radius, clifford-limit,
// cylinder-limit, type-one, hopf-layer, structural, negative-controls.
const std::vector<std::string>& criterion_names();

bool criterion_selected(const VerifyOptions& options, int id);

std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace hopfmcf
