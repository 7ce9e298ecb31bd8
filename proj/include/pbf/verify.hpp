#pragma once

#include <functional>
#include <string>
#include <vector>

namespace pbf {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

/// Runs the acceptance criteria on the pendulum benchmark (x0 = 0, dt = 1e-3,
/// 20 s horizon). `on_result` is invoked as each criterion finishes.
std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace pbf
