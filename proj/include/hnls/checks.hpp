#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hnls/io.hpp"

namespace hnls {

inline constexpr int kCriterionCount = 12;

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;
  bool passed() const;
};

std::string criterion_title(int id);

/// Runs one acceptance criterion with fixed parameters. The seed only moves
/// the random states (criteria 1, 8, 11). Numerical errors propagate.
Criterion run_criterion(int id, std::uint64_t seed = 0);

}  // namespace hnls
