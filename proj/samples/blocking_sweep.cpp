// Copyright 2026 The erdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs robot blocking cleaners across a tolerance grid at a fixed budget and
// prints the median recall per cell.

#include <iostream>

#include "erdp/cleaners/sweep.hpp"

using namespace erdp;

int main() {
  SweepConfig cfg;
  cfg.strategy = StrategyKind::kBS1;
  cfg.t_grid = {0.02, 0.08, 0.32};
  cfg.budgets = {0.1};
  cfg.runs = 10;
  cfg.mode = "fidelity";
  const auto result = run_sweep(cfg);
  for (const auto& c : result.cells) {
    std::cout << "t=" << c.t << " B=" << format_budget(c.budget) << " median recall " << c.median
              << " [" << c.q1 << ", " << c.q3 << "], median answered " << c.answered_median
              << '\n';
  }
  return 0;
}
