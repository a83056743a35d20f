// Copyright 2026 The lindblad-trotter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

namespace lindblad {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Ordinary least squares of y on x; needs >= 3 points.
FitResult fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

// Least squares on (log x, log y). Every value must be positive; the error
// names the offending row.
FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace lindblad
