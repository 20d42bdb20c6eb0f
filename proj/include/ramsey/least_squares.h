// Copyright 2026 The Ramsey Probe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAMSEY_LEAST_SQUARES_H
#define RAMSEY_LEAST_SQUARES_H

#include <functional>
#include <vector>

namespace ramsey {

/// Residuals r(x) and, optionally, the Jacobian dr_i/dx_j (row-major, one row
/// per residual). When `jacobian` is null the caller must not rely on it.
using ResidualFunction = std::function<void(const std::vector<double> &x, std::vector<double> &residuals,
                                            std::vector<std::vector<double>> *jacobian)>;

struct LeastSquaresOptions {
    int max_iterations = 200;
    double relative_step_tol = 1e-10;
    double initial_damping = 1e-3;
};

struct LeastSquaresResult {
    std::vector<double> x;
    double cost = 0.0;  // sum of squared residuals
    int iterations = 0;
    bool converged = false;
    std::vector<std::vector<double>> covariance_unscaled;  // (J^T J)^{-1}, empty if singular
};

/// Box-constrained Levenberg-Marquardt. Parameters are scaled by the box width
/// (or |x0| for unbounded directions); trial points are projected onto the box.
LeastSquaresResult bounded_least_squares(const ResidualFunction &fn, std::vector<double> x0,
                                         const std::vector<double> &lower, const std::vector<double> &upper,
                                         const LeastSquaresOptions &opts = {});

}  // namespace ramsey

#endif
