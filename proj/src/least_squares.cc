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

#include "ramsey/least_squares.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ramsey/errors.h"

namespace ramsey {

namespace {

struct Evaluation {
    Eigen::VectorXd r;
    Eigen::MatrixXd j;  // with respect to the scaled variables
    double cost = 0.0;
};

}  // namespace

LeastSquaresResult bounded_least_squares(const ResidualFunction &fn, std::vector<double> x0,
                                         const std::vector<double> &lower, const std::vector<double> &upper,
                                         const LeastSquaresOptions &opts) {
    const std::size_t p = x0.size();
    if (lower.size() != p || upper.size() != p) {
        throw ConfigError("bounded_least_squares: bound dimensions do not match");
    }
    std::vector<double> scale(p);
    for (std::size_t j = 0; j < p; ++j) {
        if (!(lower[j] <= upper[j])) {
            throw ConfigError("bounded_least_squares: empty box");
        }
        x0[j] = std::clamp(x0[j], lower[j], upper[j]);
        double width = upper[j] - lower[j];
        scale[j] = std::isfinite(width) && width > 0 ? width : std::max(std::abs(x0[j]), 1e-12);
    }

    auto evaluate = [&](const std::vector<double> &x, bool with_jacobian) {
        Evaluation ev;
        std::vector<double> r;
        std::vector<std::vector<double>> jac;
        fn(x, r, with_jacobian ? &jac : nullptr);
        ev.r = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
        ev.cost = ev.r.squaredNorm();
        if (!with_jacobian) {
            return ev;
        }
        const auto rows = static_cast<Eigen::Index>(r.size());
        ev.j.resize(rows, static_cast<Eigen::Index>(p));
        if (jac.size() == r.size()) {
            for (Eigen::Index i = 0; i < rows; ++i) {
                for (std::size_t k = 0; k < p; ++k) {
                    ev.j(i, static_cast<Eigen::Index>(k)) = jac[static_cast<std::size_t>(i)][k] * scale[k];
                }
            }
            return ev;
        }
        // Central differences in the scaled variables.
        for (std::size_t k = 0; k < p; ++k) {
            double h = 1e-7;
            auto xp = x;
            auto xm = x;
            xp[k] += h * scale[k];
            xm[k] -= h * scale[k];
            std::vector<double> rp;
            std::vector<double> rm;
            fn(xp, rp, nullptr);
            fn(xm, rm, nullptr);
            for (Eigen::Index i = 0; i < rows; ++i) {
                auto ii = static_cast<std::size_t>(i);
                ev.j(i, static_cast<Eigen::Index>(k)) = (rp[ii] - rm[ii]) / (2 * h);
            }
        }
        return ev;
    };

    LeastSquaresResult res;
    std::vector<double> x = x0;
    Evaluation cur = evaluate(x, true);
    if (!std::isfinite(cur.cost)) {
        throw NumericError("bounded_least_squares: non-finite residual at the starting point");
    }
    double lambda = opts.initial_damping;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (cur.cost == 0.0) {
            res.converged = true;
            break;
        }
        Eigen::MatrixXd a = cur.j.transpose() * cur.j;
        Eigen::VectorXd g = cur.j.transpose() * cur.r;
        bool accepted = false;
        bool stalled = false;
        while (!accepted) {
            Eigen::MatrixXd damped = a;
            for (Eigen::Index k = 0; k < damped.rows(); ++k) {
                damped(k, k) += lambda * std::max(a(k, k), 1e-12);
            }
            Eigen::VectorXd step = damped.ldlt().solve(-g);
            std::vector<double> trial(p);
            double max_rel = 0.0;
            for (std::size_t k = 0; k < p; ++k) {
                trial[k] = std::clamp(x[k] + step(static_cast<Eigen::Index>(k)) * scale[k], lower[k], upper[k]);
                double denom = std::max(std::abs(x[k]), 1e-300);
                max_rel = std::max(max_rel, std::abs(trial[k] - x[k]) / denom);
            }
            Evaluation next = evaluate(trial, false);
            if (std::isfinite(next.cost) && next.cost < cur.cost) {
                x = trial;
                cur = evaluate(x, true);
                lambda = std::max(lambda / 3, 1e-12);
                accepted = true;
                if (max_rel < opts.relative_step_tol) {
                    stalled = true;
                }
            } else {
                if (max_rel < opts.relative_step_tol || lambda > 1e16) {
                    stalled = true;
                    break;
                }
                lambda *= 4;
            }
        }
        if (stalled) {
            res.converged = true;
            ++it;
            break;
        }
    }

    res.x = x;
    res.cost = cur.cost;
    res.iterations = it;

    Eigen::MatrixXd a = cur.j.transpose() * cur.j;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
        Eigen::MatrixXd inv = lu.inverse();
        res.covariance_unscaled.assign(p, std::vector<double>(p));
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t k = 0; k < p; ++k) {
                res.covariance_unscaled[i][k] =
                    inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * scale[i] * scale[k];
            }
        }
    }
    return res;
}

}  // namespace ramsey
