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

#include "ramsey/bessel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ramsey/errors.h"

namespace ramsey {

namespace {

// Ascending series; only used where the terms do not cancel badly.
double series(int n, double x) {
    double half = 0.5 * x;
    double term = 1;
    for (int k = 1; k <= n; ++k) {
        term *= half / k;
    }
    double sum = term;
    double q = half * half;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// Miller's downward recurrence normalised by J_0 + 2 sum_k J_{2k} = 1.
double miller(int n, double x) {
    double big = std::max(static_cast<double>(n), x);
    int start = 2 * ((static_cast<int>(big + 30 + 10 * std::sqrt(big)) + 1) / 2);
    double next = 0;  // J_{k+1}
    double cur = 1e-300;  // J_k
    double result = 0;
    double norm = 0;
    for (int k = start; k > 0; --k) {
        double prev = 2.0 * k / x * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (std::abs(cur) > 1e200) {
            cur *= 1e-200;
            next *= 1e-200;
            result *= 1e-200;
            norm *= 1e-200;
        }
        if (k - 1 == n) {
            result = cur;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) {
            norm += 2 * cur;
        }
    }
    norm += cur;
    return result / norm;
}

void check_envelope(int order, double x) {
    if (order < -kBesselMaxOrder || order > kBesselMaxOrder || !(std::abs(x) <= kBesselMaxArg)) {
        throw ConfigError("bessel_j: (order=" + std::to_string(order) + ", x=" + std::to_string(x) +
                          ") outside the supported envelope |order| <= 20, |x| <= 30");
    }
}

double eval(int order, double x) {
    double sign = 1;
    int n = order;
    if (n < 0) {
        n = -n;
        if (n % 2) {
            sign = -sign;
        }
    }
    double ax = x;
    if (ax < 0) {
        ax = -ax;
        if (n % 2) {
            sign = -sign;
        }
    }
    if (ax == 0) {
        return n == 0 ? 1.0 : 0.0;
    }
    double v = ax <= 1.0 ? series(n, ax) : miller(n, ax);
    return sign * v;
}

}  // namespace

double bessel_j(int order, double x) {
    check_envelope(order, x);
    return eval(order, x);
}

double bessel_j_derivative(int order, double x) {
    check_envelope(order, x);
    return 0.5 * (eval(order - 1, x) - eval(order + 1, x));
}

}  // namespace ramsey
