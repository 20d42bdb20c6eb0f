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

#ifndef RAMSEY_BESSEL_H
#define RAMSEY_BESSEL_H

namespace ramsey {

inline constexpr int kBesselMaxOrder = 20;
inline constexpr double kBesselMaxArg = 30.0;

/// Bessel function of the first kind J_order(x) for |order| <= 20, |x| <= 30,
/// absolute error below 1e-12. Negative orders use J_{-n} = (-1)^n J_n.
/// Throws ConfigError outside that envelope.
double bessel_j(int order, double x);

/// dJ_n/dx = (J_{n-1} - J_{n+1}) / 2.
double bessel_j_derivative(int order, double x);

}  // namespace ramsey

#endif
