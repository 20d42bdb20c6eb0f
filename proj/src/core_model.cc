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

#include "ramsey/core_model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ramsey/errors.h"

namespace ramsey {

namespace {

void require(bool ok, const char *field, const char *what) {
    if (!ok) {
        throw ConfigError(std::string(field) + ": " + what);
    }
}

}  // namespace

void MeasurementConfig::validate() const {
    require(std::isfinite(t_ramsey) && t_ramsey > 0, "measurement.t_R", "must be finite and > 0");
    require(std::isfinite(t_cycle) && t_cycle >= t_ramsey, "measurement.t_cyc", "must be finite and >= t_R");
    require(std::isfinite(phi_ramsey), "measurement.phi_R", "must be finite");
    require(t2 > 0 && !std::isnan(t2), "measurement.T2", "must be > 0 or infinite");
    require(num_outcomes >= 2, "measurement.N", "must be >= 2");
    require(num_repetitions >= 1, "measurement.K", "must be >= 1");
}

void ModulationConfig::validate() const {
    require(std::isfinite(amplitude) && amplitude >= 0, "modulation.a_p", "must be finite and >= 0");
    require(std::isfinite(angular_freq) && angular_freq > 0, "modulation.omega_p", "must be finite and > 0");
    require(phase >= 0 && phase < kTwoPi, "modulation.phi_p", "must lie in [0, 2pi)");
}

DerivedModulation derive_modulation(const ModulationConfig &mod, const MeasurementConfig &meas) {
    double half_angle = 0.5 * mod.angular_freq * meas.t_ramsey;
    DerivedModulation dm;
    dm.phase_amplitude = 2 * mod.amplitude / mod.angular_freq * std::sin(half_angle);
    dm.shifted_phase = mod.phase + half_angle;
    return dm;
}

double periodic_phase(std::uint64_t k, const DerivedModulation &dm, const MeasurementConfig &meas,
                      const ModulationConfig &mod) {
    double arg = static_cast<double>(k) * mod.angular_freq * meas.t_cycle + dm.shifted_phase;
    return dm.phase_amplitude * std::cos(arg);
}

double outcome_probability(double theta, const MeasurementConfig &meas) {
    double visibility = meas.coherent() ? 1.0 : std::exp(-meas.t_ramsey / meas.t2);
    double p = 0.5 * (1 + visibility * std::cos(meas.phi_ramsey + theta));
    // Rounding can push 0.5 * (1 + cos) a hair outside [0, 1].
    return std::min(1.0, std::max(0.0, p));
}

}  // namespace ramsey
