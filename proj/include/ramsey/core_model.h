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

#ifndef RAMSEY_CORE_MODEL_H
#define RAMSEY_CORE_MODEL_H

#include <cstdint>
#include <limits>

namespace ramsey {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2 * kPi;
inline constexpr double kInfiniteT2 = std::numeric_limits<double>::infinity();

/// Timing and phase parameters of the periodically repeated Ramsey protocol.
///
/// Times share one arbitrary unit; phases are radians. Defaults reproduce the
/// reference setup: t_R = 1, t_cyc = 3 t_R, coherent regime, N = 1e5.
struct MeasurementConfig {
    double t_ramsey = 1.0;
    double t_cycle = 3.0;
    double phi_ramsey = 0.0;
    double t2 = kInfiniteT2;
    std::uint64_t num_outcomes = 100000;
    std::uint64_t num_repetitions = 1;

    bool coherent() const {
        return t2 == kInfiniteT2;
    }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

enum class PhaseMode {
    kFixed,
    kUniformRandomPerRun,
};

/// Sinusoidal modulation of the qubit frequency, a_p cos(omega_p t + phi_p).
struct ModulationConfig {
    double amplitude = 1.0;        // a_p, rad/time
    double angular_freq = 1e-3;    // omega_p, rad/time
    double phase = 0.0;            // phi_p in [0, 2pi)
    PhaseMode phase_mode = PhaseMode::kFixed;

    void validate() const;
};

/// Phase-oscillation amplitude and shifted phase seen by the qubit per Ramsey window.
struct DerivedModulation {
    double phase_amplitude = 0.0;  // A_p
    double shifted_phase = 0.0;    // phi_p + omega_p t_R / 2
};

DerivedModulation derive_modulation(const ModulationConfig &mod, const MeasurementConfig &meas);

/// Deterministic phase accumulated in the k-th Ramsey window.
double periodic_phase(std::uint64_t k, const DerivedModulation &dm, const MeasurementConfig &meas,
                      const ModulationConfig &mod);

/// Probability of reading "1" after a Ramsey window that accumulated phase theta.
double outcome_probability(double theta, const MeasurementConfig &meas);

}  // namespace ramsey

#endif
