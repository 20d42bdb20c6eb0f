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

#ifndef RAMSEY_CONFIG_H
#define RAMSEY_CONFIG_H

#include <complex>
#include <cstdint>
#include <string>

#include "ramsey/analytic_spectra.h"
#include "ramsey/core_model.h"
#include "ramsey/simulator.h"

namespace ramsey {

struct ExecutionConfig {
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0: all hardware threads
};

/// One JSON document with sections measurement, modulation, noise, execution.
///
///   measurement: t_R, t_cyc, phi_R, T2 (number or null for infinity), N, K
///   modulation:  a_p, omega_p, phi_p, phase_mode ("fixed" | "random")
///   noise:       tls [{V, W01, W10}], qubit_ou {variance, tau_corr, dt},
///                modfreq {kind ("none" | "white" | "ou"), sigma2, dt,
///                variance, tau_corr}, cycle_jitter {std_dev},
///                zeta_minus, zeta_plus
///   execution:   seed, threads
///
/// Every key is optional and defaults to the reference setup; unknown keys
/// are errors.
struct RunConfig {
    MeasurementConfig meas;
    ModulationConfig mod;
    NoiseSpec noise;
    ExecutionConfig exec;
    double zeta_minus = 1.0;
    double zeta_plus = 1.0;
};

/// Throws ConfigError with the dotted path of the offending field.
RunConfig parse_config(const std::string &json_text);
RunConfig load_config(const std::string &path);

/// Analytic spectrum matching a config: coherence factors and background from
/// TLS and Gaussian qubit noise, Lorentzian peaks when timing noise is on.
SpectrumModel spectrum_model_for(const RunConfig &cfg);

/// Canonical JSON text of a config, accepted back by parse_config.
std::string config_to_json(const RunConfig &cfg);

}  // namespace ramsey

#endif
