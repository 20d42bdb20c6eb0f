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

#ifndef RAMSEY_NOISE_SOURCES_H
#define RAMSEY_NOISE_SOURCES_H

#include <cstdint>
#include <optional>
#include <vector>

#include "ramsey/core_model.h"
#include "ramsey/rng.h"

namespace ramsey {

/// Two-level fluctuator dispersively coupled to the qubit.
///
/// State 0 carries tau_z = +1 and state 1 carries tau_z = -1, so the
/// stationary mean of tau_z is (W10 - W01) / W.
struct TlsParams {
    double coupling = 0.0;  // V, rad/time
    double rate_01 = 1.0;   // W01, 0 -> 1
    double rate_10 = 1.0;   // W10, 1 -> 0

    double total_rate() const {
        return rate_01 + rate_10;
    }
    double rate_asymmetry() const {
        return rate_10 - rate_01;
    }
    /// w = 2 sqrt(W01 W10) / W; the tau_z variance is w^2.
    double symmetry_factor() const;
    double mean_tau_z() const {
        return rate_asymmetry() / total_rate();
    }

    void validate() const;
};

using TlsEnsemble = std::vector<TlsParams>;

/// Ornstein-Uhlenbeck process with stationary variance `variance` (D) and
/// correlation time tau_corr. A missing dt means 0.01 t_R.
struct OuParams {
    double variance = 0.0;
    double tau_corr = 1.0;
    std::optional<double> dt;

    double resolved_dt(const MeasurementConfig &meas) const {
        return dt.value_or(0.01 * meas.t_ramsey);
    }
    void validate() const;
};

enum class ModFreqNoiseKind {
    kNone,
    kWhite,
    kOu,
};

/// Noise xi(t) of the modulation frequency.
struct ModFreqNoiseSpec {
    ModFreqNoiseKind kind = ModFreqNoiseKind::kNone;
    double sigma2 = 0.0;            // white intensity, <xi(t) xi(0)> = sigma2 delta(t)
    std::optional<double> dt_white; // default 0.1 t_R
    OuParams ou;                    // used when kind == kOu

    double resolved_dt(const MeasurementConfig &meas) const;
    void validate() const;
};

/// Cycle-to-cycle jitter of the measurement period; iid Gaussian deviations.
struct CycleJitterSpec {
    double std_dev = 0.0;
    void validate() const;
};

/// Switching history of one fluctuator on [0, t_end].
struct TelegraphPath {
    int initial_state = 0;
    std::vector<double> switch_times;
};

/// Exact event-driven telegraph trajectory started from the stationary distribution.
TelegraphPath simulate_telegraph(const TlsParams &tls, double t_end, RngStream &rng);

/// Phase theta_k^(r) accumulated in each Ramsey window from an ensemble of TLSs.
std::vector<double> sample_tls_phases(const TlsEnsemble &ens, const MeasurementConfig &meas, RngStream &rng);

/// Euler-Maruyama OU generator, initialised from the stationary law.
class OuProcess {
   public:
    OuProcess(const OuParams &params, double dt, RngStream &rng);

    double value() const {
        return xi_;
    }
    double step();

   private:
    double decay_;
    double kick_;
    double xi_;
    RngStream *rng_;
};

/// Accumulated modulation phase Phi_k = int_0^{k t_cyc} xi(t) dt, k = 0..N-1.
std::vector<double> sample_modfreq_path(const ModFreqNoiseSpec &spec, const MeasurementConfig &meas, RngStream &rng);

/// Accumulated timing offsets tau_k = sum_{n<=k} delta t_cyc^(n), k = 0..N-1.
std::vector<double> sample_cycle_jitter(const CycleJitterSpec &spec, std::uint64_t n, RngStream &rng);

/// Gaussian (OU) qubit frequency noise integrated over each Ramsey window.
std::vector<double> sample_gaussian_qubit_noise(const OuParams &ou, const MeasurementConfig &meas, RngStream &rng);

/// Number of integration steps per cycle for a requested step; the step is
/// shrunk to t_cyc / steps so every cycle boundary lands on the grid.
std::uint64_t steps_per_cycle(double dt, const MeasurementConfig &meas);

}  // namespace ramsey

#endif
