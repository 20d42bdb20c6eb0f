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

#ifndef RAMSEY_SIMULATOR_H
#define RAMSEY_SIMULATOR_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ramsey/core_model.h"
#include "ramsey/noise_sources.h"

namespace ramsey {

/// Every stochastic channel that can act on a run. Empty/none entries are off.
struct NoiseSpec {
    TlsEnsemble tls;
    std::optional<OuParams> qubit_ou;
    ModFreqNoiseSpec modfreq;
    std::optional<CycleJitterSpec> cycle_jitter;

    bool has_random_phase() const {
        return !tls.empty() || qubit_ou.has_value();
    }
    bool has_timing_noise() const {
        return modfreq.kind != ModFreqNoiseKind::kNone || cycle_jitter.has_value();
    }
    void validate() const;
};

/// Bit sequence packed least-significant-bit first: outcome k lives in byte
/// k / 8 at bit k % 8.
class PackedBits {
   public:
    PackedBits() = default;
    explicit PackedBits(std::uint64_t size) : size_(size), bytes_((size + 7) / 8, 0) {
    }
    PackedBits(std::uint64_t size, std::vector<std::uint8_t> bytes);

    std::uint64_t size() const {
        return size_;
    }
    bool get(std::uint64_t k) const {
        return (bytes_[k >> 3] >> (k & 7)) & 1;
    }
    void set(std::uint64_t k, bool v) {
        std::uint8_t mask = static_cast<std::uint8_t>(1u << (k & 7));
        if (v) {
            bytes_[k >> 3] |= mask;
        } else {
            bytes_[k >> 3] &= static_cast<std::uint8_t>(~mask);
        }
    }
    std::uint64_t count_ones() const;
    const std::vector<std::uint8_t> &bytes() const {
        return bytes_;
    }
    bool operator==(const PackedBits &other) const = default;

   private:
    std::uint64_t size_ = 0;
    std::vector<std::uint8_t> bytes_;
};

struct OutcomeRun {
    PackedBits bits;
    std::uint64_t stream_id = 0;
    double phi_p_used = 0.0;

    bool operator==(const OutcomeRun &other) const = default;
};

struct Experiment {
    std::vector<OutcomeRun> runs;
    MeasurementConfig meas;
    ModulationConfig mod;
    NoiseSpec noise;
    std::uint64_t master_seed = 0;
};

/// Per-cycle inputs to the total phase. Empty spans mean the channel is off.
struct PhaseComponents {
    double phase_amplitude = 0.0;  // A_p
    double shifted_phase = 0.0;    // phi~_p
    double angular_freq = 0.0;     // omega_p
    double t_cycle = 0.0;
    std::span<const double> modfreq_phase;  // Phi_k
    std::span<const double> cycle_offset;   // tau_k
    std::span<const double> random_phase;   // theta_k^(r)
};

/// theta_k = A_p cos(k omega_p t_cyc + Phi_k + omega_p tau_k + phi~_p) + theta_k^(r).
double total_phase(std::uint64_t k, const PhaseComponents &c);

/// Samples runs for one configuration. When no channel is random and the
/// modulation phase is fixed, the outcome probabilities are tabulated once and
/// shared by all runs.
class SequenceSampler {
   public:
    SequenceSampler(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise);

    /// Repetition `stream_id` under `master_seed`; identical inputs give identical bits.
    OutcomeRun sample(std::uint64_t master_seed, std::uint64_t stream_id) const;

    /// Phase sequence theta_k for one repetition (before Bernoulli sampling).
    std::vector<double> phases(std::uint64_t master_seed, std::uint64_t stream_id, double *phi_p_used = nullptr) const;

   private:
    MeasurementConfig meas_;
    ModulationConfig mod_;
    NoiseSpec noise_;
    std::vector<double> fixed_probability_;
};

OutcomeRun run_sequence(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise,
                        std::uint64_t master_seed, std::uint64_t stream_id);

/// K = meas.num_repetitions runs with stream_id = repetition index. The result
/// does not depend on `parallelism` (0 = hardware concurrency).
Experiment run_experiment(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise,
                          std::uint64_t master_seed, std::size_t parallelism = 0);

/// Streams the runs of an experiment without storing them. `visit` may be
/// called concurrently from several threads, each call with a distinct index.
void for_each_run(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise,
                  std::uint64_t master_seed, std::size_t parallelism,
                  const std::function<void(std::uint64_t, const OutcomeRun &)> &visit);

}  // namespace ramsey

#endif
