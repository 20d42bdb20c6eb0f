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

#include "ramsey/simulator.h"

#include <bit>
#include <cmath>
#include <utility>

#include "ramsey/errors.h"
#include "ramsey/parallel.h"
#include "ramsey/rng.h"

namespace ramsey {

void NoiseSpec::validate() const {
    for (const auto &t : tls) {
        t.validate();
    }
    if (qubit_ou) {
        qubit_ou->validate();
    }
    modfreq.validate();
    if (cycle_jitter) {
        cycle_jitter->validate();
    }
}

PackedBits::PackedBits(std::uint64_t size, std::vector<std::uint8_t> bytes) : size_(size), bytes_(std::move(bytes)) {
    if (bytes_.size() != (size + 7) / 8) {
        throw ConfigError("packed bit payload has the wrong length");
    }
}

std::uint64_t PackedBits::count_ones() const {
    std::uint64_t n = 0;
    for (auto b : bytes_) {
        n += static_cast<std::uint64_t>(std::popcount(b));
    }
    return n;
}

double total_phase(std::uint64_t k, const PhaseComponents &c) {
    double arg = static_cast<double>(k) * c.angular_freq * c.t_cycle + c.shifted_phase;
    if (!c.modfreq_phase.empty()) {
        arg += c.modfreq_phase[k];
    }
    if (!c.cycle_offset.empty()) {
        arg += c.angular_freq * c.cycle_offset[k];
    }
    double theta = c.phase_amplitude * std::cos(arg);
    if (!c.random_phase.empty()) {
        theta += c.random_phase[k];
    }
    return theta;
}

SequenceSampler::SequenceSampler(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise)
    : meas_(meas), mod_(mod), noise_(noise) {
    meas_.validate();
    mod_.validate();
    noise_.validate();
    bool deterministic = !noise_.has_random_phase() && !noise_.has_timing_noise() &&
                         mod_.phase_mode == PhaseMode::kFixed;
    if (deterministic) {
        auto theta = phases(0, 0);
        fixed_probability_.resize(theta.size());
        for (std::size_t k = 0; k < theta.size(); ++k) {
            fixed_probability_[k] = outcome_probability(theta[k], meas_);
        }
    }
}

std::vector<double> SequenceSampler::phases(std::uint64_t master_seed, std::uint64_t stream_id,
                                            double *phi_p_used) const {
    ModulationConfig mod = mod_;
    if (mod.phase_mode == PhaseMode::kUniformRandomPerRun) {
        RngStream phase_rng(master_seed, stream_id, RngChannel::kModPhase);
        mod.phase = kTwoPi * phase_rng.uniform();
    }
    if (phi_p_used) {
        *phi_p_used = mod.phase;
    }
    DerivedModulation dm = derive_modulation(mod, meas_);

    std::vector<double> modfreq_phase, cycle_offset, random_phase;
    if (noise_.modfreq.kind != ModFreqNoiseKind::kNone) {
        RngStream rng(master_seed, stream_id, RngChannel::kModFreq);
        modfreq_phase = sample_modfreq_path(noise_.modfreq, meas_, rng);
    }
    if (noise_.cycle_jitter) {
        RngStream rng(master_seed, stream_id, RngChannel::kCycleJitter);
        cycle_offset = sample_cycle_jitter(*noise_.cycle_jitter, meas_.num_outcomes, rng);
    }
    if (!noise_.tls.empty()) {
        RngStream rng(master_seed, stream_id, RngChannel::kTls);
        random_phase = sample_tls_phases(noise_.tls, meas_, rng);
    }
    if (noise_.qubit_ou) {
        RngStream rng(master_seed, stream_id, RngChannel::kQubitOu);
        auto gauss = sample_gaussian_qubit_noise(*noise_.qubit_ou, meas_, rng);
        if (random_phase.empty()) {
            random_phase = std::move(gauss);
        } else {
            for (std::size_t k = 0; k < gauss.size(); ++k) {
                random_phase[k] += gauss[k];
            }
        }
    }

    PhaseComponents c;
    c.phase_amplitude = dm.phase_amplitude;
    c.shifted_phase = dm.shifted_phase;
    c.angular_freq = mod.angular_freq;
    c.t_cycle = meas_.t_cycle;
    c.modfreq_phase = modfreq_phase;
    c.cycle_offset = cycle_offset;
    c.random_phase = random_phase;

    std::vector<double> theta(meas_.num_outcomes);
    for (std::uint64_t k = 0; k < meas_.num_outcomes; ++k) {
        theta[k] = total_phase(k, c);
    }
    return theta;
}

OutcomeRun SequenceSampler::sample(std::uint64_t master_seed, std::uint64_t stream_id) const {
    OutcomeRun run;
    run.stream_id = stream_id;
    run.bits = PackedBits(meas_.num_outcomes);
    RngStream rng(master_seed, stream_id, RngChannel::kOutcomes);

    auto draw = [&](std::uint64_t k, double p) {
        // Outcome "1" iff p >= r with r ~ U(0, 1).
        if (p >= rng.uniform()) {
            run.bits.set(k, true);
        }
    };

    if (!fixed_probability_.empty()) {
        run.phi_p_used = mod_.phase;
        for (std::uint64_t k = 0; k < meas_.num_outcomes; ++k) {
            draw(k, fixed_probability_[k]);
        }
        return run;
    }
    auto theta = phases(master_seed, stream_id, &run.phi_p_used);
    for (std::uint64_t k = 0; k < meas_.num_outcomes; ++k) {
        draw(k, outcome_probability(theta[k], meas_));
    }
    return run;
}

OutcomeRun run_sequence(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise,
                        std::uint64_t master_seed, std::uint64_t stream_id) {
    return SequenceSampler(meas, mod, noise).sample(master_seed, stream_id);
}

void for_each_run(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise,
                  std::uint64_t master_seed, std::size_t parallelism,
                  const std::function<void(std::uint64_t, const OutcomeRun &)> &visit) {
    SequenceSampler sampler(meas, mod, noise);
    parallel_for(meas.num_repetitions, resolve_threads(parallelism), [&](std::size_t i) {
        OutcomeRun run = sampler.sample(master_seed, i);
        visit(i, run);
    });
}

Experiment run_experiment(const MeasurementConfig &meas, const ModulationConfig &mod, const NoiseSpec &noise,
                          std::uint64_t master_seed, std::size_t parallelism) {
    Experiment exp;
    exp.meas = meas;
    exp.mod = mod;
    exp.noise = noise;
    exp.master_seed = master_seed;
    exp.runs.resize(meas.num_repetitions);
    for_each_run(meas, mod, noise, master_seed, parallelism,
                 [&](std::uint64_t i, const OutcomeRun &run) { exp.runs[i] = run; });
    return exp;
}

}  // namespace ramsey
