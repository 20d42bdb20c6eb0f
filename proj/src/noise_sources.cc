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

#include "ramsey/noise_sources.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ramsey/errors.h"

namespace ramsey {

namespace {

void require(bool ok, const std::string &msg) {
    if (!ok) {
        throw ConfigError(msg);
    }
}

/// Total simulated time, checked to keep sub-window resolution.
double horizon(const MeasurementConfig &meas) {
    double t_end = static_cast<double>(meas.num_outcomes) * meas.t_cycle + meas.t_ramsey;
    if (!std::isfinite(t_end) || t_end * 0x1.0p-52 > 1e-6 * meas.t_ramsey) {
        throw ConfigError("measurement: N * t_cyc too large for double-precision event times");
    }
    return t_end;
}

/// Streams one telegraph trajectory forward in time.
class TelegraphCursor {
   public:
    TelegraphCursor(const TlsParams &tls, RngStream &rng) : tls_(tls), rng_(rng) {
        state_ = rng_.uniform() < tls.rate_10 / tls.total_rate() ? 0 : 1;
        now_ = 0;
        next_switch_ = rng_.exponential(leave_rate());
    }

    int state() const {
        return state_;
    }
    double next_switch() const {
        return next_switch_;
    }

    void flip() {
        now_ = next_switch_;
        state_ ^= 1;
        next_switch_ = now_ + rng_.exponential(leave_rate());
    }

    /// Integral of (tau_z - <tau_z>) over [a, b], a >= all previously queried times.
    double integrate(double a, double b, double mean) {
        while (next_switch_ <= a) {
            flip();
        }
        double acc = 0;
        double cur = a;
        while (next_switch_ < b) {
            acc += (tau() - mean) * (next_switch_ - cur);
            cur = next_switch_;
            flip();
        }
        acc += (tau() - mean) * (b - cur);
        return acc;
    }

   private:
    double leave_rate() const {
        return state_ == 0 ? tls_.rate_01 : tls_.rate_10;
    }
    double tau() const {
        return state_ == 0 ? 1.0 : -1.0;
    }

    const TlsParams &tls_;
    RngStream &rng_;
    int state_;
    double now_;
    double next_switch_;
};

}  // namespace

double TlsParams::symmetry_factor() const {
    return 2 * std::sqrt(rate_01 * rate_10) / total_rate();
}

void TlsParams::validate() const {
    require(std::isfinite(coupling), "noise.tls.V: must be finite");
    require(std::isfinite(rate_01) && rate_01 > 0, "noise.tls.W01: must be finite and > 0");
    require(std::isfinite(rate_10) && rate_10 > 0, "noise.tls.W10: must be finite and > 0");
}

void OuParams::validate() const {
    require(std::isfinite(variance) && variance >= 0, "ou.D: must be finite and >= 0");
    require(std::isfinite(tau_corr) && tau_corr > 0, "ou.tau_corr: must be finite and > 0");
    if (dt) {
        require(std::isfinite(*dt) && *dt > 0, "ou.dt: must be finite and > 0");
    }
}

double ModFreqNoiseSpec::resolved_dt(const MeasurementConfig &meas) const {
    if (kind == ModFreqNoiseKind::kOu) {
        return ou.resolved_dt(meas);
    }
    return dt_white.value_or(0.1 * meas.t_ramsey);
}

void ModFreqNoiseSpec::validate() const {
    switch (kind) {
        case ModFreqNoiseKind::kNone:
            break;
        case ModFreqNoiseKind::kWhite:
            require(std::isfinite(sigma2) && sigma2 >= 0, "noise.modfreq.sigma2: must be finite and >= 0");
            if (dt_white) {
                require(std::isfinite(*dt_white) && *dt_white > 0, "noise.modfreq.dt: must be finite and > 0");
            }
            break;
        case ModFreqNoiseKind::kOu:
            ou.validate();
            break;
    }
}

void CycleJitterSpec::validate() const {
    require(std::isfinite(std_dev) && std_dev >= 0, "noise.cycle_jitter.std_dev: must be finite and >= 0");
}

std::uint64_t steps_per_cycle(double dt, const MeasurementConfig &meas) {
    if (!(dt > 0) || dt >= meas.t_cycle) {
        throw ConfigError("integration step dt must satisfy 0 < dt < t_cyc");
    }
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(meas.t_cycle / dt)));
}

TelegraphPath simulate_telegraph(const TlsParams &tls, double t_end, RngStream &rng) {
    tls.validate();
    TelegraphCursor cursor(tls, rng);
    TelegraphPath path;
    path.initial_state = cursor.state();
    while (cursor.next_switch() < t_end) {
        path.switch_times.push_back(cursor.next_switch());
        cursor.flip();
    }
    return path;
}

std::vector<double> sample_tls_phases(const TlsEnsemble &ens, const MeasurementConfig &meas, RngStream &rng) {
    if (ens.empty()) {
        throw ConfigError("noise.tls: ensemble must be non-empty");
    }
    horizon(meas);
    std::vector<double> theta(meas.num_outcomes, 0.0);
    for (const auto &tls : ens) {
        tls.validate();
        TelegraphCursor cursor(tls, rng);
        double mean = tls.mean_tau_z();
        for (std::uint64_t k = 0; k < meas.num_outcomes; ++k) {
            double a = static_cast<double>(k) * meas.t_cycle;
            theta[k] += tls.coupling * cursor.integrate(a, a + meas.t_ramsey, mean);
        }
    }
    return theta;
}

OuProcess::OuProcess(const OuParams &params, double dt, RngStream &rng)
    : decay_(1 - dt / params.tau_corr),
      kick_(std::sqrt(2 * params.variance / params.tau_corr) * std::sqrt(dt)),
      xi_(std::sqrt(params.variance) * rng.normal()),
      rng_(&rng) {
}

double OuProcess::step() {
    xi_ = xi_ * decay_ + kick_ * rng_->normal();
    return xi_;
}

std::vector<double> sample_modfreq_path(const ModFreqNoiseSpec &spec, const MeasurementConfig &meas, RngStream &rng) {
    spec.validate();
    if (spec.kind == ModFreqNoiseKind::kNone) {
        throw ConfigError("noise.modfreq: kind 'none' has no path to sample");
    }
    horizon(meas);
    std::uint64_t steps = steps_per_cycle(spec.resolved_dt(meas), meas);
    double dt = meas.t_cycle / static_cast<double>(steps);

    std::vector<double> phi(meas.num_outcomes, 0.0);
    double acc = 0;
    if (spec.kind == ModFreqNoiseKind::kWhite) {
        double step_sd = std::sqrt(spec.sigma2) * std::sqrt(dt);
        for (std::uint64_t k = 1; k < meas.num_outcomes; ++k) {
            for (std::uint64_t j = 0; j < steps; ++j) {
                acc += step_sd * rng.normal();
            }
            phi[k] = acc;
        }
    } else {
        OuProcess xi(spec.ou, dt, rng);
        for (std::uint64_t k = 1; k < meas.num_outcomes; ++k) {
            for (std::uint64_t j = 0; j < steps; ++j) {
                acc += xi.value() * dt;
                xi.step();
            }
            phi[k] = acc;
        }
    }
    return phi;
}

std::vector<double> sample_cycle_jitter(const CycleJitterSpec &spec, std::uint64_t n, RngStream &rng) {
    spec.validate();
    std::vector<double> tau(n);
    double acc = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        acc += spec.std_dev * rng.normal();
        tau[k] = acc;
    }
    return tau;
}

std::vector<double> sample_gaussian_qubit_noise(const OuParams &ou, const MeasurementConfig &meas, RngStream &rng) {
    ou.validate();
    horizon(meas);
    std::uint64_t steps = steps_per_cycle(ou.resolved_dt(meas), meas);
    double dt = meas.t_cycle / static_cast<double>(steps);

    // Overlap of each in-cycle step [j dt, (j+1) dt] with the window [0, t_R].
    std::vector<double> weight;
    for (std::uint64_t j = 0; j < steps; ++j) {
        double lo = static_cast<double>(j) * dt;
        double w = std::min(meas.t_ramsey, lo + dt) - lo;
        if (w <= 0) {
            break;
        }
        weight.push_back(w);
    }

    std::vector<double> theta(meas.num_outcomes, 0.0);
    OuProcess xi(ou, dt, rng);
    for (std::uint64_t k = 0; k < meas.num_outcomes; ++k) {
        double acc = 0;
        for (std::uint64_t j = 0; j < steps; ++j) {
            if (j < weight.size()) {
                acc += xi.value() * weight[j];
            }
            xi.step();
        }
        theta[k] = acc;
    }
    return theta;
}

}  // namespace ramsey
