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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "ramsey/errors.h"
#include "ramsey/rng.h"

namespace ramsey {
namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(const std::vector<double> &v) {
    Moments m;
    for (double x : v) {
        m.mean += x;
    }
    m.mean /= static_cast<double>(v.size());
    for (double x : v) {
        m.var += (x - m.mean) * (x - m.mean);
    }
    m.var /= static_cast<double>(v.size() - 1);
    return m;
}

double lag_one_correlation(const std::vector<double> &x) {
    auto m = moments(x);
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        c += (x[i] - m.mean) * (x[i + 1] - m.mean);
    }
    return c / (static_cast<double>(x.size() - 1) * m.var);
}

/// Kolmogorov-Smirnov distance between a sample and Exp(rate).
double ks_exponential(std::vector<double> sample, double rate) {
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = 1.0 - std::exp(-rate * sample[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

TEST(Rng, ReproducibleAndChannelSeparated) {
    RngStream a(42, 7, RngChannel::kTls);
    RngStream b(42, 7, RngChannel::kTls);
    RngStream c(42, 7, RngChannel::kOutcomes);
    RngStream d(42, 8, RngChannel::kTls);
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        auto x = a.next_u64();
        ASSERT_EQ(x, b.next_u64());
        same_c += x == c.next_u64();
        same_d += x == d.next_u64();
    }
    EXPECT_EQ(same_c, 0);
    EXPECT_EQ(same_d, 0);
}

TEST(Rng, UniformAndNormalMoments) {
    RngStream r(1, 0);
    std::vector<double> u(200000);
    std::vector<double> g(200000);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = r.uniform();
        ASSERT_GE(u[i], 0.0);
        ASSERT_LT(u[i], 1.0);
        g[i] = r.normal();
    }
    auto mu = moments(u);
    auto mg = moments(g);
    EXPECT_NEAR(mu.mean, 0.5, 3 * std::sqrt(1.0 / 12 / 200000.0));
    EXPECT_NEAR(mg.mean, 0.0, 3 / std::sqrt(200000.0));
    EXPECT_NEAR(mg.var, 1.0, 3 * std::sqrt(2.0 / 200000.0));
}

TEST(Telegraph, DwellTimesAreExponential) {
    TlsParams tls{0.1, 0.7, 1.9};
    RngStream rng(2024, 0, RngChannel::kTls);
    auto path = simulate_telegraph(tls, 1.2e5, rng);
    std::vector<double> dwell[2];
    int state = path.initial_state == 0 ? 1 : 0;  // state after the first switch
    for (std::size_t i = 1; i < path.switch_times.size(); ++i) {
        dwell[state].push_back(path.switch_times[i] - path.switch_times[i - 1]);
        state ^= 1;
    }
    ASSERT_GT(dwell[0].size(), 50000u);
    ASSERT_GT(dwell[1].size(), 50000u);
    // Critical distance at level 1e-3 is 1.949 / sqrt(n).
    EXPECT_LT(ks_exponential(dwell[0], tls.rate_01), 1.949 / std::sqrt(static_cast<double>(dwell[0].size())));
    EXPECT_LT(ks_exponential(dwell[1], tls.rate_10), 1.949 / std::sqrt(static_cast<double>(dwell[1].size())));
}

TEST(Telegraph, SymmetricMeanTauZVanishes) {
    TlsParams tls{0.1, 1.0, 1.0};
    RngStream rng(5, 0, RngChannel::kTls);
    const double t_end = 1e5;
    auto path = simulate_telegraph(tls, t_end, rng);
    double integral = 0.0;
    double t = 0.0;
    double tau = path.initial_state == 0 ? 1.0 : -1.0;
    for (double s : path.switch_times) {
        integral += tau * (s - t);
        t = s;
        tau = -tau;
    }
    integral += tau * (t_end - t);
    double se = std::sqrt(2.0 / (tls.total_rate() * t_end));
    EXPECT_LT(std::abs(integral / t_end), 3 * se);
}

TEST(TlsPhases, ZeroCouplingGivesZero) {
    MeasurementConfig meas;
    meas.num_outcomes = 1000;
    RngStream rng(3, 0, RngChannel::kTls);
    auto th = sample_tls_phases({TlsParams{0.0, 0.5, 0.5}, TlsParams{0.0, 0.1, 0.3}}, meas, rng);
    ASSERT_EQ(th.size(), 1000u);
    for (double x : th) {
        EXPECT_EQ(x, 0.0);
    }
}

TEST(TlsPhases, SlowSymmetricTlsCoherence) {
    TlsEnsemble ens{TlsParams{0.2, 0.6e-4, 0.6e-4}};
    MeasurementConfig meas;
    meas.num_outcomes = 2;
    const int draws = 100000;
    std::complex<double> sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(77, static_cast<std::uint64_t>(i), RngChannel::kTls);
        double th = sample_tls_phases(ens, meas, rng)[0];
        sum += std::exp(std::complex<double>(0, th));
        sum_sq += std::cos(th) * std::cos(th);
    }
    double mean = sum.real() / draws;
    double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, 0.98007, 3 * se + 1e-5);
    EXPECT_NEAR(mean, std::cos(0.2), 3 * se + 1e-5);
}

TEST(TlsPhases, StationaryMeanIsZero) {
    TlsEnsemble ens{TlsParams{0.3, 0.2, 0.5}};
    MeasurementConfig meas;
    meas.num_outcomes = 2;
    std::vector<double> first;
    for (int i = 0; i < 1000; ++i) {
        RngStream rng(9, static_cast<std::uint64_t>(i), RngChannel::kTls);
        first.push_back(sample_tls_phases(ens, meas, rng)[0]);
    }
    auto m = moments(first);
    EXPECT_LT(std::abs(m.mean), 3 * std::sqrt(m.var / 1000));
}

TEST(TlsPhases, ExactWindowIntegralWithoutSwitch) {
    // With rates this slow the first window almost surely sees no switch, so
    // theta_0 = V (tau_z - <tau_z>) t_R exactly.
    TlsParams tls{0.25, 1e-9, 3e-9};
    MeasurementConfig meas;
    meas.num_outcomes = 2;
    RngStream rng(10, 0, RngChannel::kTls);
    double th = sample_tls_phases({tls}, meas, rng)[0];
    double mean = tls.mean_tau_z();
    bool plus = std::abs(th - 0.25 * (1 - mean)) < 1e-12;
    bool minus = std::abs(th - 0.25 * (-1 - mean)) < 1e-12;
    EXPECT_TRUE(plus || minus) << th;
}

TEST(ModFreq, ZeroIntensityIsFlat) {
    ModFreqNoiseSpec spec;
    spec.kind = ModFreqNoiseKind::kWhite;
    spec.sigma2 = 0.0;
    MeasurementConfig meas;
    meas.num_outcomes = 500;
    RngStream rng(1, 0, RngChannel::kModFreq);
    for (double x : sample_modfreq_path(spec, meas, rng)) {
        EXPECT_EQ(x, 0.0);
    }
}

TEST(ModFreq, WienerVariance) {
    ModFreqNoiseSpec spec;
    spec.kind = ModFreqNoiseKind::kWhite;
    spec.sigma2 = 25e-6;
    spec.dt_white = 1.0;  // the variance identity holds for any step
    MeasurementConfig meas;
    meas.num_outcomes = 10001;
    std::vector<double> end;
    std::vector<double> increments;
    for (int i = 0; i < 4000; ++i) {
        RngStream rng(31, static_cast<std::uint64_t>(i), RngChannel::kModFreq);
        auto phi = sample_modfreq_path(spec, meas, rng);
        ASSERT_EQ(phi[0], 0.0);
        end.push_back(phi[10000]);
        if (i == 0) {
            for (std::size_t k = 1; k < phi.size(); ++k) {
                increments.push_back(phi[k] - phi[k - 1]);
            }
        }
    }
    double expected = spec.sigma2 * 10000 * meas.t_cycle;
    EXPECT_NEAR(expected, 0.75, 1e-12);
    EXPECT_NEAR(moments(end).var, expected, 0.1 * expected);
    EXPECT_LT(std::abs(lag_one_correlation(increments)), 3 / std::sqrt(static_cast<double>(increments.size())));
}

TEST(ModFreq, OuAutocorrelation) {
    OuParams ou{0.5, 1.0, 0.01};
    RngStream rng(8, 0, RngChannel::kModFreq);
    const int paths = 20000;
    const int lag_steps = 100;  // s = tau_corr
    double s00 = 0.0;
    double s11 = 0.0;
    double s01 = 0.0;
    for (int i = 0; i < paths; ++i) {
        OuProcess proc(ou, *ou.dt, rng);
        double x0 = proc.value();
        double x1 = 0.0;
        for (int k = 0; k < lag_steps; ++k) {
            x1 = proc.step();
        }
        s00 += x0 * x0;
        s11 += x1 * x1;
        s01 += x0 * x1;
    }
    double corr = s01 / std::sqrt(s00 * s11);
    EXPECT_NEAR(corr, std::exp(-1.0), 0.1 * std::exp(-1.0));
    EXPECT_NEAR(s00 / paths, ou.variance, 0.05 * ou.variance);
}

TEST(ModFreq, RejectsCoarseStep) {
    ModFreqNoiseSpec spec;
    spec.kind = ModFreqNoiseKind::kWhite;
    spec.sigma2 = 1e-6;
    spec.dt_white = 3.0;
    MeasurementConfig meas;
    meas.num_outcomes = 10;
    RngStream rng(1, 0, RngChannel::kModFreq);
    EXPECT_THROW(sample_modfreq_path(spec, meas, rng), ConfigError);
    EXPECT_THROW(steps_per_cycle(4.0, meas), ConfigError);
    EXPECT_EQ(steps_per_cycle(0.1, meas), 30u);
}

TEST(CycleJitter, ZeroStdDev) {
    RngStream rng(1, 0, RngChannel::kCycleJitter);
    for (double x : sample_cycle_jitter(CycleJitterSpec{0.0}, 100, rng)) {
        EXPECT_EQ(x, 0.0);
    }
}

TEST(CycleJitter, CumulativeVariance) {
    CycleJitterSpec spec{0.02};
    std::vector<double> at;
    for (int i = 0; i < 2000; ++i) {
        RngStream rng(4, static_cast<std::uint64_t>(i), RngChannel::kCycleJitter);
        at.push_back(sample_cycle_jitter(spec, 1000, rng)[999]);
    }
    double expected = 1000 * spec.std_dev * spec.std_dev;
    EXPECT_NEAR(moments(at).var, expected, 0.1 * expected);
}

TEST(CycleJitter, IncrementsAreZeroMeanAndUncorrelated) {
    CycleJitterSpec spec{0.05};
    RngStream rng(6, 0, RngChannel::kCycleJitter);
    auto tau = sample_cycle_jitter(spec, 100000, rng);
    std::vector<double> inc(tau.size());
    inc[0] = tau[0];
    for (std::size_t k = 1; k < tau.size(); ++k) {
        inc[k] = tau[k] - tau[k - 1];
    }
    auto m = moments(inc);
    EXPECT_LT(std::abs(m.mean), 3 * spec.std_dev / std::sqrt(1e5));
    EXPECT_LT(std::abs(lag_one_correlation(inc)), 3 / std::sqrt(1e5));
}

TEST(GaussianQubitNoise, ZeroVariance) {
    MeasurementConfig meas;
    meas.num_outcomes = 50;
    RngStream rng(1, 0, RngChannel::kQubitOu);
    for (double x : sample_gaussian_qubit_noise(OuParams{0.0, 5.0, {}}, meas, rng)) {
        EXPECT_EQ(x, 0.0);
    }
}

TEST(GaussianQubitNoise, FrozenLimitAndGaussianFactor) {
    OuParams ou{0.04, 100.0, {}};
    MeasurementConfig meas;
    meas.num_outcomes = 2;
    const int draws = 20000;
    std::vector<double> th;
    double sum_cos = 0.0;
    double sum_cos2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(12, static_cast<std::uint64_t>(i), RngChannel::kQubitOu);
        double x = sample_gaussian_qubit_noise(ou, meas, rng)[0];
        th.push_back(x);
        sum_cos += std::cos(x);
        sum_cos2 += std::cos(x) * std::cos(x);
    }
    double var = moments(th).var;
    EXPECT_NEAR(var, ou.variance * meas.t_ramsey * meas.t_ramsey, 0.1 * ou.variance);
    double mean_cos = sum_cos / draws;
    double se = std::sqrt((sum_cos2 / draws - mean_cos * mean_cos) / draws);
    EXPECT_NEAR(mean_cos, std::exp(-var / 2), 3 * se);
}

TEST(NoiseSources, SameSeedSameDraws) {
    MeasurementConfig meas;
    meas.num_outcomes = 3000;
    TlsEnsemble ens{TlsParams{0.2, 0.01, 0.02}, TlsParams{0.1, 0.3, 0.3}};
    RngStream a(99, 3, RngChannel::kTls);
    RngStream b(99, 3, RngChannel::kTls);
    EXPECT_EQ(sample_tls_phases(ens, meas, a), sample_tls_phases(ens, meas, b));
    ModFreqNoiseSpec spec;
    spec.kind = ModFreqNoiseKind::kOu;
    spec.ou = OuParams{1e-6, 5.0, {}};
    RngStream c(99, 3, RngChannel::kModFreq);
    RngStream d(99, 3, RngChannel::kModFreq);
    EXPECT_EQ(sample_modfreq_path(spec, meas, c), sample_modfreq_path(spec, meas, d));
}

}  // namespace
}  // namespace ramsey
