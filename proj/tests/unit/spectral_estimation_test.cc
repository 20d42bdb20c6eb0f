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

#include "ramsey/spectral_estimation.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "ramsey/analytic_spectra.h"
#include "ramsey/errors.h"
#include "ramsey/fft.h"

namespace ramsey {
namespace {

using cd = std::complex<double>;

std::vector<double> brute_periodogram(const std::vector<double> &x) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        cd sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double ang = kTwoPi * static_cast<double>((m * k) % n) / static_cast<double>(n);
            sum += x[k] * cd(std::cos(ang), std::sin(ang));
        }
        out[m] = std::norm(sum) / static_cast<double>(n);
    }
    return out;
}

PackedBits random_bits(std::uint64_t n, std::uint32_t seed, double p = 0.5) {
    std::mt19937 gen(seed);
    std::bernoulli_distribution coin(p);
    PackedBits b(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        b.set(k, coin(gen));
    }
    return b;
}

PowerSpectrum from_values(std::vector<double> v) {
    PowerSpectrum ps;
    ps.n = v.size();
    ps.k_averaged = 1;
    ps.values = std::move(v);
    return ps;
}

TEST(Periodogram, MatchesBruteForceDft) {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::uint64_t n : {1u, 2u, 7u, 16u, 60u, 97u, 128u, 210u, 256u}) {
        std::vector<double> x(n);
        for (auto &v : x) {
            v = u(gen);
        }
        PeriodogramPlan plan(n);
        std::copy(x.begin(), x.end(), plan.input().begin());
        std::vector<double> acc(n, 0.0);
        plan.accumulate(acc);
        auto ref = brute_periodogram(x);
        for (std::uint64_t m = 0; m < n; ++m) {
            EXPECT_NEAR(acc[m], ref[m], 1e-9) << "n=" << n << " m=" << m;
        }
    }
}

TEST(Periodogram, BitsMatchBruteForce) {
    for (std::uint64_t n : {64u, 100u, 255u}) {
        auto bits = random_bits(n, static_cast<std::uint32_t>(n));
        std::vector<double> x(n);
        for (std::uint64_t k = 0; k < n; ++k) {
            x[k] = bits.get(k) ? 1.0 : 0.0;
        }
        auto got = run_periodogram(bits);
        auto ref = brute_periodogram(x);
        for (std::uint64_t m = 0; m < n; ++m) {
            EXPECT_NEAR(got[m], ref[m], 1e-9);
        }
    }
}

TEST(Periodogram, ZerosAndOnes) {
    PackedBits zeros(1000);
    for (double v : run_periodogram(zeros)) {
        EXPECT_EQ(v, 0.0);
    }
    PackedBits ones(1000);
    for (std::uint64_t k = 0; k < 1000; ++k) {
        ones.set(k, true);
    }
    auto s = run_periodogram(ones);
    EXPECT_NEAR(s[0], 1000.0, 1e-9);
    for (std::size_t m = 1; m < s.size(); ++m) {
        EXPECT_NEAR(s[m], 0.0, 1e-9);
    }
}

TEST(Periodogram, PureTone) {
    const std::uint64_t n = 64;
    const std::uint64_t q = 5;
    PeriodogramPlan plan(n);
    std::vector<double> x(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        x[k] = 0.5 * (1 + std::cos(kTwoPi * static_cast<double>(q * k) / n));
    }
    std::copy(x.begin(), x.end(), plan.input().begin());
    std::vector<double> acc(n, 0.0);
    plan.accumulate(acc);
    EXPECT_NEAR(acc[q], n / 16.0, 1e-12);
    EXPECT_NEAR(brute_periodogram(x)[q], n / 16.0, 1e-12);
    EXPECT_NEAR(acc[n - q], n / 16.0, 1e-12);
}

TEST(Periodogram, ParsevalAndSymmetry) {
    for (std::uint64_t n : {1000u, 4096u, 100000u}) {
        auto bits = random_bits(n, 11, 0.3);
        EXPECT_LT(std::abs(parseval_residual(bits)), 1e-9 * static_cast<double>(n));
        auto s = run_periodogram(bits);
        for (std::uint64_t m = 1; m < n; ++m) {
            ASSERT_EQ(s[m], s[n - m]);
        }
    }
}

TEST(PowerSpectrum, AverageIndependentOfThreads) {
    MeasurementConfig meas;
    meas.num_outcomes = 3000;
    meas.num_repetitions = 40;
    meas.phi_ramsey = kPi / 2;
    ModulationConfig mod;
    mod.angular_freq = 0.02;
    auto exp = run_experiment(meas, mod, NoiseSpec{}, 8);
    auto a = power_spectrum(exp, 1);
    auto b = power_spectrum(exp, 3);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.k_averaged, 40u);
    auto c = simulate_power_spectrum(meas, mod, NoiseSpec{}, 8, 2);
    EXPECT_EQ(a.values, c.values);
    std::vector<double> mean(3000, 0.0);
    for (const auto &r : exp.runs) {
        auto s = run_periodogram(r.bits);
        for (std::size_t m = 0; m < s.size(); ++m) {
            mean[m] += s[m] / 40.0;
        }
    }
    for (std::size_t m = 0; m < mean.size(); ++m) {
        EXPECT_NEAR(a.values[m], mean[m], 1e-12 * std::max(1.0, mean[m]));
    }
}

TEST(PowerSpectrum, MismatchedRunsRejected) {
    Experiment exp;
    exp.runs.push_back(OutcomeRun{PackedBits(100), 0, 0.0});
    exp.runs.push_back(OutcomeRun{PackedBits(101), 1, 0.0});
    EXPECT_THROW(power_spectrum(exp), ConfigError);
}

TEST(PowerSpectrum, FloorIndependentOfFrequency) {
    MeasurementConfig meas;
    meas.num_outcomes = 4096;
    meas.num_repetitions = 30;
    meas.phi_ramsey = kPi / 4;
    ModulationConfig mod;
    mod.amplitude = 0.0;
    auto ps = simulate_power_spectrum(meas, mod, NoiseSpec{}, 13);
    double floor = median_floor(ps);
    // A mean of K unit exponentials has median close to 1 - 1/(3K).
    EXPECT_NEAR(floor, 0.125 * (1 - 1.0 / 90), 0.02 * 0.125);
    // Linear regression of S(m) on m over the half spectrum.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (std::uint64_t m = 1; m < 2048; ++m) {
        double x = static_cast<double>(m);
        double y = ps.values[m];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (std::uint64_t m = 1; m < 2048; ++m) {
        double r = ps.values[m] - intercept - slope * static_cast<double>(m);
        rss += r * r;
    }
    double se = std::sqrt(rss / (n - 2) / (sxx - sx * sx / n));
    EXPECT_LT(std::abs(slope), 3 * se);
}

TEST(TunableFt, Examples) {
    PackedBits ones(500);
    for (std::uint64_t k = 0; k < 500; ++k) {
        ones.set(k, true);
    }
    std::vector<double> nu{0.0};
    std::vector<std::uint64_t> m{0, 1, 250, 500};
    auto scan = tunable_ft(ones, nu, m);
    EXPECT_EQ(scan.magnitude[0][0], 0.0);
    EXPECT_NEAR(scan.magnitude[0][1], 1.0 / 500, 1e-15);
    EXPECT_NEAR(scan.magnitude[0][2], 0.5, 1e-13);
    EXPECT_NEAR(scan.magnitude[0][3], 1.0, 1e-13);
    std::vector<std::uint64_t> too_long{501};
    EXPECT_THROW(tunable_ft(ones, nu, too_long), ConfigError);
}

TEST(TunableFt, MatchesDirectSum) {
    auto bits = random_bits(300, 5);
    std::vector<double> nu{0.0, 0.01, 1.3, -2.0};
    std::vector<std::uint64_t> m{300, 17, 150};
    auto y = tunable_ft_complex(bits, nu, m);
    for (std::size_t i = 0; i < nu.size(); ++i) {
        for (std::size_t jj = 0; jj < m.size(); ++jj) {
            cd sum = 0.0;
            for (std::uint64_t k = 0; k < m[jj]; ++k) {
                sum += (bits.get(k) ? 1.0 : 0.0) * std::exp(cd(0, nu[i] * static_cast<double>(k)));
            }
            sum /= 300.0;
            EXPECT_NEAR(std::abs(y[i][jj] - sum), 0.0, 1e-12);
        }
    }
}

TEST(TunableFt, CoherentAverage) {
    MeasurementConfig meas;
    meas.num_outcomes = 1000;
    meas.num_repetitions = 3;
    auto exp = run_experiment(meas, ModulationConfig{}, NoiseSpec{}, 2);
    std::vector<double> nu{0.1};
    std::vector<std::uint64_t> m{1000};
    cd mean = 0.0;
    for (const auto &r : exp.runs) {
        mean += tunable_ft_complex(r.bits, nu, m)[0][0] / 3.0;
    }
    EXPECT_NEAR(tunable_ft(exp, nu, m, ScanAveraging::kCoherent).magnitude[0][0], std::abs(mean), 1e-14);
    EXPECT_NEAR(tunable_ft(exp, nu, m, ScanAveraging::kFirstRun).magnitude[0][0],
                tunable_ft(exp.runs[0].bits, nu, m).magnitude[0][0], 0.0);
}

SpectrumModel reference_model(double phi) {
    SpectrumModel model;
    model.n = 100000;
    model.phase_amplitude = 2.0 * std::sin(1e-3 / 2) / 1e-3;
    model.omega_p = 1e-3;
    model.phi_ramsey = phi;
    return model;
}

TEST(DetectPeaks, AnalyticOvertonePositions) {
    auto ps = from_values(total_spectrum(reference_model(kPi / 4)).values);
    PeakDetectionOptions opts;
    opts.threshold_factor = 1.3;  // the fourth overtone is only 1.6x the floor
    auto peaks = detect_peaks(ps, opts);
    std::vector<std::uint64_t> bins;
    for (const auto &p : peaks) {
        bins.push_back(p.m_peak);
    }
    EXPECT_EQ(bins, (std::vector<std::uint64_t>{48, 95, 143, 191}));
    auto strong = detect_peaks(ps);
    ASSERT_EQ(strong.size(), 3u);
    EXPECT_EQ(strong[2].m_peak, 143u);
}

TEST(DetectPeaks, FlatSpectrumIsEmpty) {
    EXPECT_TRUE(detect_peaks(from_values(std::vector<double>(4096, 0.125))).empty());
}

TEST(DetectPeaks, ParityAtZeroPhase) {
    auto ps = from_values(total_spectrum(reference_model(0.0)).values);
    PeakDetectionOptions opts;
    opts.threshold_factor = 1.3;
    auto peaks = detect_peaks(ps, opts);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_EQ(peaks[0].m_peak, 95u);
    EXPECT_EQ(peaks[1].m_peak, 191u);
}

TEST(DetectPeaks, DoubletAndArea) {
    auto model = reference_model(kPi / 2);
    auto pred = total_spectrum(model);
    auto ps = from_values(pred.values);
    auto peaks = detect_peaks(ps);
    ASSERT_FALSE(peaks.empty());
    EXPECT_EQ(peaks[0].m_peak, 48u);
    EXPECT_TRUE(peaks[0].doublet);
    // Area of the first overtone against its delta weight, bracket 2.
    double expected = 2 * static_cast<double>(model.n) / kTwoPi * peak_delta_area(1, model.phase_amplitude);
    EXPECT_NEAR(peaks[0].area, expected, 0.1 * expected);
}

TEST(IntegratePeak, ClipsToValidRange) {
    auto ps = from_values(std::vector<double>(32, 1.0));
    EXPECT_NEAR(integrate_peak(ps, 2, 5, 0.5), 0.5 * 7, 1e-15);  // m = 1..7
    EXPECT_NEAR(integrate_peak(ps, 30, 5, 0.0), 7.0, 1e-15);     // m = 25..31
}

}  // namespace
}  // namespace ramsey
