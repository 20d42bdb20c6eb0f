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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ramsey/errors.h"
#include "ramsey/fft.h"
#include "ramsey/parallel.h"

namespace ramsey {

namespace {

constexpr std::uint64_t kRunsPerBlock = 16;

void load_bits(const PackedBits &bits, std::span<double> out) {
    for (std::uint64_t k = 0; k < bits.size(); ++k) {
        out[k] = bits.get(k) ? 1.0 : 0.0;
    }
}

/// Pairwise sum of equally long vectors; the tree shape depends only on the count.
std::vector<double> pairwise_sum(std::vector<std::vector<double>> &parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        return std::move(parts[lo]);
    }
    std::size_t mid = lo + (hi - lo) / 2;
    auto left = pairwise_sum(parts, lo, mid);
    auto right = pairwise_sum(parts, mid, hi);
    for (std::size_t i = 0; i < left.size(); ++i) {
        left[i] += right[i];
    }
    return left;
}

/// Block-reduced average of periodograms produced by `fill(i, buffer)`.
std::vector<double> blocked_average(std::uint64_t n, std::uint64_t k, std::size_t parallelism,
                                    const std::function<void(std::uint64_t, std::span<double>)> &fill) {
    std::uint64_t blocks = (k + kRunsPerBlock - 1) / kRunsPerBlock;
    std::vector<std::vector<double>> sums(blocks);
    parallel_for(blocks, resolve_threads(parallelism), [&](std::size_t b) {
        PeriodogramPlan plan(n);
        std::vector<double> acc(n, 0.0);
        std::uint64_t end = std::min<std::uint64_t>(k, (b + 1) * kRunsPerBlock);
        for (std::uint64_t i = b * kRunsPerBlock; i < end; ++i) {
            fill(i, plan.input());
            plan.accumulate(acc);
        }
        sums[b] = std::move(acc);
    });
    auto total = pairwise_sum(sums, 0, sums.size());
    for (auto &v : total) {
        v /= static_cast<double>(k);
    }
    return total;
}

std::string fingerprint_of(const MeasurementConfig &meas, const ModulationConfig &mod, std::uint64_t seed) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "N=%llu;K=%llu;seed=%llu;t_R=%.17g;t_cyc=%.17g;phi_R=%.17g;a_p=%.17g;omega_p=%.17g",
                  static_cast<unsigned long long>(meas.num_outcomes),
                  static_cast<unsigned long long>(meas.num_repetitions), static_cast<unsigned long long>(seed),
                  meas.t_ramsey, meas.t_cycle, meas.phi_ramsey, mod.amplitude, mod.angular_freq);
    return buf;
}

}  // namespace

std::vector<double> run_periodogram(const PackedBits &bits) {
    PeriodogramPlan plan(bits.size());
    load_bits(bits, plan.input());
    std::vector<double> out(bits.size(), 0.0);
    plan.accumulate(out);
    return out;
}

PowerSpectrum power_spectrum(const Experiment &exp, std::size_t parallelism) {
    if (exp.runs.empty()) {
        throw ConfigError("power_spectrum: experiment has no runs");
    }
    std::uint64_t n = exp.runs.front().bits.size();
    for (const auto &run : exp.runs) {
        if (run.bits.size() != n) {
            throw ConfigError("power_spectrum: runs have mismatched lengths");
        }
    }
    PowerSpectrum ps;
    ps.n = n;
    ps.k_averaged = exp.runs.size();
    ps.values = blocked_average(n, exp.runs.size(), parallelism,
                                [&](std::uint64_t i, std::span<double> buf) { load_bits(exp.runs[i].bits, buf); });
    ps.fingerprint = fingerprint_of(exp.meas, exp.mod, exp.master_seed);
    return ps;
}

PowerSpectrum simulate_power_spectrum(const MeasurementConfig &meas, const ModulationConfig &mod,
                                      const NoiseSpec &noise, std::uint64_t master_seed, std::size_t parallelism) {
    SequenceSampler sampler(meas, mod, noise);
    PowerSpectrum ps;
    ps.n = meas.num_outcomes;
    ps.k_averaged = meas.num_repetitions;
    ps.values = blocked_average(meas.num_outcomes, meas.num_repetitions, parallelism,
                                [&](std::uint64_t i, std::span<double> buf) {
                                    load_bits(sampler.sample(master_seed, i).bits, buf);
                                });
    ps.fingerprint = fingerprint_of(meas, mod, master_seed);
    return ps;
}

double parseval_residual(const PackedBits &bits) {
    auto s = run_periodogram(bits);
    double total = 0;
    for (double v : s) {
        total += v;
    }
    return total - static_cast<double>(bits.count_ones());
}

std::vector<std::vector<std::complex<double>>> tunable_ft_complex(const PackedBits &bits,
                                                                  std::span<const double> nu_grid,
                                                                  std::span<const std::uint64_t> m_grid) {
    const std::uint64_t n = bits.size();
    for (auto m : m_grid) {
        if (m > n) {
            throw ConfigError("tunable_ft: M must not exceed N");
        }
    }
    // Walk each nu once, reading off partial sums at the requested M in sorted order.
    std::vector<std::size_t> order(m_grid.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        order[j] = j;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m_grid[a] < m_grid[b]; });

    std::vector<std::vector<std::complex<double>>> out(nu_grid.size(),
                                                       std::vector<std::complex<double>>(m_grid.size()));
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < nu_grid.size(); ++i) {
        std::complex<double> acc = 0;
        std::uint64_t next_n = 0;
        for (std::size_t idx : order) {
            std::uint64_t target = m_grid[idx];
            for (; next_n < target; ++next_n) {
                if (bits.get(next_n)) {
                    double arg = nu_grid[i] * static_cast<double>(next_n);
                    acc += std::complex<double>(std::cos(arg), std::sin(arg));
                }
            }
            out[i][idx] = acc * inv_n;
        }
    }
    return out;
}

TunableScan tunable_ft(const PackedBits &bits, std::span<const double> nu_grid, std::span<const std::uint64_t> m_grid) {
    TunableScan scan;
    scan.nu_grid.assign(nu_grid.begin(), nu_grid.end());
    scan.m_grid.assign(m_grid.begin(), m_grid.end());
    auto y = tunable_ft_complex(bits, nu_grid, m_grid);
    scan.magnitude.resize(nu_grid.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (auto v : y[i]) {
            scan.magnitude[i].push_back(std::abs(v));
        }
    }
    return scan;
}

TunableScan tunable_ft(const Experiment &exp, std::span<const double> nu_grid, std::span<const std::uint64_t> m_grid,
                       ScanAveraging averaging) {
    if (exp.runs.empty()) {
        throw ConfigError("tunable_ft: experiment has no runs");
    }
    if (averaging == ScanAveraging::kFirstRun) {
        return tunable_ft(exp.runs.front().bits, nu_grid, m_grid);
    }
    std::vector<std::vector<std::complex<double>>> coherent(nu_grid.size(),
                                                            std::vector<std::complex<double>>(m_grid.size()));
    std::vector<std::vector<double>> incoherent(nu_grid.size(), std::vector<double>(m_grid.size(), 0.0));
    for (const auto &run : exp.runs) {
        auto y = tunable_ft_complex(run.bits, nu_grid, m_grid);
        for (std::size_t i = 0; i < y.size(); ++i) {
            for (std::size_t j = 0; j < y[i].size(); ++j) {
                coherent[i][j] += y[i][j];
                incoherent[i][j] += std::abs(y[i][j]);
            }
        }
    }
    TunableScan scan;
    scan.nu_grid.assign(nu_grid.begin(), nu_grid.end());
    scan.m_grid.assign(m_grid.begin(), m_grid.end());
    scan.magnitude.assign(nu_grid.size(), std::vector<double>(m_grid.size()));
    double k = static_cast<double>(exp.runs.size());
    for (std::size_t i = 0; i < nu_grid.size(); ++i) {
        for (std::size_t j = 0; j < m_grid.size(); ++j) {
            scan.magnitude[i][j] = averaging == ScanAveraging::kCoherent ? std::abs(coherent[i][j]) / k
                                                                         : incoherent[i][j] / k;
        }
    }
    return scan;
}

double median_floor(const PowerSpectrum &ps, std::span<const std::uint64_t> exclude) {
    std::vector<double> vals;
    std::uint64_t half = ps.n / 2;
    vals.reserve(half);
    for (std::uint64_t m = 1; m <= half; ++m) {
        if (std::find(exclude.begin(), exclude.end(), m) == exclude.end()) {
            vals.push_back(ps.values[m]);
        }
    }
    if (vals.empty()) {
        return 0.0;
    }
    auto mid = vals.begin() + static_cast<std::ptrdiff_t>(vals.size() / 2);
    std::nth_element(vals.begin(), mid, vals.end());
    return *mid;
}

double integrate_peak(const PowerSpectrum &ps, std::uint64_t center, std::uint64_t half_width,
                      std::span<const double> background) {
    std::uint64_t lo = center > half_width ? center - half_width : 1;
    std::uint64_t hi = std::min(ps.n - 1, center + half_width);
    double area = 0;
    for (std::uint64_t m = lo; m <= hi; ++m) {
        area += ps.values[m] - background[m];
    }
    return area;
}

double integrate_peak(const PowerSpectrum &ps, std::uint64_t center, std::uint64_t half_width, double background) {
    std::uint64_t lo = center > half_width ? center - half_width : 1;
    std::uint64_t hi = std::min(ps.n - 1, center + half_width);
    double area = 0;
    for (std::uint64_t m = lo; m <= hi; ++m) {
        area += ps.values[m] - background;
    }
    return area;
}

std::vector<PeakRecord> detect_peaks(const PowerSpectrum &ps, const PeakDetectionOptions &opts) {
    if (ps.n < 16) {
        throw ConfigError("detect_peaks: need N >= 16");
    }
    const std::uint64_t half = ps.n / 2;
    const auto &s = ps.values;
    const double floor = median_floor(ps);
    const double threshold = opts.threshold_factor * floor;
    const std::uint64_t merge_radius =
        opts.expected_spacing ? std::max<std::uint64_t>(2, static_cast<std::uint64_t>(*opts.expected_spacing / 2)) : 3;
    const std::uint64_t area_half =
        opts.expected_spacing ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(*opts.expected_spacing / 2)) : 8;

    auto flank_median = [&](std::uint64_t m) {
        std::vector<double> flank;
        for (std::uint64_t d = area_half + 1; d <= 2 * area_half; ++d) {
            if (m > d) {
                flank.push_back(s[m - d]);
            }
            if (m + d <= half) {
                flank.push_back(s[m + d]);
            }
        }
        if (flank.empty()) {
            return floor;
        }
        auto mid = flank.begin() + static_cast<std::ptrdiff_t>(flank.size() / 2);
        std::nth_element(flank.begin(), mid, flank.end());
        return *mid;
    };

    // Local maxima standing out from both the global floor and their own
    // flanks; the second test rejects ripples on the tails of strong peaks.
    std::vector<std::uint64_t> candidates;
    std::vector<double> backgrounds;
    for (std::uint64_t m = 1; m <= half; ++m) {
        double left = m > 1 ? s[m - 1] : -1.0;
        double right = m < half ? s[m + 1] : -1.0;
        if (s[m] > threshold && s[m] >= left && s[m] >= right) {
            double bg = flank_median(m);
            if (s[m] > opts.threshold_factor * bg) {
                candidates.push_back(m);
                backgrounds.push_back(bg);
            }
        }
    }

    // Within merge_radius keep the strongest maximum.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!kept.empty() && candidates[i] - candidates[kept.back()] <= merge_radius) {
            if (s[candidates[i]] > s[candidates[kept.back()]]) {
                kept.back() = i;
            }
            continue;
        }
        kept.push_back(i);
    }

    std::vector<PeakRecord> peaks;
    for (auto i : kept) {
        std::uint64_t m = candidates[i];
        PeakRecord rec;
        rec.m_peak = m;
        rec.height = s[m];
        rec.local_background = backgrounds[i];
        // For a 1/detuning^2 line the taller neighbour passes 1/9 of the maximum
        // once the resonance sits a quarter bin or more away from it.
        double neighbour = std::max(m > 1 ? s[m - 1] : 0.0, m < half ? s[m + 1] : 0.0);
        rec.doublet = neighbour - rec.local_background > (s[m] - rec.local_background) / 9;
        rec.area = integrate_peak(ps, m, area_half, rec.local_background);
        peaks.push_back(rec);
    }
    return peaks;
}

}  // namespace ramsey
