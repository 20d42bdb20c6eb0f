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

#ifndef RAMSEY_SPECTRAL_ESTIMATION_H
#define RAMSEY_SPECTRAL_ESTIMATION_H

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ramsey/simulator.h"

namespace ramsey {

/// K-averaged periodogram E|X(m)|^2, m = 0..N-1.
struct PowerSpectrum {
    std::vector<double> values;
    std::uint64_t n = 0;
    std::uint64_t k_averaged = 0;
    std::string fingerprint;
};

/// |X(m)|^2 of one run.
std::vector<double> run_periodogram(const PackedBits &bits);

/// Average of per-run periodograms. Runs are reduced in fixed blocks and the
/// block sums combined pairwise, so the result is independent of `parallelism`.
PowerSpectrum power_spectrum(const Experiment &exp, std::size_t parallelism = 0);

/// Same as power_spectrum(run_experiment(...)) without keeping the runs.
PowerSpectrum simulate_power_spectrum(const MeasurementConfig &meas, const ModulationConfig &mod,
                                      const NoiseSpec &noise, std::uint64_t master_seed,
                                      std::size_t parallelism = 0);

/// Sum_m |X(m)|^2 - sum_n x_n for one run (zero up to rounding).
double parseval_residual(const PackedBits &bits);

// ---- Tunable Fourier transform ----------------------------------------------

/// |Y(nu; M)| with Y = N^{-1} sum_{n<M} e^{i nu n} x_n; magnitude[i][j] is
/// for nu_grid[i], m_grid[j].
struct TunableScan {
    std::vector<double> nu_grid;
    std::vector<std::uint64_t> m_grid;
    std::vector<std::vector<double>> magnitude;
};

enum class ScanAveraging {
    kFirstRun,   // single realization
    kCoherent,   // |mean_r Y_r|
    kMagnitude,  // mean_r |Y_r|
};

/// Complex Y(nu; M) of one run on the grid.
std::vector<std::vector<std::complex<double>>> tunable_ft_complex(const PackedBits &bits,
                                                                  std::span<const double> nu_grid,
                                                                  std::span<const std::uint64_t> m_grid);

TunableScan tunable_ft(const PackedBits &bits, std::span<const double> nu_grid, std::span<const std::uint64_t> m_grid);

TunableScan tunable_ft(const Experiment &exp, std::span<const double> nu_grid, std::span<const std::uint64_t> m_grid,
                       ScanAveraging averaging = ScanAveraging::kCoherent);

// ---- Peaks --------------------------------------------------------------------

/// Median of S(m) over 1 <= m <= N/2, excluding `exclude` bins.
double median_floor(const PowerSpectrum &ps, std::span<const std::uint64_t> exclude = {});

struct PeakDetectionOptions {
    std::optional<double> expected_spacing;  // bins between overtones
    double threshold_factor = 10.0;          // over the median floor
};

struct PeakRecord {
    std::uint64_t m_peak = 0;
    double height = 0.0;
    double local_background = 0.0;
    double area = 0.0;      // sum over +-half spacing of (S - local background)
    bool doublet = false;   // two consecutive bins straddle the resonance
};

/// Local maxima of the lower half-spectrum exceeding threshold * floor; the DC
/// bin is ignored. Requires N >= 16.
std::vector<PeakRecord> detect_peaks(const PowerSpectrum &ps, const PeakDetectionOptions &opts = {});

/// Sum of S(m) - background(m) over [center - half_width, center + half_width],
/// clipped to 1 <= m < N. `background` is indexed by m.
double integrate_peak(const PowerSpectrum &ps, std::uint64_t center, std::uint64_t half_width,
                      std::span<const double> background);
double integrate_peak(const PowerSpectrum &ps, std::uint64_t center, std::uint64_t half_width, double background);

}  // namespace ramsey

#endif
