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

#ifndef RAMSEY_MODULATION_FIT_H
#define RAMSEY_MODULATION_FIT_H

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ramsey/analytic_spectra.h"
#include "ramsey/core_model.h"
#include "ramsey/spectral_estimation.h"

namespace ramsey {

struct PeakFitOptions {
    int ell = 1;
    int points_per_side = 4;
    int excluded_center = 3;              // odd; bins around the detected maximum left out
    std::optional<CoherenceFactor> cf;    // bracket uses cf = 1 when absent
    std::optional<std::uint64_t> peak_bin;  // skip detection and use this maximum
    bool include_mirror = true;           // add the -ell overtone's tail
    int max_iterations = 200;
    double relative_step_tol = 1e-10;
};

struct FitBounds {
    double lower = 0.0;
    double upper = 0.0;
};

struct PeakFitResult {
    double omega_p_est = 0.0;
    double a_p_est = 0.0;
    double c_offset = 0.0;
    double residual_norm = 0.0;
    std::array<double, 3> half_width{};  // 95% confidence, order (omega_p, A_p, c)
    std::size_t points_used = 0;
    std::vector<std::uint64_t> bins;
    FitBounds omega_bounds;
    FitBounds a_bounds;
    double a_from_area = 0.0;
    bool area_beyond_first_lobe = false;
    bool converged = false;
    int iterations = 0;
};

/// Model of one overtone near its resonance: Q_ell (plus the -ell tail when
/// requested) times the parity bracket, plus c.
double peak_model(int ell, double m, std::uint64_t n, double omega_p, double phase_amplitude, double c,
                  double t_cycle, double bracket, bool include_mirror);

/// Inverts J_ell^2(A) = target by bisection on [0, first maximum of J_ell].
/// Returns the lobe maximum and sets `beyond` when target exceeds J_ell^2 there.
double invert_peak_area(int ell, double j_squared_target, bool *beyond = nullptr);

/// Fits (omega_p, A_p, c) to the bins flanking the ell-th overtone.
PeakFitResult fit_peak(const PowerSpectrum &ps, const MeasurementConfig &meas, const PeakFitOptions &opts = {});

enum class FitLoss { kLinear, kLog };

struct WidthFitOptions {
    int ell = 1;
    int half_window = 12;  // bins each side of the maximum
    FitLoss loss = FitLoss::kLinear;
    bool finite_record = true;  // false: continuous Lorentzian
    std::optional<double> omega_p_hint;
    std::optional<std::uint64_t> peak_bin;
    int max_iterations = 200;
};

struct WidthFitResult {
    int ell = 1;
    double gamma_est = 0.0;  // per cycle
    double height_est = 0.0; // J_ell^2 * bracket / 8
    double omega_p_est = 0.0;
    double c_offset = 0.0;
    double residual_norm = 0.0;
    std::size_t points_used = 0;
    bool unresolvable = false;  // gamma N / 2 pi < 1
    bool converged = false;
};

/// Fits the broadened ell-th overtone: height * kernel(gamma, detuning) + c.
WidthFitResult fit_lorentzian_width(const PowerSpectrum &ps, const MeasurementConfig &meas,
                                    const WidthFitOptions &opts = {});

struct TailOptions {
    double resonance_bin = 0.0;  // N ell omega_p t_cyc / 2 pi
    int inner = 2;               // smallest |m - resonance_bin| used, in whole bins
    int outer = 6;
    double floor = 0.0;          // subtracted before taking logs
};

/// Least-squares slope of log(S - floor) against log|m - resonance_bin|.
double tail_exponent(const PowerSpectrum &ps, const TailOptions &opts);

}  // namespace ramsey

#endif
