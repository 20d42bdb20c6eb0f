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

#ifndef RAMSEY_ANALYTIC_SPECTRA_H
#define RAMSEY_ANALYTIC_SPECTRA_H

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ramsey/bessel.h"
#include "ramsey/noise_sources.h"

namespace ramsey {

/// Noise average <exp(i theta^(r))> = exp(-R + i Theta).
struct CoherenceFactor {
    std::complex<double> value{1.0, 0.0};

    double magnitude() const {
        return std::abs(value);
    }
    /// R in exp(-R).
    double decay() const {
        return -std::log(std::abs(value));
    }
    /// Theta^(r).
    double phase() const {
        return std::arg(value);
    }
};

/// Noise spectrum S_q(omega) = int dt e^{i omega t} <dw(t) dw(0)>.
using NoiseSpectrum = std::function<double(double)>;

// ---- Discrete peak profiles ------------------------------------------------

/// 2 pi m / N - ell * omega_p t_cyc wrapped into [-pi, pi).
double peak_detuning(int ell, double m, std::uint64_t n, double omega_t_cycle);

/// Finite-N peak shape Q_ell(m). Throws ResonanceSingularity when the bin sits
/// on the resonance (denominator below 1e-30).
double peak_profile_q(int ell, double m, std::uint64_t n, double phase_amplitude, double omega_t_cycle);

/// Weight (pi/4) J_ell^2(A_p) of the delta-function limit of Q_ell.
double peak_delta_area(int ell, double phase_amplitude);

/// Q_ell(m), or the delta-limit bin value N J_ell^2 / 8 when the bin is within
/// 1e-9 of exact resonance.
double peak_profile_q_rendered(int ell, double m, std::uint64_t n, double phase_amplitude, double omega_t_cycle);

/// |cf|^2 + (-1)^ell Re[cf^2 e^{2 i phi_R}].
double parity_bracket(int ell, const CoherenceFactor &cf, double phi_ramsey);

/// S(m|ell) = Q_ell(m) * parity_bracket.
double spectral_peak(int ell, double m, std::uint64_t n, double phase_amplitude, double omega_t_cycle,
                     const CoherenceFactor &cf, double phi_ramsey);

/// Measurement-noise floor (1/8)[1 - J_0(2 A_p) Re(cf2 e^{2 i phi_R})].
double white_floor(double phase_amplitude, double phi_ramsey, std::complex<double> cf2 = {1.0, 0.0});

// ---- Coherence factors -----------------------------------------------------

/// <exp(i q theta^(r))> for independent TLSs, q in {1, 2}.
CoherenceFactor tls_coherence_factor(const TlsEnsemble &ens, double t_ramsey, int multiplier = 1);

/// Short-t_R expansion of <exp(i theta^(r))> through order t_R^3.
std::complex<double> tls_small_tr_expansion(const TlsEnsemble &ens, double t_ramsey);

CoherenceFactor gaussian_coherence_factor(double decay);

/// (F_+, F_-) = (exp(-2R - f), exp(-2R + f)).
std::pair<double, double> gaussian_f_pm(double decay, double correlator);

// ---- Noise-induced background ----------------------------------------------

/// S_q(omega) = sum_n 2 w^2 V^2 W / (W^2 + omega^2) for independent TLSs.
double telegraph_sq(const TlsEnsemble &ens, double omega);

/// f(lag) = (t_R^2 / 2 pi) int d omega S_q(omega) exp(-i omega t_cyc lag), by
/// Fourier quadrature of an arbitrary even S_q.
double phase_correlator_f(const NoiseSpectrum &sq, double t_ramsey, double t_cycle, std::int64_t lag);

/// Closed form of phase_correlator_f for TLS noise: t_R^2 sum w^2 V^2 e^{-W t_cyc |lag|}.
double telegraph_phase_correlator(const TlsEnsemble &ens, double t_ramsey, double t_cycle, std::int64_t lag);

struct BackgroundOptions {
    double zeta_minus = 1.0;
    std::complex<double> zeta_plus{1.0, 0.0};
    /// 0 selects the smallest ell_max with J_{ell_max}^2(A_p) < 1e-12.
    int ell_max = 0;
};

/// Smallest ell with J_ell^2(A_p) below 1e-12 (at most kBesselMaxOrder).
int background_ell_max(double phase_amplitude);

/// Delta S(m): noise spectrum replicated at the modulation overtones.
double background(double m, std::uint64_t n, double phase_amplitude, double phi_ramsey, const NoiseSpectrum &sq,
                  double t_ramsey, double t_cycle, double omega_p, const BackgroundOptions &opts = {});

// ---- Broadening ------------------------------------------------------------

/// Continuous-limit Lorentzian (1/4) J_ell^2 Gamma / (Gamma^2 + detuning^2).
double lorentzian_peak(int ell, double m, std::uint64_t n, double phase_amplitude, double gamma,
                       double omega_t_cycle);

/// Lorentzian-broadened peak for a record of finite length N:
/// (J_ell^2 / 8N) sum_{n1,n2} e^{-Gamma |n1-n2|} e^{i delta (n1-n2)}.
/// Reduces to Q_ell at Gamma = 0 and to lorentzian_peak for Gamma N >> 1.
double finite_record_lorentzian(int ell, double m, std::uint64_t n, double phase_amplitude, double gamma,
                                double omega_t_cycle);

/// Bracket of finite_record_lorentzian without the J_ell^2 / 8 prefactor:
/// N^{-1} sum_{n1,n2} e^{-gamma |n1-n2|} e^{i detuning (n1-n2)}.
double finite_record_kernel(double gamma, double detuning, std::uint64_t n);

/// Gamma_ell from modulation-frequency noise (per-cycle units).
double gamma_ell(const ModFreqNoiseSpec &spec, double t_cycle, int ell);

/// Gamma~_ell from iid cycle jitter.
double gamma_tilde_ell(const CycleJitterSpec &jitter, double omega_p, int ell);

// ---- Tunable Fourier transform ---------------------------------------------

/// |Y(nu; M)| near nu = omega_p t_cyc; with a decay rate gamma_1 > 0 the
/// saturating broadened form is used.
double tunable_ft_analytic(double nu, std::uint64_t m_terms, std::uint64_t n, double phase_amplitude,
                           double phi_ramsey, double omega_t_cycle, std::optional<double> gamma_1 = std::nullopt);

// ---- Total spectrum ----------------------------------------------------------

enum class PeakRendering {
    kExact,       // finite-N Q_ell
    kDelta,       // delta-area bin values only at the nearest bin
    kLorentzian,  // Gamma_ell = ell^2 Gamma_1, continuous limit
    kFiniteLorentzian,
};

struct SpectrumComponents {
    bool peaks = true;
    bool background = true;
    bool white = true;
};

struct SpectrumModel {
    std::uint64_t n = 100000;
    double phase_amplitude = 0.0;
    double omega_p = 1e-3;
    double t_ramsey = 1.0;
    double t_cycle = 3.0;
    double phi_ramsey = 0.0;
    CoherenceFactor cf;                       // <e^{i theta}>
    std::complex<double> cf2{1.0, 0.0};       // <e^{2 i theta}>
    NoiseSpectrum sq;                         // empty: no background
    BackgroundOptions background_opts;
    PeakRendering rendering = PeakRendering::kExact;
    double gamma_1 = 0.0;                     // Lorentzian renderings
    int peak_ell_max = 0;                     // 0: background_ell_max(A_p)
    SpectrumComponents components;
};

struct SpectrumPrediction {
    std::uint64_t n = 0;
    std::vector<double> values;      // total, m = 0..N-1
    std::vector<double> peaks;
    std::vector<double> background;
    double white = 0.0;
};

/// Sum over overtones 0 < |ell| <= ell_max of the peaks, plus the background
/// and white floor. The m = 0 bin carries only the white floor.
SpectrumPrediction total_spectrum(const SpectrumModel &model);

}  // namespace ramsey

#endif
