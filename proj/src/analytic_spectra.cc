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

#include "ramsey/analytic_spectra.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "ramsey/core_model.h"
#include "ramsey/errors.h"

namespace ramsey {

namespace {

using cplx = std::complex<double>;

constexpr double kSingularDenominator = 1e-30;
constexpr double kDeltaRenderWindow = 1e-9;

double sq(double x) {
    return x * x;
}

double parity_sign(int ell) {
    return (ell % 2 == 0) ? 1.0 : -1.0;
}

/// Xi(t) e^{-i V t <tau_z>} for one TLS with coupling scaled by q.
cplx single_tls_factor(const TlsParams &tls, double t, double q) {
    double v = q * tls.coupling;
    double w = tls.total_rate();
    double dw = tls.rate_asymmetry();
    cplx gamma = 0.5 * std::sqrt(cplx(w * w - 4 * v * v, 4 * v * dw));
    if (gamma.real() < 0) {
        gamma = -gamma;
    }
    // cosh(g t) e^{-W t/2} and sinh(g t)/g e^{-W t/2}, written with decaying exponentials.
    cplx e_plus = std::exp((gamma - 0.5 * w) * t);
    cplx e_minus = std::exp((-gamma - 0.5 * w) * t);
    cplx cosh_part = 0.5 * (e_plus + e_minus);
    cplx sinhc_part;
    if (std::abs(gamma * t) < 1e-6) {
        cplx gt2 = (gamma * t) * (gamma * t);
        sinhc_part = t * (1.0 + gt2 / 6.0) * std::exp(-0.5 * w * t);
    } else {
        sinhc_part = 0.5 * (e_plus - e_minus) / gamma;
    }
    cplx xi = (0.5 * w + cplx(0, 1) * v * dw / w) * sinhc_part + cosh_part;
    return std::exp(cplx(0, -v * t * dw / w)) * xi;
}

}  // namespace

double peak_detuning(int ell, double m, std::uint64_t n, double omega_t_cycle) {
    double d = kTwoPi * m / static_cast<double>(n) - ell * omega_t_cycle;
    return d - kTwoPi * std::floor((d + kPi) / kTwoPi);
}

double peak_profile_q(int ell, double m, std::uint64_t n, double phase_amplitude, double omega_t_cycle) {
    double den = sq(std::sin(0.5 * peak_detuning(ell, m, n, omega_t_cycle)));
    if (den < kSingularDenominator) {
        throw ResonanceSingularity("peak_profile_q: bin m=" + std::to_string(m) + " sits on the resonance of ell=" +
                                   std::to_string(ell));
    }
    double nn = static_cast<double>(n);
    double num = sq(std::sin(0.5 * ell * nn * omega_t_cycle));
    return sq(bessel_j(ell, phase_amplitude)) / (8 * nn) * num / den;
}

double peak_delta_area(int ell, double phase_amplitude) {
    return 0.25 * kPi * sq(bessel_j(ell, phase_amplitude));
}

double peak_profile_q_rendered(int ell, double m, std::uint64_t n, double phase_amplitude, double omega_t_cycle) {
    if (std::abs(peak_detuning(ell, m, n, omega_t_cycle)) < kDeltaRenderWindow) {
        return static_cast<double>(n) / 8 * sq(bessel_j(ell, phase_amplitude));
    }
    return peak_profile_q(ell, m, n, phase_amplitude, omega_t_cycle);
}

double parity_bracket(int ell, const CoherenceFactor &cf, double phi_ramsey) {
    cplx rotated = cf.value * cf.value * std::exp(cplx(0, 2 * phi_ramsey));
    return std::norm(cf.value) + parity_sign(ell) * rotated.real();
}

double spectral_peak(int ell, double m, std::uint64_t n, double phase_amplitude, double omega_t_cycle,
                     const CoherenceFactor &cf, double phi_ramsey) {
    return peak_profile_q(ell, m, n, phase_amplitude, omega_t_cycle) * parity_bracket(ell, cf, phi_ramsey);
}

double white_floor(double phase_amplitude, double phi_ramsey, std::complex<double> cf2) {
    double re = (cf2 * std::exp(cplx(0, 2 * phi_ramsey))).real();
    return 0.125 * (1 - bessel_j(0, 2 * phase_amplitude) * re);
}

CoherenceFactor tls_coherence_factor(const TlsEnsemble &ens, double t_ramsey, int multiplier) {
    if (multiplier != 1 && multiplier != 2) {
        throw ConfigError("tls_coherence_factor: multiplier must be 1 or 2");
    }
    CoherenceFactor cf;
    for (const auto &tls : ens) {
        tls.validate();
        cf.value *= single_tls_factor(tls, t_ramsey, multiplier);
    }
    return cf;
}

std::complex<double> tls_small_tr_expansion(const TlsEnsemble &ens, double t_ramsey) {
    double t2 = t_ramsey * t_ramsey;
    double t3 = t2 * t_ramsey;
    cplx acc = 1.0;
    for (const auto &tls : ens) {
        double w2v2 = sq(tls.symmetry_factor() * tls.coupling);
        double w = tls.total_rate();
        acc += -0.5 * w2v2 * t2 + w2v2 * cplx(0.5 * w, tls.coupling * tls.rate_asymmetry() / w) * t3 / 3.0;
    }
    return acc;
}

CoherenceFactor gaussian_coherence_factor(double decay) {
    return CoherenceFactor{cplx(std::exp(-decay), 0)};
}

std::pair<double, double> gaussian_f_pm(double decay, double correlator) {
    return {std::exp(-2 * decay - correlator), std::exp(-2 * decay + correlator)};
}

double telegraph_sq(const TlsEnsemble &ens, double omega) {
    double s = 0;
    for (const auto &tls : ens) {
        double w = tls.total_rate();
        s += 2 * sq(tls.symmetry_factor() * tls.coupling) * w / (w * w + omega * omega);
    }
    return s;
}

double phase_correlator_f(const NoiseSpectrum &sq_fn, double t_ramsey, double t_cycle, std::int64_t lag) {
    double t = t_cycle * static_cast<double>(lag < 0 ? -lag : lag);
    double integral;
    if (t == 0) {
        boost::math::quadrature::exp_sinh<double> integrator;
        integral = integrator.integrate(sq_fn, 0.0, std::numeric_limits<double>::infinity());
    } else {
        boost::math::quadrature::ooura_fourier_cos<double> integrator;
        integral = integrator.integrate(sq_fn, t).first;
    }
    // S_q is even, so the two-sided integral is twice the half-line cosine transform.
    return t_ramsey * t_ramsey / kPi * integral;
}

double telegraph_phase_correlator(const TlsEnsemble &ens, double t_ramsey, double t_cycle, std::int64_t lag) {
    double t = t_cycle * static_cast<double>(lag < 0 ? -lag : lag);
    double f = 0;
    for (const auto &tls : ens) {
        f += sq(tls.symmetry_factor() * tls.coupling) * std::exp(-tls.total_rate() * t);
    }
    return t_ramsey * t_ramsey * f;
}

int background_ell_max(double phase_amplitude) {
    int ell = static_cast<int>(std::ceil(std::abs(phase_amplitude)));
    for (; ell < kBesselMaxOrder; ++ell) {
        if (sq(bessel_j(ell, phase_amplitude)) < 1e-12) {
            return ell;
        }
    }
    return kBesselMaxOrder;
}

double background(double m, std::uint64_t n, double phase_amplitude, double phi_ramsey, const NoiseSpectrum &sq_fn,
                  double t_ramsey, double t_cycle, double omega_p, const BackgroundOptions &opts) {
    double nn = static_cast<double>(n);
    double mw = m - nn * std::round(m / nn);
    double omega = kTwoPi * mw / (nn * t_cycle);
    int ell_max = opts.ell_max > 0 ? std::min(opts.ell_max, kBesselMaxOrder) : background_ell_max(phase_amplitude);
    double zeta_rot = (opts.zeta_plus * std::exp(cplx(0, 2 * phi_ramsey))).real();
    double acc = 0;
    for (int ell = -ell_max; ell <= ell_max; ++ell) {
        double weight = sq(bessel_j(ell, phase_amplitude)) * (opts.zeta_minus - parity_sign(ell) * zeta_rot);
        if (weight != 0) {
            acc += weight * sq_fn(omega - ell * omega_p);
        }
    }
    return t_ramsey * t_ramsey / (8 * t_cycle) * acc;
}

double lorentzian_peak(int ell, double m, std::uint64_t n, double phase_amplitude, double gamma,
                       double omega_t_cycle) {
    double d = peak_detuning(ell, m, n, omega_t_cycle);
    return 0.25 * sq(bessel_j(ell, phase_amplitude)) * gamma / (gamma * gamma + d * d);
}

double finite_record_kernel(double gamma, double detuning, std::uint64_t n) {
    double nn = static_cast<double>(n);
    cplx z = std::exp(cplx(-gamma, detuning));
    cplx one_minus = 1.0 - z;
    if (std::abs(one_minus) < 1e-7) {
        // Direct lag sum; the closed form cancels catastrophically here.
        cplx acc = 0;
        cplx zk = 1;
        for (std::uint64_t k = 1; k < n; ++k) {
            zk *= z;
            acc += static_cast<double>(n - k) * zk;
        }
        return 1 + 2 * acc.real() / nn;
    }
    cplx zn = std::exp(cplx(-gamma * nn, detuning * nn));
    return 1 + 2 * (z / one_minus).real() - 2 / nn * (z * (1.0 - zn) / (one_minus * one_minus)).real();
}

double finite_record_lorentzian(int ell, double m, std::uint64_t n, double phase_amplitude, double gamma,
                                double omega_t_cycle) {
    if (gamma == 0) {
        return peak_profile_q_rendered(ell, m, n, phase_amplitude, omega_t_cycle);
    }
    double d = peak_detuning(ell, m, n, omega_t_cycle);
    return sq(bessel_j(ell, phase_amplitude)) / 8 * finite_record_kernel(gamma, d, n);
}

double gamma_ell(const ModFreqNoiseSpec &spec, double t_cycle, int ell) {
    double l2 = static_cast<double>(ell) * ell;
    switch (spec.kind) {
        case ModFreqNoiseKind::kWhite:
            return 0.5 * l2 * t_cycle * spec.sigma2;
        case ModFreqNoiseKind::kOu:
            // int Xi(t) dt = 2 D tau_corr for Xi(t) = D exp(-|t| / tau_corr).
            return 0.5 * l2 * t_cycle * 2 * spec.ou.variance * spec.ou.tau_corr;
        case ModFreqNoiseKind::kNone:
            break;
    }
    return 0.0;
}

double gamma_tilde_ell(const CycleJitterSpec &jitter, double omega_p, int ell) {
    double l2 = static_cast<double>(ell) * ell;
    return 0.5 * l2 * omega_p * omega_p * jitter.std_dev * jitter.std_dev;
}

double tunable_ft_analytic(double nu, std::uint64_t m_terms, std::uint64_t n, double phase_amplitude,
                           double phi_ramsey, double omega_t_cycle, std::optional<double> gamma_1) {
    double prefactor = std::abs(std::sin(phi_ramsey) * bessel_j(1, phase_amplitude)) / (2 * static_cast<double>(n));
    double detune = nu - omega_t_cycle;
    double mm = static_cast<double>(m_terms);
    if (gamma_1 && *gamma_1 > 0) {
        double g = *gamma_1;
        // |1 - e^{-g M} e^{i M detune}|^2 written without cancellation.
        double one_minus = -std::expm1(-g * mm);
        double half = std::sin(0.5 * mm * detune);
        double num = one_minus * one_minus + 4 * (1 - one_minus) * half * half;
        return prefactor * std::sqrt(num) / std::sqrt(g * g + detune * detune);
    }
    double s = std::sin(0.5 * detune);
    if (std::abs(s) < 1e-15) {
        return prefactor * mm;
    }
    return prefactor * std::abs(std::sin(0.5 * detune * mm) / s);
}

SpectrumPrediction total_spectrum(const SpectrumModel &model) {
    if (model.n < 2) {
        throw ConfigError("total_spectrum: N must be >= 2");
    }
    const std::uint64_t n = model.n;
    const double omega_t = model.omega_p * model.t_cycle;
    const int ell_max = model.peak_ell_max > 0 ? std::min(model.peak_ell_max, kBesselMaxOrder)
                                               : background_ell_max(model.phase_amplitude);

    SpectrumPrediction out;
    out.n = n;
    out.values.assign(n, 0.0);
    out.peaks.assign(n, 0.0);
    out.background.assign(n, 0.0);
    out.white = model.components.white ? white_floor(model.phase_amplitude, model.phi_ramsey, model.cf2) : 0.0;

    if (model.components.peaks) {
        for (int ell = -ell_max; ell <= ell_max; ++ell) {
            if (ell == 0) {
                continue;
            }
            int order = std::abs(ell);
            double bracket = parity_bracket(order, model.cf, model.phi_ramsey);
            if (bracket == 0 || bessel_j(order, model.phase_amplitude) == 0) {
                continue;
            }
            double gamma = model.gamma_1 * order * order;
            if (model.rendering == PeakRendering::kDelta) {
                double center = static_cast<double>(n) * ell * omega_t / kTwoPi;
                double m = std::round(center - static_cast<double>(n) * std::floor(center / static_cast<double>(n)));
                auto idx = static_cast<std::uint64_t>(m) % n;
                if (idx != 0) {
                    out.peaks[idx] += static_cast<double>(n) / kTwoPi * peak_delta_area(order, model.phase_amplitude) *
                                      bracket;
                }
                continue;
            }
            for (std::uint64_t m = 1; m < n; ++m) {
                double md = static_cast<double>(m);
                double q = 0;
                switch (model.rendering) {
                    case PeakRendering::kExact:
                        q = peak_profile_q_rendered(ell, md, n, model.phase_amplitude, omega_t);
                        break;
                    case PeakRendering::kLorentzian:
                        q = lorentzian_peak(ell, md, n, model.phase_amplitude, gamma, omega_t);
                        break;
                    case PeakRendering::kFiniteLorentzian:
                        q = finite_record_lorentzian(ell, md, n, model.phase_amplitude, gamma, omega_t);
                        break;
                    case PeakRendering::kDelta:
                        break;
                }
                out.peaks[m] += q * bracket;
            }
        }
    }

    if (model.components.background && model.sq) {
        for (std::uint64_t m = 1; m < n; ++m) {
            out.background[m] = background(static_cast<double>(m), n, model.phase_amplitude, model.phi_ramsey, model.sq,
                                           model.t_ramsey, model.t_cycle, model.omega_p, model.background_opts);
        }
    }

    for (std::uint64_t m = 0; m < n; ++m) {
        out.values[m] = out.peaks[m] + out.background[m] + out.white;
    }
    return out;
}

}  // namespace ramsey
