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

#include "ramsey/modulation_fit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ramsey/bessel.h"
#include "ramsey/errors.h"
#include "ramsey/least_squares.h"

namespace ramsey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

/// Shape G = sin^2(l N w t / 2) / sin^2(delta / 2) and dG/domega for signed l.
void fejer_shape(int l, double m, std::uint64_t n, double omega, double t_cycle, double *g, double *dg) {
    double nn = static_cast<double>(n);
    double half_arg = 0.5 * l * nn * omega * t_cycle;
    double s = std::sin(half_arg);
    double s2 = s * s;
    double ds2 = 0.5 * l * nn * t_cycle * std::sin(2 * half_arg);
    double delta = peak_detuning(l, m, n, omega * t_cycle);
    double sd = std::sin(0.5 * delta);
    double d2 = sd * sd;
    if (d2 < 1e-30) {
        throw ResonanceSingularity("peak fit window touches the resonance");
    }
    double dd2 = -0.5 * l * t_cycle * std::sin(delta);
    *g = s2 / d2;
    *dg = (ds2 * d2 - s2 * dd2) / (d2 * d2);
}

/// Estimated fundamental bin spacing from the detected peak list.
std::uint64_t locate_overtone(const PowerSpectrum &ps, int ell) {
    auto peaks = detect_peaks(ps);
    if (peaks.empty()) {
        throw ConfigError("no spectral peak detected");
    }
    double m_min = static_cast<double>(peaks.front().m_peak);
    double fundamental = m_min;
    for (int k = 1; k <= 6; ++k) {
        double f = m_min / k;
        bool ok = true;
        for (const auto &p : peaks) {
            double ratio = static_cast<double>(p.m_peak) / f;
            if (std::abs(ratio - std::round(ratio)) * f > 1.5) {
                ok = false;
                break;
            }
        }
        if (ok) {
            fundamental = f;
            break;
        }
    }
    double target = fundamental * ell;
    const PeakRecord *best = nullptr;
    for (const auto &p : peaks) {
        double dist = std::abs(static_cast<double>(p.m_peak) - target);
        if (dist <= 2.0 && (!best || p.height > best->height)) {
            best = &p;
        }
    }
    if (!best) {
        throw ConfigError("overtone ell=" + std::to_string(ell) + " not detected");
    }
    return best->m_peak;
}

std::uint64_t refine_maximum(const PowerSpectrum &ps, std::uint64_t m, std::uint64_t radius) {
    std::uint64_t lo = m > radius ? m - radius : 1;
    std::uint64_t hi = std::min(ps.n / 2, m + radius);
    std::uint64_t best = m;
    for (std::uint64_t k = lo; k <= hi; ++k) {
        if (ps.values[k] > ps.values[best]) {
            best = k;
        }
    }
    return best;
}

double first_lobe_max(int ell) {
    // First zero of J'_ell via bisection on the derivative.
    double lo = 0.0;
    double hi = ell + 2.0 * std::cbrt(static_cast<double>(ell)) + 2.0;
    if (ell == 0) {
        return 0.0;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (bessel_j_derivative(ell, mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double peak_model(int ell, double m, std::uint64_t n, double omega_p, double phase_amplitude, double c,
                  double t_cycle, double bracket, bool include_mirror) {
    double j = bessel_j(ell, phase_amplitude);
    double pre = j * j * bracket / (8 * static_cast<double>(n));
    double g = 0.0;
    double dg = 0.0;
    fejer_shape(ell, m, n, omega_p, t_cycle, &g, &dg);
    double total = g;
    if (include_mirror) {
        fejer_shape(-ell, m, n, omega_p, t_cycle, &g, &dg);
        total += g;
    }
    return pre * total + c;
}

double invert_peak_area(int ell, double j_squared_target, bool *beyond) {
    double top = first_lobe_max(ell);
    double jt = bessel_j(ell, top);
    if (beyond) {
        *beyond = j_squared_target > jt * jt;
    }
    if (j_squared_target >= jt * jt) {
        return top;
    }
    if (j_squared_target <= 0) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = top;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double jm = bessel_j(ell, mid);
        if (jm * jm < j_squared_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PeakFitResult fit_peak(const PowerSpectrum &ps, const MeasurementConfig &meas, const PeakFitOptions &opts) {
    meas.validate();
    const std::uint64_t n = ps.n;
    const int ell = opts.ell;
    if (ell < 1) {
        throw ConfigError("fit.ell must be >= 1");
    }
    if (opts.points_per_side < 1 || opts.excluded_center < 1 || opts.excluded_center % 2 == 0) {
        throw ConfigError("fit window: points_per_side >= 1 and an odd excluded_center are required");
    }
    if (ps.values.size() != n || n < 16) {
        throw ConfigError("fit_peak: spectrum too short");
    }
    std::uint64_t center = refine_maximum(ps, opts.peak_bin ? *opts.peak_bin : locate_overtone(ps, ell), 2);
    const auto half_excl = static_cast<std::uint64_t>(opts.excluded_center / 2);
    const auto side = static_cast<std::uint64_t>(opts.points_per_side);
    if (center <= half_excl + side || center + half_excl + side > n / 2) {
        throw ConfigError("fit_peak: peak at m=" + std::to_string(center) + " is too close to the spectrum edge");
    }

    PeakFitResult out;
    for (std::uint64_t k = side; k >= 1; --k) {
        out.bins.push_back(center - half_excl - k);
    }
    for (std::uint64_t k = 1; k <= side; ++k) {
        out.bins.push_back(center + half_excl + k);
    }
    out.points_used = out.bins.size();

    const double t_cyc = meas.t_cycle;
    const double nn = static_cast<double>(n);
    const CoherenceFactor cf = opts.cf.value_or(CoherenceFactor{});
    const double bracket = parity_bracket(ell, cf, meas.phi_ramsey);
    if (bracket <= 0) {
        throw ConfigError("fit_peak: the parity bracket vanishes for this ell and phi_R");
    }

    // Area inversion for the A_p bounds.
    const std::uint64_t area_half = 8;
    std::vector<double> flank;
    for (std::uint64_t d = area_half + 1; d <= 2 * area_half; ++d) {
        if (center > d) {
            flank.push_back(ps.values[center - d]);
        }
        if (center + d <= n / 2) {
            flank.push_back(ps.values[center + d]);
        }
    }
    double local_bg = median_of(flank);
    double area = integrate_peak(ps, center, area_half, local_bg);
    out.a_from_area = invert_peak_area(ell, area / (nn / 8 * bracket), &out.area_beyond_first_lobe);
    double a0 = out.a_from_area;
    out.a_bounds = a0 > 0 ? FitBounds{0.5 * a0, 1.5 * a0} : FitBounds{0.0, first_lobe_max(ell)};

    double omega_bin = kTwoPi * static_cast<double>(center) / (nn * ell * t_cyc);
    double half_range = kTwoPi / (nn * t_cyc);
    out.omega_bounds = {omega_bin - half_range, omega_bin + half_range};
    double c0 = std::max(0.0, median_floor(ps));

    std::vector<double> ms(out.bins.begin(), out.bins.end());
    std::vector<double> ys;
    for (auto m : out.bins) {
        ys.push_back(ps.values[m]);
    }

    ResidualFunction fn = [&](const std::vector<double> &x, std::vector<double> &r,
                              std::vector<std::vector<double>> *jac) {
        double omega = x[0];
        double a = x[1];
        double c = x[2];
        double j = bessel_j(ell, a);
        double dj = bessel_j_derivative(ell, a);
        double scale = bracket / (8 * nn);
        r.resize(ms.size());
        if (jac) {
            jac->assign(ms.size(), std::vector<double>(3));
        }
        for (std::size_t i = 0; i < ms.size(); ++i) {
            double g = 0.0;
            double dg = 0.0;
            fejer_shape(ell, ms[i], n, omega, t_cyc, &g, &dg);
            if (opts.include_mirror) {
                double g2 = 0.0;
                double dg2 = 0.0;
                fejer_shape(-ell, ms[i], n, omega, t_cyc, &g2, &dg2);
                g += g2;
                dg += dg2;
            }
            r[i] = scale * j * j * g + c - ys[i];
            if (jac) {
                (*jac)[i] = {scale * j * j * dg, scale * 2 * j * dj * g, 1.0};
            }
        }
    };

    std::vector<double> lower = {out.omega_bounds.lower, out.a_bounds.lower, 0.0};
    std::vector<double> upper = {out.omega_bounds.upper, out.a_bounds.upper, kInf};
    LeastSquaresOptions lso;
    lso.max_iterations = opts.max_iterations;
    lso.relative_step_tol = opts.relative_step_tol;

    // The sin^2(N omega t_cyc / 2) factor makes the cost oscillate in omega
    // across the bounds, so start from a grid of frequencies.
    constexpr int kStarts = 41;
    LeastSquaresResult best;
    bool have = false;
    for (int s = 0; s < kStarts; ++s) {
        double w0 = lower[0] + (upper[0] - lower[0]) * (s + 0.5) / kStarts;
        LeastSquaresResult res;
        try {
            res = bounded_least_squares(fn, {w0, std::clamp(a0, lower[1], upper[1]), c0}, lower, upper, lso);
        } catch (const NumericError &) {
            continue;
        }
        if (!have || res.cost < best.cost) {
            best = std::move(res);
            have = true;
        }
    }
    if (!have) {
        throw NumericError("fit_peak: every start hit a resonance singularity");
    }
    out.omega_p_est = best.x[0];
    out.a_p_est = best.x[1];
    out.c_offset = best.x[2];
    out.residual_norm = std::sqrt(best.cost);
    out.converged = best.converged;
    out.iterations = best.iterations;
    auto dof = static_cast<double>(ms.size()) - 3.0;
    if (dof > 0 && !best.covariance_unscaled.empty()) {
        double s2 = best.cost / dof;
        for (std::size_t k = 0; k < 3; ++k) {
            out.half_width[k] = 1.96 * std::sqrt(std::max(0.0, s2 * best.covariance_unscaled[k][k]));
        }
    }
    return out;
}

WidthFitResult fit_lorentzian_width(const PowerSpectrum &ps, const MeasurementConfig &meas,
                                    const WidthFitOptions &opts) {
    meas.validate();
    const std::uint64_t n = ps.n;
    const int ell = opts.ell;
    if (ell < 1 || opts.half_window < 3) {
        throw ConfigError("width fit: ell >= 1 and half_window >= 3 are required");
    }
    const double nn = static_cast<double>(n);
    const double t_cyc = meas.t_cycle;
    std::uint64_t guess;
    if (opts.peak_bin) {
        guess = *opts.peak_bin;
    } else if (opts.omega_p_hint) {
        guess = static_cast<std::uint64_t>(std::llround(nn * ell * *opts.omega_p_hint * t_cyc / kTwoPi));
    } else {
        guess = locate_overtone(ps, ell);
    }
    const auto hw = static_cast<std::uint64_t>(opts.half_window);
    std::uint64_t center = refine_maximum(ps, guess, 2);
    if (center <= hw || center + hw > n / 2) {
        throw ConfigError("width fit: peak window leaves the spectrum");
    }

    std::vector<double> ms;
    std::vector<double> ys;
    for (std::uint64_t m = center - hw; m <= center + hw; ++m) {
        if (opts.loss == FitLoss::kLog && ps.values[m] <= 0) {
            continue;
        }
        ms.push_back(static_cast<double>(m));
        ys.push_back(ps.values[m]);
    }

    auto kernel = [&](double gamma, double detuning) {
        if (opts.finite_record) {
            return finite_record_kernel(gamma, detuning, n);
        }
        return 2 * gamma / (gamma * gamma + detuning * detuning);
    };
    ResidualFunction fn = [&](const std::vector<double> &x, std::vector<double> &r,
                              std::vector<std::vector<double>> *) {
        double omega_t = x[0] * t_cyc;
        r.resize(ms.size());
        for (std::size_t i = 0; i < ms.size(); ++i) {
            double k = kernel(x[2], peak_detuning(ell, ms[i], n, omega_t)) +
                       kernel(x[2], peak_detuning(-ell, ms[i], n, omega_t));
            double model = x[1] * k + x[3];
            r[i] = opts.loss == FitLoss::kLog ? std::log(std::max(model, 1e-300)) - std::log(ys[i]) : model - ys[i];
        }
    };

    double c0 = std::max(0.0, median_floor(ps));
    double area = 0.0;
    for (double y : ys) {
        area += y - c0;
    }
    double h0 = std::max(area / nn, 1e-12);
    double bin_omega = kTwoPi / (nn * ell * t_cyc);
    double omega0 = static_cast<double>(center) * bin_omega;
    std::vector<double> lower = {omega0 - 2 * bin_omega, 0.0, 1e-9, 0.0};
    std::vector<double> upper = {omega0 + 2 * bin_omega, 20 * h0, 1.0, kInf};
    LeastSquaresOptions lso;
    lso.max_iterations = opts.max_iterations;

    LeastSquaresResult best;
    bool have = false;
    for (int s = -5; s <= 5; ++s) {
        for (double g_bins : {0.25, 1.0, 4.0}) {
            double g0 = g_bins * kTwoPi / nn;
            auto res = bounded_least_squares(fn, {omega0 + 0.2 * s * bin_omega, h0, g0, c0}, lower, upper, lso);
            if (!have || res.cost < best.cost) {
                best = std::move(res);
                have = true;
            }
        }
    }
    WidthFitResult out;
    out.ell = ell;
    out.omega_p_est = best.x[0];
    out.height_est = best.x[1];
    out.gamma_est = best.x[2];
    out.c_offset = best.x[3];
    out.residual_norm = std::sqrt(best.cost);
    out.points_used = ms.size();
    out.converged = best.converged;
    out.unresolvable = out.gamma_est * nn / kTwoPi < 1.0;
    return out;
}

double tail_exponent(const PowerSpectrum &ps, const TailOptions &opts) {
    if (opts.inner < 1 || opts.outer <= opts.inner) {
        throw ConfigError("tail_exponent: need 1 <= inner < outer");
    }
    auto base = static_cast<std::int64_t>(std::llround(opts.resonance_bin));
    std::vector<double> lx;
    std::vector<double> ly;
    for (int k = opts.inner; k <= opts.outer; ++k) {
        for (int sign : {-1, 1}) {
            std::int64_t m = base + sign * k;
            if (m < 1 || m >= static_cast<std::int64_t>(ps.n)) {
                continue;
            }
            double y = ps.values[static_cast<std::size_t>(m)] - opts.floor;
            double eps = std::abs(static_cast<double>(m) - opts.resonance_bin);
            if (y > 0 && eps > 0) {
                lx.push_back(std::log(eps));
                ly.push_back(std::log(y));
            }
        }
    }
    if (lx.size() < 2) {
        throw NumericError("tail_exponent: fewer than two usable tail bins");
    }
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace ramsey
