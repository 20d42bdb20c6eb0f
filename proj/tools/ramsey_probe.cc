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

// ramsey_probe: simulate Ramsey outcome records, estimate and predict their
// power spectra, fit modulation parameters and scan the tunable transform.

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey/config.h"
#include "ramsey/errors.h"
#include "ramsey/io.h"
#include "ramsey/modulation_fit.h"
#include "ramsey/parallel.h"
#include "ramsey/simulator.h"
#include "ramsey/spectral_estimation.h"

namespace fs = std::filesystem;
using namespace ramsey;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr std::uint64_t kWriteBlock = 256;

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open " + path + " for writing");
    }
    out << text << '\n';
}

double parse_number(const std::string &s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

/// "a,b,c" or "lin:start:stop:count".
std::vector<double> parse_grid(const std::string &spec) {
    if (spec.rfind("lin:", 0) == 0) {
        auto parts = split(spec.substr(4), ':');
        if (parts.size() != 3) {
            throw ConfigError("grid '" + spec + "': expected lin:start:stop:count");
        }
        double a = parse_number(parts[0]);
        double b = parse_number(parts[1]);
        auto count = static_cast<long>(parse_number(parts[2]));
        if (count < 1) {
            throw ConfigError("grid '" + spec + "': count must be positive");
        }
        std::vector<double> out;
        for (long i = 0; i < count; ++i) {
            out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
        return out;
    }
    std::vector<double> out;
    for (const auto &p : split(spec, ',')) {
        out.push_back(parse_number(p));
    }
    if (out.empty()) {
        throw ConfigError("empty grid");
    }
    return out;
}

RunConfig config_or_default(const std::string &path) {
    return path.empty() ? RunConfig{} : load_config(path);
}

int cmd_simulate(const std::string &config_path, std::optional<std::uint64_t> seed, const std::string &out,
                 std::optional<std::size_t> threads, std::string manifest_path) {
    RunConfig cfg = load_config(config_path);
    if (seed) {
        cfg.exec.seed = *seed;
    }
    if (threads) {
        cfg.exec.threads = *threads;
    }
    if (manifest_path.empty()) {
        manifest_path = out + ".manifest.json";
    }
    RunManifest manifest;
    manifest.started_utc = utc_timestamp();
    manifest.master_seed = cfg.exec.seed;
    manifest.tool_version = build_version();
    manifest.config_json = config_to_json(cfg);

    SequenceSampler sampler(cfg.meas, cfg.mod, cfg.noise);
    const std::uint64_t k = cfg.meas.num_repetitions;
    const std::size_t workers = resolve_threads(cfg.exec.threads);
    OutcomeWriter writer(out, cfg.meas.num_outcomes);
    for (std::uint64_t start = 0; start < k; start += kWriteBlock) {
        std::uint64_t count = std::min(kWriteBlock, k - start);
        std::vector<OutcomeRun> block(count);
        parallel_for(count, workers, [&](std::size_t i) { block[i] = sampler.sample(cfg.exec.seed, start + i); });
        for (const auto &run : block) {
            writer.write(run.bits);
        }
    }
    writer.close();
    manifest.digests[fs::path(out).filename().string()] = sha256_file(out);
    manifest.finished_utc = utc_timestamp();
    write_manifest(manifest_path, manifest);
    std::cout << "wrote " << k << " runs of N=" << cfg.meas.num_outcomes << " to " << out << "\n";
    return 0;
}

int cmd_spectrum(const std::string &in, const std::string &out, std::string sidecar, const std::string &config_path,
                 std::optional<std::size_t> threads, bool check_parseval) {
    auto runs = read_outcomes(in);
    Experiment exp;
    for (std::uint64_t i = 0; i < runs.size(); ++i) {
        exp.runs.push_back(OutcomeRun{std::move(runs[i]), i, 0.0});
    }
    SpectrumMetadata meta;
    if (!config_path.empty()) {
        RunConfig cfg = load_config(config_path);
        meta.config_json = config_to_json(cfg);
        meta.seed = cfg.exec.seed;
    }
    PowerSpectrum ps = power_spectrum(exp, threads.value_or(0));
    if (check_parseval) {
        double mean_ones = 0;
        for (const auto &r : exp.runs) {
            mean_ones += static_cast<double>(r.bits.count_ones());
        }
        mean_ones /= static_cast<double>(exp.runs.size());
        double total = 0;
        for (double v : ps.values) {
            total += v;
        }
        double residual = total - mean_ones;
        std::cout << "parseval residual " << format_double(residual) << "\n";
        if (std::abs(residual) > 1e-9 * std::max(1.0, mean_ones)) {
            throw NumericError("Parseval check failed");
        }
    }
    write_spectrum_csv(out, ps.values);
    meta.n = ps.n;
    meta.k = ps.k_averaged;
    meta.source = "spectrum " + fs::path(in).filename().string();
    write_spectrum_sidecar(sidecar.empty() ? out + ".json" : sidecar, meta);
    return 0;
}

int cmd_predict(const std::string &config_path, const std::string &components, const std::string &out) {
    RunConfig cfg = load_config(config_path);
    SpectrumModel model = spectrum_model_for(cfg);
    model.components = {false, false, false};
    bool want_lorentzian = false;
    for (const auto &c : split(components, ',')) {
        if (c == "peaks") {
            model.components.peaks = true;
        } else if (c == "background") {
            model.components.background = true;
        } else if (c == "white") {
            model.components.white = true;
        } else if (c == "lorentzian") {
            want_lorentzian = true;
            model.components.peaks = true;
        } else {
            throw ConfigError("--components: unknown component '" + c + "'");
        }
    }
    if (want_lorentzian) {
        if (model.gamma_1 <= 0) {
            throw ConfigError("--components lorentzian needs modulation-frequency noise or cycle jitter in the config");
        }
        model.rendering = PeakRendering::kLorentzian;
    }
    auto pred = total_spectrum(model);
    std::vector<double> m(pred.n);
    for (std::uint64_t i = 0; i < pred.n; ++i) {
        m[i] = static_cast<double>(i);
    }
    std::vector<std::string> names = {"m", "S"};
    std::vector<std::vector<double>> cols = {m, pred.values};
    if (model.components.peaks) {
        names.push_back("peaks");
        cols.push_back(pred.peaks);
    }
    if (model.components.background) {
        names.push_back("background");
        cols.push_back(pred.background);
    }
    if (model.components.white) {
        names.push_back("white");
        cols.push_back(std::vector<double>(pred.n, pred.white));
    }
    write_columns_csv(out, names, cols);
    return 0;
}

int cmd_fit(const std::string &spectrum_path, const std::string &config_path, int ell, const std::string &report,
            bool width, std::optional<std::uint64_t> peak_bin) {
    RunConfig cfg = config_or_default(config_path);
    PowerSpectrum ps;
    ps.values = read_spectrum_csv(spectrum_path);
    ps.n = ps.values.size();
    cfg.meas.num_outcomes = ps.n;
    std::string text;
    if (width) {
        WidthFitOptions opts;
        opts.ell = ell;
        opts.peak_bin = peak_bin;
        opts.omega_p_hint = cfg.mod.angular_freq;
        auto fit = fit_lorentzian_width(ps, cfg.meas, opts);
        text = width_fit_report_json({fit}, "fit --width " + fs::path(spectrum_path).filename().string());
    } else {
        PeakFitOptions opts;
        opts.ell = ell;
        opts.peak_bin = peak_bin;
        auto fit = fit_peak(ps, cfg.meas, opts);
        text = peak_fit_report_json(fit, ell, "fit " + fs::path(spectrum_path).filename().string());
    }
    if (report.empty()) {
        std::cout << text << "\n";
    } else {
        write_text(report, text);
    }
    return 0;
}

int cmd_scan(const std::string &in, const std::string &config_path, const std::string &nu_spec, bool nu_relative,
             const std::string &m_spec, const std::string &averaging, const std::string &out) {
    auto runs = read_outcomes(in);
    RunConfig cfg = config_or_default(config_path);
    auto nus = parse_grid(nu_spec);
    if (nu_relative) {
        for (auto &nu : nus) {
            nu *= cfg.mod.angular_freq * cfg.meas.t_cycle;
        }
    }
    std::vector<std::uint64_t> ms;
    for (double m : parse_grid(m_spec)) {
        if (m < 0 || m != std::floor(m)) {
            throw ConfigError("--m-grid: M must be a non-negative integer");
        }
        ms.push_back(static_cast<std::uint64_t>(m));
    }
    Experiment exp;
    for (std::uint64_t i = 0; i < runs.size(); ++i) {
        exp.runs.push_back(OutcomeRun{std::move(runs[i]), i, 0.0});
    }
    ScanAveraging mode;
    if (averaging == "first") {
        mode = ScanAveraging::kFirstRun;
    } else if (averaging == "coherent") {
        mode = ScanAveraging::kCoherent;
    } else if (averaging == "magnitude") {
        mode = ScanAveraging::kMagnitude;
    } else {
        throw ConfigError("--averaging: expected first, coherent or magnitude");
    }
    write_scan_csv(out, tunable_ft(exp, nus, ms, mode));
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Ramsey measurement spectroscopy of periodic qubit-frequency modulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", build_version());

    std::string config;
    std::string out;
    std::string in;
    std::string manifest;
    std::string sidecar;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::uint64_t> peak_bin;

    auto *sim = app.add_subcommand("simulate", "simulate K runs and write a packed outcome file");
    sim->add_option("config", config, "JSON config")->required();
    sim->add_option("--seed", seed, "master seed (overrides execution.seed)");
    sim->add_option("--out", out, "outcome file")->required();
    sim->add_option("--parallel", threads, "worker threads (0: all)");
    sim->add_option("--manifest", manifest, "manifest path (default <out>.manifest.json)");

    bool parseval = false;
    auto *spec = app.add_subcommand("spectrum", "average periodogram of an outcome file");
    spec->add_option("in", in, "outcome file")->required();
    spec->add_option("--out", out, "CSV with header m,S")->required();
    spec->add_option("--sidecar", sidecar, "metadata JSON (default <out>.json)");
    spec->add_option("--config", config, "config recorded in the metadata");
    spec->add_option("--parallel", threads, "worker threads (0: all)");
    spec->add_flag("--check-parseval", parseval, "verify sum_m S(m) against the mean number of ones");

    std::string components = "peaks,background,white";
    auto *pred = app.add_subcommand("predict", "analytic spectrum for a config");
    pred->add_option("config", config, "JSON config")->required();
    pred->add_option("--components", components, "comma list of peaks, background, white, lorentzian");
    pred->add_option("--out", out, "CSV output")->required();

    int ell = 1;
    std::string report;
    bool width = false;
    auto *fit = app.add_subcommand("fit", "fit an overtone of a measured spectrum");
    fit->add_option("spectrum", in, "CSV with header m,S")->required();
    fit->add_option("--config", config, "config supplying t_cyc, phi_R and the omega_p hint");
    fit->add_option("--ell", ell, "overtone index")->check(CLI::PositiveNumber);
    fit->add_option("--report", report, "JSON report path (default stdout)");
    fit->add_option("--peak-bin", peak_bin, "use this bin as the peak maximum");
    fit->add_flag("--width", width, "fit the Lorentzian width instead of (omega_p, A_p, c)");

    std::string nu_grid = "0.95,1,1.05";
    std::string m_grid = "lin:0:100000:11";
    std::string averaging = "coherent";
    bool nu_absolute = false;
    auto *scan = app.add_subcommand("scan-yft", "tunable Fourier transform |Y(nu; M)|");
    scan->add_option("in", in, "outcome file")->required();
    scan->add_option("--config", config, "config supplying omega_p t_cyc");
    scan->add_option("--nu-grid", nu_grid, "list or lin:a:b:n, in units of omega_p t_cyc");
    scan->add_flag("--nu-absolute", nu_absolute, "treat --nu-grid as absolute nu");
    scan->add_option("--m-grid", m_grid, "list or lin:a:b:n");
    scan->add_option("--averaging", averaging, "first | coherent | magnitude");
    scan->add_option("--out", out, "CSV with header nu,M,abs_Y")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sim) {
            return cmd_simulate(config, seed, out, threads, manifest);
        }
        if (*spec) {
            return cmd_spectrum(in, out, sidecar, config, threads, parseval);
        }
        if (*pred) {
            return cmd_predict(config, components, out);
        }
        if (*fit) {
            return cmd_fit(in, config, ell, report, width, peak_bin);
        }
        if (*scan) {
            return cmd_scan(in, config, nu_grid, !nu_absolute, m_grid, averaging, out);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
