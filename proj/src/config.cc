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

#include "ramsey/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "ramsey/errors.h"

namespace ramsey {

namespace {

using nlohmann::json;

/// Object view that rejects keys outside `allowed` and reports dotted paths.
class Section {
   public:
    Section(const json &j, std::string path, std::initializer_list<const char *> allowed) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
        for (const auto &item : j_.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char *k) { return item.key() == k; })) {
                throw ConfigError(field(item.key()) + ": unknown key");
            }
        }
    }

    std::string field(const std::string &key) const {
        return path_.empty() ? key : path_ + "." + key;
    }
    bool has(const char *key) const {
        return j_.contains(key);
    }
    const json &raw(const char *key) const {
        return j_.at(key);
    }

    void number(const char *key, double &out) const {
        if (!has(key)) {
            return;
        }
        const auto &v = j_.at(key);
        if (!v.is_number()) {
            throw ConfigError(field(key) + ": expected a number");
        }
        out = v.get<double>();
    }
    void count(const char *key, std::uint64_t &out) const {
        if (!has(key)) {
            return;
        }
        const auto &v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw ConfigError(field(key) + ": expected a non-negative integer");
        }
        out = v.get<std::uint64_t>();
    }
    void text(const char *key, std::string &out) const {
        if (!has(key)) {
            return;
        }
        const auto &v = j_.at(key);
        if (!v.is_string()) {
            throw ConfigError(field(key) + ": expected a string");
        }
        out = v.get<std::string>();
    }

   private:
    const json &j_;
    std::string path_;
};

void parse_measurement(const json &j, MeasurementConfig &m) {
    Section s(j, "measurement", {"t_R", "t_cyc", "phi_R", "T2", "N", "K"});
    s.number("t_R", m.t_ramsey);
    s.number("t_cyc", m.t_cycle);
    s.number("phi_R", m.phi_ramsey);
    if (s.has("T2") && !s.raw("T2").is_null()) {
        s.number("T2", m.t2);
    }
    s.count("N", m.num_outcomes);
    s.count("K", m.num_repetitions);
}

void parse_modulation(const json &j, ModulationConfig &m) {
    Section s(j, "modulation", {"a_p", "omega_p", "phi_p", "phase_mode"});
    s.number("a_p", m.amplitude);
    s.number("omega_p", m.angular_freq);
    s.number("phi_p", m.phase);
    std::string mode = "fixed";
    s.text("phase_mode", mode);
    if (mode == "fixed") {
        m.phase_mode = PhaseMode::kFixed;
    } else if (mode == "random") {
        m.phase_mode = PhaseMode::kUniformRandomPerRun;
    } else {
        throw ConfigError("modulation.phase_mode: expected \"fixed\" or \"random\"");
    }
}

void parse_noise(const json &j, RunConfig &cfg) {
    Section s(j, "noise", {"tls", "qubit_ou", "modfreq", "cycle_jitter", "zeta_minus", "zeta_plus"});
    NoiseSpec &n = cfg.noise;
    if (s.has("tls")) {
        const auto &arr = s.raw("tls");
        if (!arr.is_array()) {
            throw ConfigError("noise.tls: expected an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section t(arr[i], "noise.tls[" + std::to_string(i) + "]", {"V", "W01", "W10"});
            TlsParams p;
            t.number("V", p.coupling);
            t.number("W01", p.rate_01);
            t.number("W10", p.rate_10);
            n.tls.push_back(p);
        }
    }
    if (s.has("qubit_ou")) {
        Section q(s.raw("qubit_ou"), "noise.qubit_ou", {"variance", "tau_corr", "dt"});
        OuParams ou;
        q.number("variance", ou.variance);
        q.number("tau_corr", ou.tau_corr);
        if (q.has("dt")) {
            double dt = 0;
            q.number("dt", dt);
            ou.dt = dt;
        }
        n.qubit_ou = ou;
    }
    if (s.has("modfreq")) {
        Section f(s.raw("modfreq"), "noise.modfreq", {"kind", "sigma2", "dt", "variance", "tau_corr"});
        std::string kind = "none";
        f.text("kind", kind);
        if (kind == "none") {
            n.modfreq.kind = ModFreqNoiseKind::kNone;
        } else if (kind == "white") {
            n.modfreq.kind = ModFreqNoiseKind::kWhite;
        } else if (kind == "ou") {
            n.modfreq.kind = ModFreqNoiseKind::kOu;
        } else {
            throw ConfigError("noise.modfreq.kind: expected \"none\", \"white\" or \"ou\"");
        }
        f.number("sigma2", n.modfreq.sigma2);
        f.number("variance", n.modfreq.ou.variance);
        f.number("tau_corr", n.modfreq.ou.tau_corr);
        if (f.has("dt")) {
            double dt = 0;
            f.number("dt", dt);
            if (n.modfreq.kind == ModFreqNoiseKind::kOu) {
                n.modfreq.ou.dt = dt;
            } else {
                n.modfreq.dt_white = dt;
            }
        }
    }
    if (s.has("cycle_jitter")) {
        Section c(s.raw("cycle_jitter"), "noise.cycle_jitter", {"std_dev"});
        CycleJitterSpec jit;
        c.number("std_dev", jit.std_dev);
        n.cycle_jitter = jit;
    }
    s.number("zeta_minus", cfg.zeta_minus);
    s.number("zeta_plus", cfg.zeta_plus);
}

void parse_execution(const json &j, ExecutionConfig &e) {
    Section s(j, "execution", {"seed", "threads"});
    s.count("seed", e.seed);
    std::uint64_t threads = e.threads;
    s.count("threads", threads);
    e.threads = static_cast<std::size_t>(threads);
}

}  // namespace

RunConfig parse_config(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    Section top(root, "", {"measurement", "modulation", "noise", "execution"});
    RunConfig cfg;
    if (top.has("measurement")) {
        parse_measurement(root.at("measurement"), cfg.meas);
    }
    if (top.has("modulation")) {
        parse_modulation(root.at("modulation"), cfg.mod);
    }
    if (top.has("noise")) {
        parse_noise(root.at("noise"), cfg);
    }
    if (top.has("execution")) {
        parse_execution(root.at("execution"), cfg.exec);
    }
    cfg.meas.validate();
    cfg.mod.validate();
    cfg.noise.validate();
    if (cfg.zeta_minus < 0) {
        throw ConfigError("noise.zeta_minus: must be non-negative");
    }
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SpectrumModel spectrum_model_for(const RunConfig &cfg) {
    SpectrumModel model;
    const auto &meas = cfg.meas;
    model.n = meas.num_outcomes;
    model.phase_amplitude = derive_modulation(cfg.mod, meas).phase_amplitude;
    model.omega_p = cfg.mod.angular_freq;
    model.t_ramsey = meas.t_ramsey;
    model.t_cycle = meas.t_cycle;
    model.phi_ramsey = meas.phi_ramsey;
    model.background_opts.zeta_minus = cfg.zeta_minus;
    model.background_opts.zeta_plus = cfg.zeta_plus;

    const auto &noise = cfg.noise;
    std::complex<double> cf = 1.0;
    std::complex<double> cf2 = 1.0;
    std::vector<NoiseSpectrum> parts;
    if (!noise.tls.empty()) {
        cf *= tls_coherence_factor(noise.tls, meas.t_ramsey, 1).value;
        cf2 *= tls_coherence_factor(noise.tls, meas.t_ramsey, 2).value;
        TlsEnsemble ens = noise.tls;
        parts.push_back([ens](double w) { return telegraph_sq(ens, w); });
    }
    if (noise.qubit_ou) {
        // <theta^2> of an OU frequency integrated over t_R.
        double d = noise.qubit_ou->variance;
        double tau = noise.qubit_ou->tau_corr;
        double x = meas.t_ramsey / tau;
        double var = 2 * d * tau * tau * (x - 1 + std::exp(-x));
        cf *= gaussian_coherence_factor(0.5 * var).value;
        cf2 *= std::exp(-2 * var);
        parts.push_back([d, tau](double w) { return 2 * d * tau / (1 + w * w * tau * tau); });
    }
    model.cf.value = cf;
    model.cf2 = cf2;
    if (!parts.empty()) {
        model.sq = [parts](double w) {
            double s = 0;
            for (const auto &p : parts) {
                s += p(w);
            }
            return s;
        };
    }

    double gamma = gamma_ell(noise.modfreq, meas.t_cycle, 1);
    if (noise.cycle_jitter) {
        gamma += gamma_tilde_ell(*noise.cycle_jitter, cfg.mod.angular_freq, 1);
    }
    if (gamma > 0) {
        model.rendering = PeakRendering::kFiniteLorentzian;
        model.gamma_1 = gamma;
    }
    return model;
}

std::string config_to_json(const RunConfig &cfg) {
    json j;
    const auto &m = cfg.meas;
    j["measurement"] = {{"t_R", m.t_ramsey},
                        {"t_cyc", m.t_cycle},
                        {"phi_R", m.phi_ramsey},
                        {"T2", m.coherent() ? json(nullptr) : json(m.t2)},
                        {"N", m.num_outcomes},
                        {"K", m.num_repetitions}};
    j["modulation"] = {{"a_p", cfg.mod.amplitude},
                       {"omega_p", cfg.mod.angular_freq},
                       {"phi_p", cfg.mod.phase},
                       {"phase_mode", cfg.mod.phase_mode == PhaseMode::kFixed ? "fixed" : "random"}};
    json noise = json::object();
    json tls = json::array();
    for (const auto &t : cfg.noise.tls) {
        tls.push_back({{"V", t.coupling}, {"W01", t.rate_01}, {"W10", t.rate_10}});
    }
    noise["tls"] = tls;
    if (cfg.noise.qubit_ou) {
        json q = {{"variance", cfg.noise.qubit_ou->variance}, {"tau_corr", cfg.noise.qubit_ou->tau_corr}};
        if (cfg.noise.qubit_ou->dt) {
            q["dt"] = *cfg.noise.qubit_ou->dt;
        }
        noise["qubit_ou"] = q;
    }
    const auto &f = cfg.noise.modfreq;
    json mf;
    switch (f.kind) {
        case ModFreqNoiseKind::kNone:
            mf = {{"kind", "none"}};
            break;
        case ModFreqNoiseKind::kWhite:
            mf = {{"kind", "white"}, {"sigma2", f.sigma2}};
            if (f.dt_white) {
                mf["dt"] = *f.dt_white;
            }
            break;
        case ModFreqNoiseKind::kOu:
            mf = {{"kind", "ou"}, {"variance", f.ou.variance}, {"tau_corr", f.ou.tau_corr}};
            if (f.ou.dt) {
                mf["dt"] = *f.ou.dt;
            }
            break;
    }
    noise["modfreq"] = mf;
    if (cfg.noise.cycle_jitter) {
        noise["cycle_jitter"] = {{"std_dev", cfg.noise.cycle_jitter->std_dev}};
    }
    noise["zeta_minus"] = cfg.zeta_minus;
    noise["zeta_plus"] = cfg.zeta_plus;
    j["noise"] = noise;
    j["execution"] = {{"seed", cfg.exec.seed}, {"threads", cfg.exec.threads}};
    return j.dump(2);
}

}  // namespace ramsey
