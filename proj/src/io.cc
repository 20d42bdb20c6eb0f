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

#include "ramsey/io.h"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ramsey/errors.h"

#ifndef RAMSEY_GIT_DESCRIBE
#define RAMSEY_GIT_DESCRIBE "unknown"
#endif

namespace ramsey {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'R', 'P', 'R', 'B'};

void put_le(std::uint8_t *dst, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        dst[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}

std::uint64_t get_le(const std::uint8_t *src, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= static_cast<std::uint64_t>(src[i]) << (8 * i);
    }
    return v;
}

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open " + path + " for writing");
    }
    return out;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json bounds_json(const FitBounds &b) {
    return json::array({b.lower, b.upper});
}

}  // namespace

struct OutcomeWriter::Impl {
    std::ofstream out;
    std::uint64_t n = 0;
};

OutcomeWriter::OutcomeWriter(const std::string &path, std::uint64_t n) : impl_(std::make_unique<Impl>()) {
    impl_->out = open_out(path);
    impl_->n = n;
    std::array<std::uint8_t, kOutcomeHeaderBytes> header{};
    std::memcpy(header.data(), kMagic, 4);
    put_le(header.data() + 4, kOutcomeFileVersion, 2);
    put_le(header.data() + 6, n, 8);
    impl_->out.write(reinterpret_cast<const char *>(header.data()), header.size());
}

OutcomeWriter::~OutcomeWriter() = default;

void OutcomeWriter::write(const PackedBits &bits) {
    if (bits.size() != impl_->n) {
        throw ConfigError("outcome run length does not match the file header");
    }
    const auto &b = bits.bytes();
    impl_->out.write(reinterpret_cast<const char *>(b.data()), static_cast<std::streamsize>(b.size()));
    if (!impl_->out) {
        throw NumericError("write failed");
    }
}

void OutcomeWriter::close() {
    impl_->out.close();
}

void write_outcomes(const std::string &path, const std::vector<OutcomeRun> &runs) {
    if (runs.empty()) {
        throw ConfigError("write_outcomes: no runs");
    }
    OutcomeWriter w(path, runs.front().bits.size());
    for (const auto &r : runs) {
        w.write(r.bits);
    }
    w.close();
}

std::vector<PackedBits> read_outcomes(const std::string &path) {
    std::string data = slurp(path);
    if (data.size() < kOutcomeHeaderBytes || std::memcmp(data.data(), kMagic, 4) != 0) {
        throw ConfigError(path + ": not an outcome file");
    }
    const auto *p = reinterpret_cast<const std::uint8_t *>(data.data());
    if (get_le(p + 4, 2) != kOutcomeFileVersion) {
        throw ConfigError(path + ": unsupported outcome file version");
    }
    std::uint64_t n = get_le(p + 6, 8);
    if (n == 0) {
        throw ConfigError(path + ": N is zero");
    }
    std::uint64_t per_run = (n + 7) / 8;
    std::uint64_t payload = data.size() - kOutcomeHeaderBytes;
    if (payload % per_run != 0) {
        throw ConfigError(path + ": payload is not a whole number of runs");
    }
    std::vector<PackedBits> runs;
    for (std::uint64_t off = kOutcomeHeaderBytes; off < data.size(); off += per_run) {
        runs.emplace_back(n, std::vector<std::uint8_t>(p + off, p + off + per_run));
    }
    return runs;
}

std::string sha256_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void write_spectrum_csv(const std::string &path, const std::vector<double> &values) {
    auto out = open_out(path);
    std::string body = "m,S\n";
    for (std::size_t m = 0; m < values.size(); ++m) {
        body += std::to_string(m);
        body += ',';
        body += format_double(values[m]);
        body += '\n';
    }
    out << body;
}

std::vector<double> read_spectrum_csv(const std::string &path) {
    std::string data = slurp(path);
    std::istringstream in(data);
    std::string line;
    if (!std::getline(in, line) || line != "m,S") {
        throw ConfigError(path + ": expected header m,S");
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError(path + ": malformed row");
        }
        std::uint64_t m = 0;
        double v = 0;
        auto r1 = std::from_chars(line.data(), line.data() + comma, m);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), v);
        if (r1.ec != std::errc() || r2.ec != std::errc() || m != values.size()) {
            throw ConfigError(path + ": malformed row " + std::to_string(values.size()));
        }
        values.push_back(v);
    }
    return values;
}

std::string build_version() {
    return RAMSEY_GIT_DESCRIBE;
}

void write_spectrum_sidecar(const std::string &path, const SpectrumMetadata &meta) {
    json j = {{"N", meta.n}, {"K", meta.k}, {"seed", meta.seed}, {"git_describe", build_version()},
              {"source", meta.source}};
    j["configs"] = meta.config_json.empty() ? json(nullptr) : json::parse(meta.config_json);
    open_out(path) << j.dump(2) << '\n';
}

void write_manifest(const std::string &path, const RunManifest &m) {
    json j = {{"master_seed", m.master_seed},
              {"tool_version", m.tool_version},
              {"started_utc", m.started_utc},
              {"finished_utc", m.finished_utc},
              {"digests", m.digests}};
    j["config"] = json::parse(m.config_json);
    open_out(path) << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string &path) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::exception &e) {
        throw ConfigError(path + ": " + e.what());
    }
    RunManifest m;
    m.config_json = j.at("config").dump();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.started_utc = j.at("started_utc").get<std::string>();
    m.finished_utc = j.at("finished_utc").get<std::string>();
    m.digests = j.at("digests").get<std::map<std::string, std::string>>();
    return m;
}

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf;
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

std::string peak_fit_report_json(const PeakFitResult &fit, int ell, const std::string &provenance) {
    json j;
    j["estimates"] = {{"omega_p", fit.omega_p_est},
                      {"A_p", fit.a_p_est},
                      {"c", fit.c_offset},
                      {"half_width_95",
                       {{"omega_p", fit.half_width[0]}, {"A_p", fit.half_width[1]}, {"c", fit.half_width[2]}}}};
    j["bounds"] = {{"omega_p", bounds_json(fit.omega_bounds)},
                   {"A_p", bounds_json(fit.a_bounds)},
                   {"A_p_from_area", fit.a_from_area},
                   {"area_beyond_first_lobe", fit.area_beyond_first_lobe}};
    j["residuals"] = {{"norm", fit.residual_norm}, {"converged", fit.converged}, {"iterations", fit.iterations}};
    j["points_used"] = fit.points_used;
    j["bins"] = fit.bins;
    j["ell"] = ell;
    j["provenance"] = {{"source", provenance}, {"tool_version", build_version()}};
    return j.dump(2);
}

std::string width_fit_report_json(const std::vector<WidthFitResult> &fits, const std::string &provenance) {
    json arr = json::array();
    for (const auto &f : fits) {
        arr.push_back({{"ell", f.ell},
                       {"gamma", f.gamma_est},
                       {"height", f.height_est},
                       {"omega_p", f.omega_p_est},
                       {"c", f.c_offset},
                       {"residual_norm", f.residual_norm},
                       {"points_used", f.points_used},
                       {"unresolvable", f.unresolvable},
                       {"converged", f.converged}});
    }
    json j = {{"widths", arr}, {"provenance", {{"source", provenance}, {"tool_version", build_version()}}}};
    return j.dump(2);
}

void write_scan_csv(const std::string &path, const TunableScan &scan) {
    auto out = open_out(path);
    std::string body = "nu,M,abs_Y\n";
    for (std::size_t i = 0; i < scan.nu_grid.size(); ++i) {
        for (std::size_t j = 0; j < scan.m_grid.size(); ++j) {
            body += format_double(scan.nu_grid[i]) + "," + std::to_string(scan.m_grid[j]) + "," +
                    format_double(scan.magnitude[i][j]) + "\n";
        }
    }
    out << body;
}

void write_columns_csv(const std::string &path, const std::vector<std::string> &names,
                       const std::vector<std::vector<double>> &columns) {
    if (names.size() != columns.size() || columns.empty()) {
        throw ConfigError("write_columns_csv: header and column count differ");
    }
    for (const auto &c : columns) {
        if (c.size() != columns.front().size()) {
            throw ConfigError("write_columns_csv: ragged columns");
        }
    }
    auto out = open_out(path);
    std::string body;
    for (std::size_t i = 0; i < names.size(); ++i) {
        body += (i ? "," : "") + names[i];
    }
    body += '\n';
    for (std::size_t r = 0; r < columns.front().size(); ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) {
                body += ',';
            }
            body += format_double(columns[i][r]);
        }
        body += '\n';
    }
    out << body;
}

}  // namespace ramsey
