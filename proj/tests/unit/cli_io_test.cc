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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ramsey/config.h"
#include "ramsey/errors.h"
#include "ramsey/io.h"

namespace ramsey {
namespace {

namespace fs = std::filesystem;

class TempDir {
   public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("ramsey_probe_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string file(const std::string &name) const {
        return (path_ / name).string();
    }

   private:
    fs::path path_;
    static inline int counter_ = 0;
};

void write_text(const std::string &path, const std::string &text) {
    std::ofstream(path) << text;
}

std::string read_text(const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string &args) {
    std::string cmd = std::string(RAMSEY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, DefaultsAndOverrides) {
    auto cfg = parse_config(R"({"measurement": {"phi_R": 0.5, "N": 64, "T2": null},
                                "modulation": {"phase_mode": "random"},
                                "noise": {"tls": [{"V": 0.2, "W01": 0.1, "W10": 0.3}],
                                          "modfreq": {"kind": "white", "sigma2": 1e-6}},
                                "execution": {"seed": 7}})");
    EXPECT_EQ(cfg.meas.phi_ramsey, 0.5);
    EXPECT_EQ(cfg.meas.num_outcomes, 64u);
    EXPECT_TRUE(cfg.meas.coherent());
    EXPECT_EQ(cfg.meas.t_cycle, 3.0);
    EXPECT_EQ(cfg.mod.phase_mode, PhaseMode::kUniformRandomPerRun);
    ASSERT_EQ(cfg.noise.tls.size(), 1u);
    EXPECT_EQ(cfg.noise.tls[0].rate_10, 0.3);
    EXPECT_EQ(cfg.noise.modfreq.kind, ModFreqNoiseKind::kWhite);
    EXPECT_EQ(cfg.exec.seed, 7u);
    auto again = parse_config(config_to_json(cfg));
    EXPECT_EQ(config_to_json(again), config_to_json(cfg));
}

TEST(Config, UnknownKeyNamesField) {
    try {
        parse_config(R"({"measurement": {"tR": 1.0}})");
        FAIL() << "accepted an unknown key";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("measurement.tR"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config(R"({"noise": {"tls": [{"V": 1, "W": 2}]}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"extra": {}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"measurement": {"N": -3}})"), ConfigError);
    EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(Config, SpectrumModelCarriesNoise) {
    auto cfg = parse_config(R"({"measurement": {"phi_R": 0.7853981633974483},
                                "noise": {"tls": [{"V": 0.2, "W01": 6e-5, "W10": 6e-5}],
                                          "modfreq": {"kind": "white", "sigma2": 25e-6}}})");
    auto model = spectrum_model_for(cfg);
    EXPECT_NEAR(model.cf.value.real(), 0.98007, 1e-4);
    EXPECT_TRUE(static_cast<bool>(model.sq));
    EXPECT_NEAR(model.gamma_1, 3.75e-5, 1e-15);
    EXPECT_EQ(model.rendering, PeakRendering::kFiniteLorentzian);
}

TEST(Io, OutcomeRoundTrip) {
    TempDir dir;
    std::vector<OutcomeRun> runs;
    for (int r = 0; r < 3; ++r) {
        PackedBits b(21);
        for (std::uint64_t k = 0; k < 21; ++k) {
            b.set(k, (k * 7 + static_cast<std::uint64_t>(r)) % 3 == 0);
        }
        runs.push_back(OutcomeRun{b, static_cast<std::uint64_t>(r), 0.0});
    }
    auto path = dir.file("o.bin");
    write_outcomes(path, runs);
    EXPECT_EQ(fs::file_size(path), kOutcomeHeaderBytes + 3 * 3);
    auto back = read_outcomes(path);
    ASSERT_EQ(back.size(), 3u);
    for (int r = 0; r < 3; ++r) {
        EXPECT_EQ(back[r], runs[r].bits);
    }
    write_text(dir.file("bad.bin"), "RPRB");
    EXPECT_THROW(read_outcomes(dir.file("bad.bin")), ConfigError);
}

TEST(Io, SpectrumCsvRoundTripIsExact) {
    TempDir dir;
    std::vector<double> v{0.0, 1.0 / 3.0, 1e-300, 12345.678901234567, std::nextafter(1.0, 2.0)};
    write_spectrum_csv(dir.file("s.csv"), v);
    EXPECT_EQ(read_spectrum_csv(dir.file("s.csv")), v);
    auto text = read_text(dir.file("s.csv"));
    EXPECT_EQ(text.substr(0, 4), "m,S\n");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Io, Sha256KnownVector) {
    TempDir dir;
    write_text(dir.file("abc"), "abc");
    EXPECT_EQ(sha256_file(dir.file("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    write_text(dir.file("empty"), "");
    EXPECT_EQ(sha256_file(dir.file("empty")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Io, ManifestRoundTrip) {
    TempDir dir;
    RunManifest m;
    m.config_json = config_to_json(RunConfig{});
    m.master_seed = 99;
    m.tool_version = build_version();
    m.started_utc = utc_timestamp();
    m.finished_utc = m.started_utc;
    m.digests = {{"o.bin", "00ff"}};
    write_manifest(dir.file("m.json"), m);
    auto back = read_manifest(dir.file("m.json"));
    EXPECT_EQ(back.master_seed, 99u);
    EXPECT_EQ(back.digests, m.digests);
    EXPECT_EQ(config_to_json(parse_config(back.config_json)), m.config_json);
    EXPECT_EQ(m.started_utc.size(), 20u);
}

TEST(Cli, SixteenOnes) {
    TempDir dir;
    write_text(dir.file("c.json"), R"({"measurement": {"N": 16, "K": 1, "phi_R": 0}, "modulation": {"a_p": 0}})");
    ASSERT_EQ(run_cli("simulate " + dir.file("c.json") + " --out " + dir.file("o.bin")), 0);
    auto runs = read_outcomes(dir.file("o.bin"));
    ASSERT_EQ(runs.size(), 1u);
    EXPECT_EQ(runs[0].count_ones(), 16u);
    EXPECT_TRUE(fs::exists(dir.file("o.bin.manifest.json")));
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    write_text(dir.file("bad.json"), R"({"measurement": {"t_r": 1}})");
    EXPECT_EQ(run_cli("simulate " + dir.file("bad.json") + " --out " + dir.file("o.bin")), 2);
    EXPECT_EQ(run_cli("simulate " + dir.file("missing.json") + " --out " + dir.file("o.bin")), 2);
    EXPECT_EQ(run_cli("no-such-command"), 2);
    EXPECT_EQ(run_cli("--version"), 0);
}

TEST(Cli, SameSeedSameDigestAndPayloadSize) {
    TempDir dir;
    write_text(dir.file("c.json"), R"({"measurement": {"N": 1000, "K": 5, "phi_R": 1.0},
                                       "noise": {"cycle_jitter": {"std_dev": 0.5}}})");
    ASSERT_EQ(run_cli("simulate " + dir.file("c.json") + " --seed 4 --out " + dir.file("a.bin")), 0);
    ASSERT_EQ(run_cli("simulate " + dir.file("c.json") + " --seed 4 --parallel 2 --out " + dir.file("b.bin")), 0);
    EXPECT_EQ(sha256_file(dir.file("a.bin")), sha256_file(dir.file("b.bin")));
    EXPECT_EQ(fs::file_size(dir.file("a.bin")), kOutcomeHeaderBytes + 5 * 125);
    auto manifest = read_manifest(dir.file("a.bin.manifest.json"));
    EXPECT_EQ(manifest.master_seed, 4u);
    EXPECT_EQ(manifest.digests.begin()->second, sha256_file(dir.file("a.bin")));
}

TEST(Cli, ZeroFileGivesZeroSpectrum) {
    TempDir dir;
    write_outcomes(dir.file("z.bin"), {OutcomeRun{PackedBits(40), 0, 0.0}, OutcomeRun{PackedBits(40), 1, 0.0}});
    ASSERT_EQ(run_cli("spectrum " + dir.file("z.bin") + " --check-parseval --out " + dir.file("s.csv")), 0);
    auto s = read_spectrum_csv(dir.file("s.csv"));
    ASSERT_EQ(s.size(), 40u);
    for (double v : s) {
        EXPECT_EQ(v, 0.0);
    }
    auto meta = nlohmann::json::parse(read_text(dir.file("s.csv.json")));
    EXPECT_EQ(meta["N"], 40);
    EXPECT_EQ(meta["K"], 2);
}

TEST(Cli, RoundTripFitBoundsContainTruth) {
    TempDir dir;
    write_text(dir.file("c.json"), R"({"measurement": {"phi_R": 1.5707963267948966, "K": 24}})");
    ASSERT_EQ(run_cli("simulate " + dir.file("c.json") + " --seed 3 --out " + dir.file("o.bin")), 0);
    ASSERT_EQ(run_cli("spectrum " + dir.file("o.bin") + " --out " + dir.file("s.csv")), 0);
    ASSERT_EQ(run_cli("fit " + dir.file("s.csv") + " --config " + dir.file("c.json") + " --report " +
                      dir.file("fit.json")),
              0);
    auto report = nlohmann::json::parse(read_text(dir.file("fit.json")));
    double a_true = 2.0 * std::sin(1e-3 / 2) / 1e-3;
    auto wb = report["bounds"]["omega_p"];
    auto ab = report["bounds"]["A_p"];
    EXPECT_LE(wb[0].get<double>(), 1e-3);
    EXPECT_GE(wb[1].get<double>(), 1e-3);
    EXPECT_LE(ab[0].get<double>(), a_true);
    EXPECT_GE(ab[1].get<double>(), a_true);
    EXPECT_NEAR(report["estimates"]["A_p"].get<double>(), a_true, 0.05);
    EXPECT_EQ(report["points_used"], 8);
}

TEST(Cli, PredictAndScan) {
    TempDir dir;
    write_text(dir.file("c.json"), R"({"measurement": {"N": 2000, "K": 2, "phi_R": 0.7853981633974483},
                                       "modulation": {"omega_p": 0.02}})");
    ASSERT_EQ(run_cli("predict " + dir.file("c.json") + " --components peaks,white --out " + dir.file("p.csv")), 0);
    auto text = read_text(dir.file("p.csv"));
    EXPECT_EQ(text.substr(0, text.find('\n')), "m,S,peaks,white");
    ASSERT_EQ(run_cli("simulate " + dir.file("c.json") + " --out " + dir.file("o.bin")), 0);
    ASSERT_EQ(run_cli("scan-yft " + dir.file("o.bin") + " --config " + dir.file("c.json") +
                      " --nu-grid 0.95,1.0,1.05 --m-grid 0,1000,2000 --out " + dir.file("y.csv")),
              0);
    std::istringstream rows(read_text(dir.file("y.csv")));
    std::string line;
    std::getline(rows, line);
    EXPECT_EQ(line, "nu,M,abs_Y");
    int count = 0;
    while (std::getline(rows, line)) {
        ++count;
        if (line.find(",0,") != std::string::npos) {
            EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
        }
    }
    EXPECT_EQ(count, 9);
}

}  // namespace
}  // namespace ramsey
