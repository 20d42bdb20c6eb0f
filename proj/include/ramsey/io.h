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

#ifndef RAMSEY_IO_H
#define RAMSEY_IO_H

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ramsey/config.h"
#include "ramsey/modulation_fit.h"
#include "ramsey/simulator.h"
#include "ramsey/spectral_estimation.h"

namespace ramsey {

// Outcome file layout (all integers little-endian):
//
//   offset  size  field
//        0     4  magic "RPRB"
//        4     2  version, currently 1
//        6     8  N, outcomes per run
//       14     2  reserved, zero
//       16     .  K runs of ceil(N/8) bytes; outcome k of a run is bit k % 8
//                 of byte k / 8
//
// K is implied by the file size.
inline constexpr std::uint16_t kOutcomeFileVersion = 1;
inline constexpr std::size_t kOutcomeHeaderBytes = 16;

/// Streaming writer; runs must all have the header's N.
class OutcomeWriter {
   public:
    OutcomeWriter(const std::string &path, std::uint64_t n);
    ~OutcomeWriter();
    OutcomeWriter(const OutcomeWriter &) = delete;
    OutcomeWriter &operator=(const OutcomeWriter &) = delete;

    void write(const PackedBits &bits);
    void close();

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

void write_outcomes(const std::string &path, const std::vector<OutcomeRun> &runs);

/// Reads every run in file order.
std::vector<PackedBits> read_outcomes(const std::string &path);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string &path);

/// Writes `m,S` rows with 17 significant digits, '.' decimal, '\n' newlines.
void write_spectrum_csv(const std::string &path, const std::vector<double> &values);
std::vector<double> read_spectrum_csv(const std::string &path);

/// Locale-independent %.17g.
std::string format_double(double v);

/// Build identifier compiled in from git describe.
std::string build_version();

struct SpectrumMetadata {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint64_t seed = 0;
    std::string config_json;  // empty when unknown
    std::string source;       // producing command
};

void write_spectrum_sidecar(const std::string &path, const SpectrumMetadata &meta);

struct RunManifest {
    std::string config_json;
    std::uint64_t master_seed = 0;
    std::string tool_version;
    std::string started_utc;
    std::string finished_utc;
    std::map<std::string, std::string> digests;  // file name -> sha256
};

void write_manifest(const std::string &path, const RunManifest &manifest);
RunManifest read_manifest(const std::string &path);

std::string utc_timestamp();

/// Fit report {estimates, bounds, residuals, points_used, provenance}.
std::string peak_fit_report_json(const PeakFitResult &fit, int ell, const std::string &provenance);
std::string width_fit_report_json(const std::vector<WidthFitResult> &fits, const std::string &provenance);

/// Long-format scan table with header `nu,M,abs_Y`.
void write_scan_csv(const std::string &path, const TunableScan &scan);

/// Columns written as given; every column must have the same length.
void write_columns_csv(const std::string &path, const std::vector<std::string> &names,
                       const std::vector<std::vector<double>> &columns);

}  // namespace ramsey

#endif
