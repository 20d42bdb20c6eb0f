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

#ifndef RAMSEY_RNG_H
#define RAMSEY_RNG_H

#include <cstdint>
#include <random>

namespace ramsey {

/// Independent random channels inside one repetition. Each channel gets its own
/// substream so enabling one noise source never shifts the draws of another.
enum class RngChannel : std::uint64_t {
    kOutcomes = 1,
    kTls = 2,
    kQubitOu = 3,
    kModFreq = 4,
    kCycleJitter = 5,
    kModPhase = 6,
};

/// Reproducible substream keyed by (master_seed, stream_id, channel).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; uniform and normal variates are derived here rather than through
/// std::*_distribution, whose algorithms vary between standard libraries. This
/// keeps a (seed, id) pair bit-identical across platforms.
///
/// Not thread-safe; confine one stream to one thread at a time.
class RngStream {
   public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id, RngChannel channel = RngChannel::kOutcomes);

    std::uint64_t master_seed() const {
        return master_seed_;
    }
    std::uint64_t stream_id() const {
        return stream_id_;
    }

    std::uint64_t next_u64() {
        return engine_();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal (Marsaglia polar method).
    double normal();

    /// Exponential waiting time with the given rate (rate > 0).
    double exponential(double rate);

   private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer, used to decorrelate neighbouring seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ramsey

#endif
