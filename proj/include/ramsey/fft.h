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

#ifndef RAMSEY_FFT_H
#define RAMSEY_FFT_H

#include <cstdint>
#include <memory>
#include <span>

namespace ramsey {

/// Periodogram |X(m)|^2 with X(m) = N^{-1/2} sum_n x_n e^{2 pi i m n / N}, for
/// any N (mixed radix, no padding). One instance per thread; construction is
/// serialised internally, transforms on distinct instances run concurrently.
class PeriodogramPlan {
   public:
    explicit PeriodogramPlan(std::uint64_t n);
    ~PeriodogramPlan();
    PeriodogramPlan(const PeriodogramPlan &) = delete;
    PeriodogramPlan &operator=(const PeriodogramPlan &) = delete;

    std::uint64_t size() const {
        return n_;
    }

    /// Writable input buffer of length N.
    std::span<double> input();

    /// Transforms input() and adds |X(m)|^2 for m = 0..N-1 into `accum`.
    /// The upper half is mirrored from the lower, so S(m) == S(N-m) exactly.
    void accumulate(std::span<double> accum);

   private:
    struct Impl;
    std::uint64_t n_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ramsey

#endif
