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

#include "ramsey/fft.h"

#include <fftw3.h>

#include <mutex>

#include "ramsey/errors.h"

namespace ramsey {

namespace {

// FFTW planning touches global state.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct PeriodogramPlan::Impl {
    double *in = nullptr;
    fftw_complex *out = nullptr;
    fftw_plan plan = nullptr;
};

PeriodogramPlan::PeriodogramPlan(std::uint64_t n) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n < 1 || n > (1ULL << 31)) {
        throw ConfigError("periodogram length out of range");
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->in = fftw_alloc_real(n);
    impl_->out = fftw_alloc_complex(n / 2 + 1);
    impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out, FFTW_ESTIMATE);
    if (!impl_->plan) {
        throw NumericError("FFTW failed to create a plan");
    }
}

PeriodogramPlan::~PeriodogramPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(impl_->plan);
    fftw_free(impl_->in);
    fftw_free(impl_->out);
}

std::span<double> PeriodogramPlan::input() {
    return {impl_->in, static_cast<std::size_t>(n_)};
}

void PeriodogramPlan::accumulate(std::span<double> accum) {
    fftw_execute(impl_->plan);
    const double scale = 1.0 / static_cast<double>(n_);
    const std::uint64_t half = n_ / 2;
    for (std::uint64_t m = 0; m <= half; ++m) {
        double re = impl_->out[m][0];
        double im = impl_->out[m][1];
        double p = (re * re + im * im) * scale;
        accum[m] += p;
        std::uint64_t mirror = (n_ - m) % n_;
        if (mirror != m && mirror > half) {
            accum[mirror] += p;
        }
    }
}

}  // namespace ramsey
