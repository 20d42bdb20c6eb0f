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

#ifndef RAMSEY_PARALLEL_H
#define RAMSEY_PARALLEL_H

#include <cstddef>
#include <functional>

namespace ramsey {

/// Worker count for a request of `requested` threads (0 = hardware
/// concurrency), capped by the RAMSEY_PROBE_THREADS environment variable.
std::size_t resolve_threads(std::size_t requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)> &body);

}  // namespace ramsey

#endif
