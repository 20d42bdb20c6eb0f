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

#ifndef RAMSEY_ERRORS_H
#define RAMSEY_ERRORS_H

#include <stdexcept>
#include <string>

namespace ramsey {

/// Invalid parameters or malformed input documents. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation could not produce a finite, meaningful result. Maps to CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A discrete peak profile was evaluated exactly on its resonance, where the
/// finite-N formula is 0/0.
struct ResonanceSingularity : NumericError {
    using NumericError::NumericError;
};

}  // namespace ramsey

#endif
