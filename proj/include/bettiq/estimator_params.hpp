// Copyright 2026 The bettiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>

#include "bettiq/common.hpp"

namespace bettiq {

/// How the operator enters the moment chain: exact matrix-free
/// applications of B, or the Trotterized unitary with the small-t
/// real-part extraction (first moment only).
enum class MomentMode { exact_operator, trotter_extraction };

/// Randomized Hadamard-column probes, or exhaustive averaging over all
/// 2^n columns (exact trace; diagnostic, n <= 10).
enum class TraceMode { sampled_probes, all_columns };

/// Projector realization: exact amplitude zeroing, or the seeded
/// mid-circuit-measurement procedures with rejection on failure.
enum class ProjectorMode { exact, sampled };

struct EstimatorParams {
    double epsilon = 0.2;              // additive BNE tolerance
    double eta = 0.1;                  // failure probability
    std::optional<double> delta;       // spectral threshold of the scaled operator
    int m = 0;                         // Chebyshev degree; 0 = take degree_bound
    int n_v = 0;                       // probe count; 0 = take probe_bound
    double c_nv = 1.0;                 // probe-bound constant
    MomentMode moment_mode = MomentMode::exact_operator;
    TraceMode trace_mode = TraceMode::sampled_probes;
    ProjectorMode projector_mode = ProjectorMode::exact;

    void validate() const {
        require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
        require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
        if (delta) require(*delta > 0.0 && *delta < 1.0, "delta must lie in (0,1)");
        require(m >= 0, "m must be >= 1 (or 0 for the degree bound)");
        require(n_v >= 0, "n_v must be >= 1 (or 0 for the probe bound)");
        require(c_nv > 0.0, "c_nv must be positive");
    }
};

}  // namespace bettiq
