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
#include <utility>

#include "bettiq/complex.hpp"
#include "bettiq/state_vector.hpp"

namespace bettiq {

/// Round-robin (circle method) 1-factorization of K_n: n-1 rounds of
/// disjoint pairs covering every unordered pair exactly once. Odd n gets
/// one idle pad vertex per round; pairs touching the pad are omitted, so
/// such rounds carry (n-1)/2 pairs.
inline std::vector<std::vector<std::pair<int, int>>> round_robin_rounds(int n) {
    require(n >= 2, "pairing needs at least two vertices");
    const int m = (n % 2 == 0) ? n : n + 1;  // pad vertex = m-1 when odd
    std::vector<std::vector<std::pair<int, int>>> rounds;
    rounds.reserve(m - 1);
    for (int r = 0; r < m - 1; ++r) {
        std::vector<std::pair<int, int>> pairs;
        auto push = [&](int a, int b) {
            if (a >= n || b >= n) return;  // idle pad
            pairs.emplace_back(std::min(a, b), std::max(a, b));
        };
        push(m - 1, r);
        for (int k = 1; k <= m / 2 - 1; ++k)
            push((r + k) % (m - 1), (r - k + (m - 1)) % (m - 1));
        rounds.push_back(std::move(pairs));
    }
    return rounds;
}

struct ComplexProjectionResult {
    StateVector state;
    bool success = false;
};

struct OrderProjectionResult {
    StateVector state;
    int measured_k = -1;
    bool success = false;
};

namespace detail {

/// Measures one flag qubit: keeps the branch selected by the seeded draw,
/// zeroes the other, renormalizes, and folds the branch probability into
/// norm_tracking. `in_branch1` marks the basis states that set the flag.
template <typename Pred>
bool measure_flag(StateVector& s, RngStream& rng, Pred in_branch1) {
    double p1 = 0.0;
    for (std::uint32_t z = 0; z < s.amps.size(); ++z)
        if (in_branch1(z)) p1 += std::norm(s.amps[z]);
    const bool outcome1 = rng.next_double() < p1;
    const double pkeep = outcome1 ? p1 : 1.0 - p1;
    for (std::uint32_t z = 0; z < s.amps.size(); ++z)
        if (in_branch1(z) != outcome1) s.amps[z] = cdouble{0.0, 0.0};
    s.norm_tracking *= pkeep;
    s.renormalize();
    return outcome1;
}

}  // namespace detail

/// Mid-circuit-measurement realization of P_Gamma. Each round pairs the
/// vertices by the circle method; every paired non-edge (i, j) contributes
/// a CCNOT from qubits i, j into a flag qubit. The flag register is
/// measured (seeded) and reset after each round; success requires all
/// zeros in all rounds. Conditioned on success, the surviving state equals
/// the exact complex projection renormalized, and norm_tracking has picked
/// up the success probability.
inline ComplexProjectionResult project_complex_sampled(StateVector state, const Skeleton& g,
                                                       RngStream& rng) {
    require(state.n == g.n, "state/skeleton size mismatch");
    if (g.n == 1) return {std::move(state), true};
    const auto rounds = round_robin_rounds(g.n);
    for (const auto& round : rounds) {
        for (auto [i, j] : round) {
            if (g.adjacent(i, j)) continue;  // no Toffoli emitted, flag stays 0
            const std::uint32_t both = vertex_mask(g.n, i) | vertex_mask(g.n, j);
            const bool flagged = detail::measure_flag(
                state, rng, [both](std::uint32_t z) { return (z & both) == both; });
            if (flagged) return {std::move(state), false};
        }
    }
    return {std::move(state), true};
}

/// Conditional-increment order projection: the count register takes the
/// Hamming weight of the data register, is measured (seeded), and the
/// state collapses to the measured weight w; measured_k = w - 1.
inline OrderProjectionResult project_order_sampled(StateVector state, RngStream& rng,
                                                   std::optional<int> want_k = std::nullopt) {
    const int n = state.n;
    std::vector<double> pw(n + 1, 0.0);
    for (std::uint32_t z = 0; z < state.amps.size(); ++z)
        pw[popcount32(z)] += std::norm(state.amps[z]);
    const double u = rng.next_double();
    int w = -1;
    double cum = 0.0;
    for (int cand = 0; cand <= n; ++cand) {
        if (pw[cand] <= 0.0) continue;
        cum += pw[cand];
        w = cand;
        if (u < cum) break;  // the final nonzero bucket also catches u ~ 1
    }
    require(w >= 0, "cannot measure an all-zero state");
    for (std::uint32_t z = 0; z < state.amps.size(); ++z)
        if (popcount32(z) != w) state.amps[z] = cdouble{0.0, 0.0};
    state.norm_tracking *= pw[w];
    state.renormalize();
    const int measured_k = w - 1;
    const bool success = !want_k.has_value() || measured_k == *want_k;
    return {std::move(state), measured_k, success};
}

}  // namespace bettiq
