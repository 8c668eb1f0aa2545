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

#include <bit>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bettiq {

using cdouble = std::complex<double>;
using AmpVec = std::vector<cdouble>;

/// Hard cap for statevector-coupled paths (amplitude array bound).
inline constexpr int kMaxQubits = 24;

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

inline int popcount32(std::uint32_t x) { return std::popcount(x); }

/// Bit position of vertex v in a basis index: vertex 0 is the most
/// significant of the n data bits.
inline int vertex_bit(int n, int v) { return n - 1 - v; }

inline std::uint32_t vertex_mask(int n, int v) {
    return std::uint32_t{1} << vertex_bit(n, v);
}

inline bool index_has_vertex(std::uint32_t z, int n, int v) {
    return (z >> vertex_bit(n, v)) & 1u;
}

/// C(n, k) in exact 64-bit integer arithmetic. Overflow-checked via
/// 128-bit intermediates; valid for every n <= 62.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (int t = 1; t <= k; ++t) {
        acc = acc * static_cast<unsigned>(n - k + t);
        acc /= static_cast<unsigned>(t);  // exact: product of t consecutive integers
        if (acc > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("binomial: value exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

/// Next integer with the same popcount (Gosper's hack). Returns 0 when
/// the iteration leaves the [0, 2^n) window.
inline std::uint32_t next_same_popcount(std::uint32_t v, int n) {
    if (v == 0) return 0;
    std::uint32_t c = v & (~v + 1u);
    std::uint32_t r = v + c;
    std::uint32_t next = (((r ^ v) >> 2) / c) | r;
    return (next < (std::uint32_t{1} << n)) ? next : 0;
}

inline double norm2(std::span<const cdouble> amps) {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

}  // namespace bettiq
