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

#include "bettiq/common.hpp"

namespace bettiq {

/// The n-term Pauli decomposition of the Hermitian boundary-sum operator
/// B: term i is Z^{(i)} (x) X (x) I^{(n-1-i)}, vertex 0 leftmost. No Y
/// factor ever appears.
struct PauliTermList {
    int n = 0;
    std::vector<std::string> terms;  // e.g. {"XII", "ZXI", "ZZX"} for n=3
};

inline PauliTermList boundary_terms(int n) {
    require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    PauliTermList list;
    list.n = n;
    list.terms.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::string t(n, 'I');
        for (int q = 0; q < i; ++q) t[q] = 'Z';
        t[i] = 'X';
        list.terms.push_back(std::move(t));
    }
    return list;
}

namespace detail {

/// Applies one Z...ZXI...I term: flips the qubit carrying the X and signs
/// by the parity of the set bits under the leading Z block.
inline void apply_zx_term(std::span<const cdouble> in, std::span<cdouble> out,
                          int n, const std::string& term) {
    int x_pos = -1;
    for (int q = 0; q < n; ++q) {
        char c = term[q];
        if (c == 'X') {
            require(x_pos < 0, "term has more than one X");
            x_pos = q;
        } else if (c == 'Z') {
            require(x_pos < 0, "Z after X is not a boundary term");
        } else {
            require(c == 'I', "term may contain only Z, X, I");
            require(x_pos >= 0, "I before X is not a boundary term");
        }
    }
    require(x_pos >= 0, "term has no X");
    const int bit = n - 1 - x_pos;
    const std::uint32_t flip = std::uint32_t{1} << bit;
    const std::uint32_t size = std::uint32_t{1} << n;
    for (std::uint32_t z = 0; z < size; ++z) {
        const int zparity = popcount32(z >> (bit + 1)) & 1;
        out[z ^ flip] += zparity ? -in[z] : in[z];
    }
}

}  // namespace detail

/// Matrix-free action of B = sum_i term_i, O(n 2^n). On a basis state it
/// flips each bit with sign (-1)^(set bits left of the flipped one), i.e.
/// the signed sum over one-vertex-removed and one-vertex-added simplices.
inline AmpVec apply_B(const AmpVec& state, const PauliTermList& terms) {
    const std::uint32_t size = std::uint32_t{1} << terms.n;
    require(state.size() == size, "state length does not match term register");
    AmpVec out(size, cdouble{0.0, 0.0});
    for (const auto& t : terms.terms) detail::apply_zx_term(state, out, terms.n, t);
    return out;
}

/// In-place-friendly variant used by the operator compositions: out += B in.
/// Skips the term-string parse; the term structure is fixed by construction.
inline void accumulate_B(std::span<const cdouble> in, std::span<cdouble> out, int n) {
    const std::uint32_t size = std::uint32_t{1} << n;
    for (int i = 0; i < n; ++i) {
        const int bit = n - 1 - i;
        const std::uint32_t flip = std::uint32_t{1} << bit;
        for (std::uint32_t z = 0; z < size; ++z) {
            const int zparity = popcount32(z >> (bit + 1)) & 1;
            out[z ^ flip] += zparity ? -in[z] : in[z];
        }
    }
}

}  // namespace bettiq
