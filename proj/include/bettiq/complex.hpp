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

#include <initializer_list>

#include "bettiq/common.hpp"
#include "bettiq/point_cloud.hpp"

namespace bettiq {

/// The epsilon-resolution adjacency graph. Every higher simplex of the
/// Vietoris-Rips complex is induced from this graph by a clique test.
struct Skeleton {
    int n = 0;
    double epsilon = 0.0;
    std::vector<std::uint8_t> adjacency;  // row-major n*n, diagonal false

    bool adjacent(int i, int j) const {
        return adjacency[static_cast<std::size_t>(i) * n + j] != 0;
    }

    void set_edge(int i, int j) {
        adjacency[static_cast<std::size_t>(i) * n + j] = 1;
        adjacency[static_cast<std::size_t>(j) * n + i] = 1;
    }

    int edge_count() const {
        int c = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) c += adjacent(i, j);
        return c;
    }

    static Skeleton empty(int n) {
        Skeleton g;
        g.n = n;
        g.adjacency.assign(static_cast<std::size_t>(n) * n, 0);
        return g;
    }

    static Skeleton complete(int n) {
        Skeleton g = empty(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.set_edge(i, j);
        return g;
    }

    /// Graph from an explicit edge list, for tests and fixtures.
    static Skeleton from_edges(int n, std::initializer_list<std::pair<int, int>> edges) {
        Skeleton g = empty(n);
        for (auto [i, j] : edges) g.set_edge(i, j);
        return g;
    }
};

/// An n-bit vertex-set mask. The mask doubles as a statevector basis
/// index: vertex i occupies the i-th most significant of the n bits, and
/// an order-k simplex has popcount k+1.
struct SimplexMask {
    std::uint32_t bits = 0;

    SimplexMask() = default;
    explicit SimplexMask(std::uint32_t b) : bits(b) {}

    int order() const { return popcount32(bits) - 1; }
    bool contains(int n, int v) const { return index_has_vertex(bits, n, v); }

    static SimplexMask from_vertices(int n, std::initializer_list<int> vs) {
        SimplexMask s;
        for (int v : vs) s.bits |= vertex_mask(n, v);
        return s;
    }
};

/// Per-order census of the complex: |S_k|, C(n, k+1), and their ratio.
struct ComplexStats {
    int k = 0;
    std::uint64_t count = 0;
    std::uint64_t total = 0;
    double zeta = 0.0;
};

inline Skeleton build_skeleton(const DistanceMatrix& d, double epsilon) {
    require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be finite and >= 0");
    Skeleton g = Skeleton::empty(d.n);
    g.epsilon = epsilon;
    for (int i = 0; i < d.n; ++i)
        for (int j = i + 1; j < d.n; ++j)
            if (d(i, j) <= epsilon) g.set_edge(i, j);  // inclusive comparison
    return g;
}

/// Clique test: true iff every pair of vertices in the mask is adjacent.
/// The empty simplex and all single vertices belong to every complex.
inline bool in_complex(SimplexMask s, const Skeleton& g) {
    require(g.n >= 32 || s.bits < (std::uint32_t{1} << g.n), "mask out of range");
    std::uint32_t rest = s.bits;
    while (rest != 0) {
        int bit = std::countr_zero(rest);
        rest &= rest - 1;
        int v = g.n - 1 - bit;
        for (std::uint32_t other = rest; other != 0; other &= other - 1) {
            int w = g.n - 1 - std::countr_zero(other);
            if (!g.adjacent(v, w)) return false;
        }
    }
    return true;
}

/// Fast membership table over all 2^n basis indices, built once per
/// skeleton. Uses downward closure: a mask is a clique iff the mask minus
/// its lowest bit is a clique and that vertex neighbors all the rest.
class ComplexMembership {
  public:
    explicit ComplexMembership(const Skeleton& g) : n_(g.n) {
        require(n_ >= 1 && n_ <= kMaxQubits, "skeleton size out of statevector range");
        const std::uint32_t size = std::uint32_t{1} << n_;
        std::vector<std::uint32_t> nbr(n_, 0);
        for (int v = 0; v < n_; ++v)
            for (int w = 0; w < n_; ++w)
                if (v != w && g.adjacent(v, w)) nbr[v] |= vertex_mask(n_, w);
        words_.assign((size + 63) / 64, 0);
        set_bit(0);
        for (std::uint32_t z = 1; z < size; ++z) {
            int bit = std::countr_zero(z);
            std::uint32_t rest = z & (z - 1);
            if (contains(rest) && (rest & ~nbr[n_ - 1 - bit]) == 0) set_bit(z);
        }
    }

    int n() const { return n_; }

    bool contains(std::uint32_t z) const {
        return (words_[z >> 6] >> (z & 63)) & 1u;
    }

  private:
    void set_bit(std::uint32_t z) { words_[z >> 6] |= std::uint64_t{1} << (z & 63); }

    int n_;
    std::vector<std::uint64_t> words_;
};

/// Counts the (k+1)-cliques by mask iteration over all C(n, k+1) subsets.
inline ComplexStats complex_stats(const Skeleton& g, int k) {
    require(k >= 0 && k <= g.n - 1, "order k out of range");
    ComplexStats st;
    st.k = k;
    st.total = binomial(g.n, k + 1);
    std::uint32_t mask = (std::uint32_t{1} << (k + 1)) - 1;
    while (mask != 0) {
        if (in_complex(SimplexMask{mask}, g)) ++st.count;
        mask = next_same_popcount(mask, g.n);
    }
    st.zeta = static_cast<double>(st.count) / static_cast<double>(st.total);
    return st;
}

/// All in-complex masks of order k, ascending (the canonical restricted basis).
inline std::vector<std::uint32_t> simplices_of_order(const Skeleton& g, int k) {
    std::vector<std::uint32_t> out;
    if (k == -1) {
        out.push_back(0);  // the empty simplex, in every complex
        return out;
    }
    require(k >= 0 && k <= g.n - 1, "order k out of range");
    std::uint32_t mask = (std::uint32_t{1} << (k + 1)) - 1;
    while (mask != 0) {
        if (in_complex(SimplexMask{mask}, g)) out.push_back(mask);
        mask = next_same_popcount(mask, g.n);
    }
    return out;
}

}  // namespace bettiq
