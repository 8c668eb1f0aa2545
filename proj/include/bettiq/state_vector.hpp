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

#include <cmath>

#include "bettiq/common.hpp"
#include "bettiq/rng.hpp"

namespace bettiq {

/// 2^n complex amplitudes. Qubit q maps to bit (n-1-q) of the basis index,
/// so the binary string of an index reads qubit 0 first. norm_tracking
/// accumulates post-selection probabilities across seeded collapses, so
/// exact-expectation pipelines can recover sub-normalized magnitudes.
struct StateVector {
    int n = 0;
    AmpVec amps;
    double norm_tracking = 1.0;

    static StateVector zero_state(int n) { return basis(n, 0); }

    static StateVector basis(int n, std::uint32_t z) {
        require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
        require(z < (std::uint32_t{1} << n), "basis index out of range");
        StateVector s;
        s.n = n;
        s.amps.assign(std::size_t{1} << n, cdouble{0.0, 0.0});
        s.amps[z] = 1.0;
        return s;
    }

    static StateVector from_amplitudes(int n, AmpVec a) {
        require(a.size() == (std::size_t{1} << n), "amplitude count mismatch");
        StateVector s;
        s.n = n;
        s.amps = std::move(a);
        return s;
    }

    int bit_of(int q) const { return n - 1 - q; }

    double norm2() const { return bettiq::norm2(amps); }

    void renormalize() {
        double nn = std::sqrt(norm2());
        require(nn > 0.0, "cannot renormalize a zero state");
        for (auto& a : amps) a /= nn;
    }

    void apply_h(int q) {
        check_qubit(q);
        const std::uint32_t b = std::uint32_t{1} << bit_of(q);
        const double inv = 1.0 / std::sqrt(2.0);
        for (std::uint32_t z = 0; z < amps.size(); ++z) {
            if (z & b) continue;
            cdouble a0 = amps[z], a1 = amps[z | b];
            amps[z] = (a0 + a1) * inv;
            amps[z | b] = (a0 - a1) * inv;
        }
    }

    void apply_x(int q) {
        check_qubit(q);
        const std::uint32_t b = std::uint32_t{1} << bit_of(q);
        for (std::uint32_t z = 0; z < amps.size(); ++z)
            if (!(z & b)) std::swap(amps[z], amps[z | b]);
    }

    void apply_cnot(int c, int t) {
        check_qubit(c);
        check_qubit(t);
        require(c != t, "CNOT control equals target");
        const std::uint32_t cb = std::uint32_t{1} << bit_of(c);
        const std::uint32_t tb = std::uint32_t{1} << bit_of(t);
        for (std::uint32_t z = 0; z < amps.size(); ++z)
            if ((z & cb) && !(z & tb)) std::swap(amps[z], amps[z | tb]);
    }

    void apply_ccnot(int c1, int c2, int t) {
        check_qubit(c1);
        check_qubit(c2);
        check_qubit(t);
        require(c1 != c2 && c1 != t && c2 != t, "CCNOT qubits must be distinct");
        const std::uint32_t cb = (std::uint32_t{1} << bit_of(c1)) | (std::uint32_t{1} << bit_of(c2));
        const std::uint32_t tb = std::uint32_t{1} << bit_of(t);
        for (std::uint32_t z = 0; z < amps.size(); ++z)
            if (((z & cb) == cb) && !(z & tb)) std::swap(amps[z], amps[z | tb]);
    }

    /// Rz(theta) = diag(e^{-i theta/2}, e^{+i theta/2}).
    void apply_rz(int q, double theta) {
        check_qubit(q);
        const std::uint32_t b = std::uint32_t{1} << bit_of(q);
        const cdouble p0 = std::polar(1.0, -0.5 * theta);
        const cdouble p1 = std::polar(1.0, 0.5 * theta);
        for (std::uint32_t z = 0; z < amps.size(); ++z) amps[z] *= (z & b) ? p1 : p0;
    }

  private:
    void check_qubit(int q) const { require(q >= 0 && q < n, "qubit index out of range"); }
};

/// Column b of the 2^n Hadamard matrix: amplitude at z is
/// 2^{-n/2} (-1)^{popcount(b AND z)}, i.e. X^b then H on every qubit.
inline StateVector hadamard_column(int n, std::uint32_t b) {
    require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    require(b < (std::uint32_t{1} << n), "column index out of range");
    StateVector s;
    s.n = n;
    const std::uint32_t size = std::uint32_t{1} << n;
    const double amp = 1.0 / std::sqrt(static_cast<double>(size));
    s.amps.resize(size);
    for (std::uint32_t z = 0; z < size; ++z)
        s.amps[z] = (popcount32(b & z) & 1) ? -amp : amp;
    return s;
}

/// Draws b uniformly in [0, 2^n) and prepares the Hadamard column probe.
inline StateVector prepare_hadamard_probe(int n, RngStream& rng) {
    require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    const auto b = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << n));
    return hadamard_column(n, b);
}

/// Uniform superposition over all simplices (H on every qubit); diagnostic
/// starting point for the projection procedures.
inline StateVector uniform_superposition(int n) { return hadamard_column(n, 0); }

/// Uniform superposition over all order-k simplex states.
inline StateVector uniform_over_order(int n, int k) {
    require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    require(k + 1 >= 0 && k + 1 <= n, "order k out of range");
    StateVector s;
    s.n = n;
    s.amps.assign(std::size_t{1} << n, cdouble{0.0, 0.0});
    const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, k + 1)));
    for (std::uint32_t z = 0; z < s.amps.size(); ++z)
        if (popcount32(z) == k + 1) s.amps[z] = amp;
    return s;
}

}  // namespace bettiq
