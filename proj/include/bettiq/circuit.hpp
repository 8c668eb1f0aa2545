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

#include <algorithm>
#include <cstdio>

#include "bettiq/state_vector.hpp"

namespace bettiq {

struct Gate {
    enum class Kind { H, X, CNOT, CCNOT, RZ };
    Kind kind;
    int q0 = -1;
    int q1 = -1;
    int q2 = -1;
    double theta = 0.0;

    static Gate h(int q) { return {Kind::H, q}; }
    static Gate x(int q) { return {Kind::X, q}; }
    static Gate cnot(int c, int t) { return {Kind::CNOT, c, t}; }
    static Gate ccnot(int c1, int c2, int t) { return {Kind::CCNOT, c1, c2, t}; }
    static Gate rz(int q, double theta) { return {Kind::RZ, q, -1, -1, theta}; }
};

struct GateCounts {
    int h = 0;
    int x = 0;
    int cnot = 0;
    int ccnot = 0;
    int rz = 0;
};

/// An ordered gate list on n qubits (data register plus any ancillas).
struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    GateCounts counts() const {
        GateCounts c;
        for (const auto& g : gates) {
            switch (g.kind) {
                case Gate::Kind::H: ++c.h; break;
                case Gate::Kind::X: ++c.x; break;
                case Gate::Kind::CNOT: ++c.cnot; break;
                case Gate::Kind::CCNOT: ++c.ccnot; break;
                case Gate::Kind::RZ: ++c.rz; break;
            }
        }
        return c;
    }

    /// Longest dependency chain of entangling (CNOT/CCNOT) gates; the
    /// NISQ depth metric. Single-qubit gates fold into adjacent layers.
    int depth() const {
        std::vector<int> at(n, 0);
        int best = 0;
        for (const auto& g : gates) {
            if (g.kind != Gate::Kind::CNOT && g.kind != Gate::Kind::CCNOT) continue;
            int d = at[g.q0];
            d = std::max(d, at[g.q1]);
            if (g.kind == Gate::Kind::CCNOT) d = std::max(d, at[g.q2]);
            ++d;
            at[g.q0] = d;
            at[g.q1] = d;
            if (g.kind == Gate::Kind::CCNOT) at[g.q2] = d;
            best = std::max(best, d);
        }
        return best;
    }
};

/// The gate-cancelled product circuit for U_B(t) = prod_i e^{-i t term_i}
/// on n data qubits plus one parity ancilla (qubit n). The leading-Z
/// ladders of adjacent term exponentials telescope, leaving exactly
/// 2(2n-1) CNOTs, 2n Hadamards, and n rotations.
inline Circuit build_trotter_circuit(int n, double t) {
    require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    Circuit c;
    c.n = n + 1;
    const int anc = n;
    for (int i = 0; i < n; ++i) {
        c.gates.push_back(Gate::h(i));
        c.gates.push_back(Gate::cnot(i, anc));
        c.gates.push_back(Gate::rz(anc, 2.0 * t));
        c.gates.push_back(Gate::cnot(i, anc));
        c.gates.push_back(Gate::h(i));
        if (i < n - 1) c.gates.push_back(Gate::cnot(i, anc));  // opening of the next Z ladder
    }
    for (int i = n - 2; i >= 0; --i) c.gates.push_back(Gate::cnot(i, anc));
    return c;
}

/// Exact gate-by-gate amplitude evolution.
inline StateVector run_circuit(StateVector state, const Circuit& c) {
    require(state.n == c.n, "register sizes do not match");
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::H: state.apply_h(g.q0); break;
            case Gate::Kind::X: state.apply_x(g.q0); break;
            case Gate::Kind::CNOT: state.apply_cnot(g.q0, g.q1); break;
            case Gate::Kind::CCNOT: state.apply_ccnot(g.q0, g.q1, g.q2); break;
            case Gate::Kind::RZ: state.apply_rz(g.q0, g.theta); break;
        }
    }
    return state;
}

/// Line-oriented text export ("H 3", "CNOT 0 4", "RZ 2 0.001"), for
/// cross-simulator validation.
inline std::string export_circuit(const Circuit& c) {
    std::string out;
    char buf[64];
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::H: std::snprintf(buf, sizeof buf, "H %d\n", g.q0); break;
            case Gate::Kind::X: std::snprintf(buf, sizeof buf, "X %d\n", g.q0); break;
            case Gate::Kind::CNOT: std::snprintf(buf, sizeof buf, "CNOT %d %d\n", g.q0, g.q1); break;
            case Gate::Kind::CCNOT:
                std::snprintf(buf, sizeof buf, "CCNOT %d %d %d\n", g.q0, g.q1, g.q2);
                break;
            case Gate::Kind::RZ:
                std::snprintf(buf, sizeof buf, "RZ %d %.17g\n", g.q0, g.theta);
                break;
        }
        out += buf;
    }
    return out;
}

}  // namespace bettiq
