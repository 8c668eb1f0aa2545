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

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "bettiq/chebyshev.hpp"
#include "bettiq/circuit.hpp"
#include "bettiq/estimator_params.hpp"
#include "bettiq/operators.hpp"

namespace bettiq {

/// Eigenvalue census of a restricted Laplacian at a zero tolerance.
struct SpectrumSummary {
    std::vector<double> eigenvalues;  // ascending
    int zero_count = 0;
    double smallest_nonzero = 0.0;  // 0 when no eigenvalue clears the tolerance
    double tolerance = 0.0;
};

struct BettiResult {
    int beta = 0;
    SpectrumSummary spectrum;
};

/// Signed incidence of order-k simplices onto order-(k-1) simplices of the
/// complex, in the ascending-mask bases. Entries are exactly {0, +-1};
/// valid for k = 0 (rows = the empty simplex) through n-1.
inline Eigen::MatrixXd restricted_boundary_matrix(const Skeleton& g, int k) {
    require(k >= 0 && k <= g.n - 1, "order k out of range");
    const auto rows = simplices_of_order(g, k - 1);
    const auto cols = simplices_of_order(g, k);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const std::uint32_t s = cols[c];
        int rank = 0;  // vertices in ascending order = bits from most significant down
        for (int v = 0; v < g.n; ++v) {
            const std::uint32_t vb = vertex_mask(g.n, v);
            if (!(s & vb)) continue;
            const std::uint32_t face = s ^ vb;  // in the complex by downward closure
            const auto it = std::lower_bound(rows.begin(), rows.end(), face);
            D(static_cast<Eigen::Index>(it - rows.begin()), static_cast<Eigen::Index>(c)) =
                (rank & 1) ? -1.0 : 1.0;
            ++rank;
        }
    }
    return D;
}

/// Delta_k on the in-complex order-k basis, assembled from the integer
/// boundary matrices (exact small-integer entries).
inline Eigen::MatrixXd restricted_laplacian_matrix(const Skeleton& g, int k) {
    const auto down = restricted_boundary_matrix(g, k);
    Eigen::MatrixXd L = down.transpose() * down;
    if (k + 1 <= g.n - 1) {
        const auto up = restricted_boundary_matrix(g, k + 1);
        L += up * up.transpose();
    }
    return L;
}

/// beta_k as the dimension of ker(Delta_k): eigenvalues below tol count as
/// zero. Dense bound n <= 12.
inline BettiResult exact_betti_laplacian(const Skeleton& g, int k, double tol = 1e-8) {
    require(g.n <= 12, "dense oracle is limited to n <= 12");
    require(tol > 0.0, "tolerance must be positive");
    BettiResult res;
    res.spectrum.tolerance = tol;
    const Eigen::MatrixXd L = restricted_laplacian_matrix(g, k);
    if (L.rows() == 0) return res;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
    res.spectrum.eigenvalues.assign(solver.eigenvalues().data(),
                                    solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(res.spectrum.eigenvalues.begin(), res.spectrum.eigenvalues.end());
    for (double lam : res.spectrum.eigenvalues) {
        if (lam < tol) {
            ++res.spectrum.zero_count;
        } else if (res.spectrum.smallest_nonzero == 0.0) {
            res.spectrum.smallest_nonzero = lam;
        }
    }
    res.beta = res.spectrum.zero_count;
    return res;
}

namespace detail {

inline int matrix_rank_svd(const Eigen::MatrixXd& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++r;
    return r;
}

}  // namespace detail

/// beta_k = |S_k| - rank(boundary_k) - rank(boundary_{k+1}) via singular
/// values of the integer boundary matrices (1e-8 relative threshold).
inline int exact_betti_ranks(const Skeleton& g, int k) {
    require(g.n <= 12, "dense oracle is limited to n <= 12");
    require(k >= 0 && k <= g.n - 1, "order k out of range");
    const auto sk = simplices_of_order(g, k);
    int rank_down = detail::matrix_rank_svd(restricted_boundary_matrix(g, k));
    int rank_up = 0;
    if (k + 1 <= g.n - 1) rank_up = detail::matrix_rank_svd(restricted_boundary_matrix(g, k + 1));
    return static_cast<int>(sk.size()) - rank_down - rank_up;
}

/// e^{-i op t} on the materialized matrix (Pade with scaling-and-squaring,
/// dim <= 256). Unitary to 1e-10 for Hermitian input.
inline Eigen::MatrixXcd dense_expm(const LinearOperator& op, double t) {
    require(op.dim <= 256, "dense exponential is limited to dim <= 256");
    const Eigen::MatrixXcd A = op.dense();
    return (cdouble{0.0, -t} * A).exp();
}

/// Dense 2^n matrix of B from its matrix-free action.
inline LinearOperator full_boundary_operator(int n) {
    require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    LinearOperator op;
    op.dim = std::size_t{1} << n;
    op.apply_fn = [n](const AmpVec& v) {
        AmpVec out(v.size(), cdouble{0.0, 0.0});
        accumulate_B(v, out, n);
        return out;
    };
    return op;
}

/// Operator-norm distance between the Trotter circuit's data-register
/// action and the dense matrix exponential of -iBt. Dense oracle bound
/// n <= 8; the ancilla must disentangle exactly.
inline double trotter_error(int n, double t) {
    require(n >= 1 && n <= 8, "trotter_error oracle is limited to n <= 8");
    const Circuit c = build_trotter_circuit(n, t);
    const std::uint32_t size = std::uint32_t{1} << n;
    Eigen::MatrixXcd U(size, size);
    for (std::uint32_t z = 0; z < size; ++z) {
        StateVector in = StateVector::basis(n + 1, z << 1);  // ancilla |0> in the low bit
        StateVector out = run_circuit(std::move(in), c);
        double leak = 0.0;
        for (std::uint32_t r = 0; r < size; ++r) {
            U(r, z) = out.amps[(r << 1)];
            leak += std::norm(out.amps[(r << 1) | 1u]);
        }
        require(leak < 1e-20, "ancilla failed to disentangle");
    }
    const Eigen::MatrixXcd exact = dense_expm(full_boundary_operator(n), t);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(U - exact);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

/// Reference stochastic Chebyshev rank estimate of an operator scaled to
/// [0, 1]: three-term recurrence w^{(j+1)} = 2 A~ w^{(j)} - w^{(j-1)} on
/// probe vectors, step coefficients on the mapped threshold. Rademacher
/// probes in sampled mode; all-columns mode evaluates the trace exactly
/// over the basis.
inline double classical_cheb_rank(const LinearOperator& op, const EstimatorParams& params,
                                  RngStream& rng) {
    params.validate();
    require(params.delta.has_value(), "classical_cheb_rank needs the spectral threshold delta");
    const double delta = *params.delta;
    const int m = params.m > 0 ? params.m : degree_bound(delta, params.epsilon);
    const ChebSeries series = step_coefficients(m, delta - 1.0, 1.0);
    const auto mapped_apply = [&op](const AmpVec& v) {
        AmpVec w = op.apply(v);  // op holds the scaled operator; map x -> 2x-1
        for (std::size_t z = 0; z < w.size(); ++z) w[z] = 2.0 * w[z] - v[z];
        return w;
    };
    const auto probe_sum = [&](const AmpVec& v) {
        AmpVec w0 = v;
        AmpVec w1 = mapped_apply(v);
        auto dot = [&v](const AmpVec& w) {
            cdouble s{0.0, 0.0};
            for (std::size_t z = 0; z < v.size(); ++z) s += std::conj(v[z]) * w[z];
            return s.real();
        };
        double acc = series.coeffs[0] * dot(w0);
        if (m >= 1) acc += series.coeffs[1] * dot(w1);
        for (int j = 2; j <= m; ++j) {
            AmpVec w2 = mapped_apply(w1);
            for (std::size_t z = 0; z < w2.size(); ++z) w2[z] = 2.0 * w2[z] - w0[z];
            w0 = std::move(w1);
            w1 = std::move(w2);
            acc += series.coeffs[j] * dot(w1);
        }
        return acc;
    };
    if (params.trace_mode == TraceMode::all_columns) {
        require(op.dim <= 4096, "all-columns rank reference is limited to dim <= 4096");
        double total = 0.0;
        AmpVec e(op.dim, cdouble{0.0, 0.0});
        for (std::size_t z = 0; z < op.dim; ++z) {
            e[z] = 1.0;
            total += probe_sum(e);
            e[z] = 0.0;
        }
        return total;
    }
    const int n_v = params.n_v > 0 ? params.n_v : probe_bound(params.eta, params.epsilon, params.c_nv);
    double total = 0.0;
    for (int l = 0; l < n_v; ++l) {
        AmpVec v(op.dim);
        for (auto& a : v) a = (rng.next_u64() & 1) ? cdouble{-1.0, 0.0} : cdouble{1.0, 0.0};
        total += probe_sum(v);
    }
    return total / n_v;
}

}  // namespace bettiq
