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

#include <functional>
#include <ostream>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "bettiq/complex.hpp"
#include "bettiq/pauli.hpp"
#include "bettiq/rng.hpp"

namespace bettiq {

/// Zeroes every amplitude whose index popcount differs from k+1. No
/// renormalization: the sub-normalized output models post-selection.
inline void project_order(AmpVec& state, int k) {
    const int n = std::countr_zero(state.size());
    require(state.size() == (std::size_t{1} << n), "state length is not a power of two");
    require(k + 1 >= 0 && k + 1 <= n, "order k out of range");
    for (std::uint32_t z = 0; z < state.size(); ++z)
        if (popcount32(z) != k + 1) state[z] = cdouble{0.0, 0.0};
}

inline void project_complex_exact(AmpVec& state, const ComplexMembership& member) {
    require(state.size() == (std::size_t{1} << member.n()), "state length mismatch");
    for (std::uint32_t z = 0; z < state.size(); ++z)
        if (!member.contains(z)) state[z] = cdouble{0.0, 0.0};
}

/// Convenience overload; builds the membership table on the fly.
inline void project_complex_exact(AmpVec& state, const Skeleton& g) {
    ComplexMembership member(g);
    project_complex_exact(state, member);
}

/// An executable linear map on 2^n amplitude vectors, with optional dense
/// materialization for oracle and diagnostic use (n <= 12).
struct LinearOperator {
    std::size_t dim = 0;
    std::function<AmpVec(const AmpVec&)> apply_fn;

    AmpVec apply(const AmpVec& v) const {
        require(v.size() == dim, "operator/vector dimension mismatch");
        return apply_fn(v);
    }

    Eigen::MatrixXcd dense() const {
        require(dim <= 4096, "dense materialization is limited to n <= 12");
        Eigen::MatrixXcd M(dim, dim);
        AmpVec e(dim, cdouble{0.0, 0.0});
        for (std::size_t c = 0; c < dim; ++c) {
            e[c] = 1.0;
            AmpVec col = apply(e);
            for (std::size_t r = 0; r < dim; ++r) M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
            e[c] = 0.0;
        }
        return M;
    }
};

/// Diagnostic dense dump: dimension header, then one row per line of
/// row-major "re im" pairs, for cross-checking against independent
/// implementations.
inline void dump_dense(const LinearOperator& op, std::ostream& out) {
    const Eigen::MatrixXcd M = op.dense();
    out << M.rows() << "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            std::snprintf(buf, sizeof buf, c ? " %.17g %.17g" : "%.17g %.17g", M(r, c).real(),
                          M(r, c).imag());
            out << buf;
        }
        out << "\n";
    }
}

/// Delta_k = P_k P_Gamma B P_Gamma B P_Gamma P_k on the full 2^n space;
/// Hermitian and positive semidefinite on its support.
inline LinearOperator restricted_laplacian(const Skeleton& g, int k) {
    require(k >= 0 && k <= g.n - 1, "order k out of range");
    auto member = std::make_shared<ComplexMembership>(g);
    const int n = g.n;
    LinearOperator op;
    op.dim = std::size_t{1} << n;
    op.apply_fn = [member, n, k](const AmpVec& v) {
        AmpVec cur = v;
        project_order(cur, k);
        project_complex_exact(cur, *member);
        AmpVec tmp(cur.size(), cdouble{0.0, 0.0});
        accumulate_B(cur, tmp, n);
        project_complex_exact(tmp, *member);
        std::fill(cur.begin(), cur.end(), cdouble{0.0, 0.0});
        accumulate_B(tmp, cur, n);
        project_complex_exact(cur, *member);
        project_order(cur, k);
        return cur;
    };
    return op;
}

/// Restricted boundary P_{k-1} P_Gamma B P_Gamma P_k; entries in {0, +-1}
/// on basis states.
inline LinearOperator restricted_boundary(const Skeleton& g, int k) {
    require(k >= 1 && k <= g.n - 1, "order k out of range");
    auto member = std::make_shared<ComplexMembership>(g);
    const int n = g.n;
    LinearOperator op;
    op.dim = std::size_t{1} << n;
    op.apply_fn = [member, n, k](const AmpVec& v) {
        AmpVec cur = v;
        project_order(cur, k);
        project_complex_exact(cur, *member);
        AmpVec out(cur.size(), cdouble{0.0, 0.0});
        accumulate_B(cur, out, n);
        project_complex_exact(out, *member);
        project_order(out, k - 1);
        return out;
    };
    return op;
}

/// A Laplacian together with the scale s mapping its spectrum into [0,1]
/// and the spectral threshold delta of the scaled operator.
struct ScaledLaplacian {
    LinearOperator base;
    double scale = 1.0;
    double delta = 0.0;
    bool delta_defined = false;
    bool delta_measured = false;  // measured by the oracle rather than configured
    double lambda_max = 0.0;      // the power-iteration estimate behind the scale
};

namespace detail {

inline double power_iteration_lambda_max(const LinearOperator& op, int min_iters) {
    RngStream rng(0x5CA1AB1EULL);
    AmpVec v(op.dim);
    double nrm = 0.0;
    for (auto& a : v) {
        a = cdouble{rng.next_double() - 0.5, rng.next_double() - 0.5};
        nrm += std::norm(a);
    }
    nrm = std::sqrt(nrm);
    for (auto& a : v) a /= nrm;
    double lambda = 0.0;
    double prev = -1.0;
    for (int it = 0; it < 20 * min_iters; ++it) {
        AmpVec w = op.apply(v);
        double wn = std::sqrt(norm2(w));
        if (wn == 0.0) return 0.0;
        double rayleigh = 0.0;  // Re <v|w>, real for Hermitian op
        for (std::size_t z = 0; z < v.size(); ++z)
            rayleigh += (std::conj(v[z]) * w[z]).real();
        for (auto& a : w) a /= wn;
        v.swap(w);
        lambda = std::max(lambda, rayleigh);
        if (it + 1 >= min_iters &&
            std::abs(rayleigh - prev) <= 1e-13 * std::max(1.0, std::abs(rayleigh)))
            break;
        prev = rayleigh;
    }
    return lambda;
}

}  // namespace detail

/// Measures lambda_max by power iteration (>= 50 iterations) and sets
/// s = 1/(1.01 lambda_max). delta comes from the hint when given, else
/// from the dense spectrum at oracle scale (n <= 12). A zero operator is
/// returned with scale 1 and delta flagged undefined.
inline ScaledLaplacian scale_laplacian(const LinearOperator& op,
                                       std::optional<double> delta_hint = std::nullopt) {
    ScaledLaplacian out;
    out.base = op;
    double lmax = detail::power_iteration_lambda_max(op, 50);
    out.lambda_max = lmax;
    if (!(lmax > 0.0)) {
        // zero operator, or iteration failed to pick up any component
        const int n = std::countr_zero(op.dim);
        bool all_zero = true;
        AmpVec probe(op.dim, cdouble{0.0, 0.0});
        for (std::size_t z = 0; z < op.dim && all_zero; z += std::max<std::size_t>(1, op.dim / 8)) {
            probe[z] = 1.0;
            all_zero = norm2(op.apply(probe)) == 0.0;
            probe[z] = 0.0;
        }
        out.scale = all_zero ? 1.0 : 1.0 / n;
        out.delta_defined = false;
        return out;
    }
    out.scale = 1.0 / (1.01 * lmax);
    if (delta_hint) {
        require(*delta_hint > 0.0 && *delta_hint < 1.0, "delta hint must lie in (0,1)");
        out.delta = *delta_hint;
        out.delta_defined = true;
        return out;
    }
    Eigen::MatrixXcd dense = op.dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    double smallest = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double lam = solver.eigenvalues()(i) * out.scale;
        if (lam > 1e-8) {
            smallest = lam;
            break;
        }
    }
    if (smallest > 0.0) {
        out.delta = smallest;
        out.delta_defined = true;
        out.delta_measured = true;
    }
    return out;
}

}  // namespace bettiq
