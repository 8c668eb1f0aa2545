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
#include <chrono>
#include <string>

#include "bettiq/chebyshev.hpp"
#include "bettiq/estimator_params.hpp"
#include "bettiq/oracle.hpp"
#include "bettiq/operators.hpp"
#include "bettiq/sampling.hpp"

namespace bettiq {

/// Moment row of one probe: mu^(i) are power moments of the scaled
/// Laplacian, theta^(j) the Chebyshev moments in the mapped variable.
struct ProbeMoments {
    std::uint32_t probe_index = 0;  // Hadamard column
    double mu0 = 0.0;
    std::vector<double> power;  // filled on the power-conversion path
    std::vector<double> cheb;
    double conversion_slack = 0.0;
    int projection_attempts = 0;  // sampled mode: rejection repetitions consumed
};

struct MomentTable {
    std::vector<ProbeMoments> rows;
};

struct EstimationReport {
    int k = 0;
    double epsilon_scale = 0.0;  // the VR resolution the skeleton was built at
    double chi = 0.0;
    double chi_raw = 0.0;
    bool clamped = false;
    std::vector<std::string> flags;
    EstimatorParams params;  // with m and n_v resolved
    double scale = 1.0;
    double delta = 0.0;
    bool delta_measured = false;
    double lambda_max = 0.0;
    std::uint64_t simplex_count = 0;  // |S_k| from the classical census
    double dim_estimate = 0.0;        // 2^n times the accumulated mu0 mass
    std::string conversion;           // "power" or "recurrence"
    MomentTable moments;
    std::optional<int> oracle_beta;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;  // diagnostic only, never serialized

    bool has_flag(const std::string& f) const {
        return std::find(flags.begin(), flags.end(), f) != flags.end();
    }
};

namespace detail {

inline constexpr double kTrotterStep = 1e-3;
inline constexpr int kMaxProjectionAttempts = 100000;

struct EstimatorContext {
    const Skeleton* g = nullptr;
    int k = 0;
    int n = 0;
    ComplexMembership member;
    ScaledLaplacian scaled;
    // Restricted representation for the operator recurrence (n <= 12).
    std::vector<std::uint32_t> basis;
    Eigen::MatrixXd lap_restricted;
    bool have_restricted = false;

    EstimatorContext(const Skeleton& skel, int order) : g(&skel), k(order), n(skel.n), member(skel) {}

    void ensure_restricted() {
        if (have_restricted) return;
        basis = simplices_of_order(*g, k);
        lap_restricted = restricted_laplacian_matrix(*g, k);
        have_restricted = true;
    }

    /// Scale from power iteration; delta from the hint or, at oracle
    /// scale (n <= 12), from the restricted spectrum. The full-space
    /// dense route of scale_laplacian is avoided on the hot path.
    void resolve_scaling(std::optional<double> delta_hint) {
        scaled.base = restricted_laplacian(*g, k);
        const double lmax = power_iteration_lambda_max(scaled.base, 50);
        scaled.lambda_max = lmax;
        if (!(lmax > 0.0)) {
            // zero operator: scale 1; a configured delta still stands so
            // empty-support probes can be flagged rather than errored
            scaled.scale = 1.0;
            if (delta_hint) {
                require(*delta_hint > 0.0 && *delta_hint < 1.0, "delta hint must lie in (0,1)");
                scaled.delta = *delta_hint;
                scaled.delta_defined = true;
            }
            return;
        }
        scaled.scale = 1.0 / (1.01 * lmax);
        if (delta_hint) {
            require(*delta_hint > 0.0 && *delta_hint < 1.0, "delta hint must lie in (0,1)");
            scaled.delta = *delta_hint;
            scaled.delta_defined = true;
            return;
        }
        require(n <= 12, "delta must be configured when n > 12 (oracle cannot measure it)");
        ensure_restricted();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap_restricted);
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            const double lam = solver.eigenvalues()(i) * scaled.scale;
            if (lam > 1e-8) {
                scaled.delta = lam;
                scaled.delta_defined = true;
                scaled.delta_measured = true;
                return;
            }
        }
    }
};

/// Projects a probe onto the in-complex order-k subspace. Returns the
/// unnormalized projected amplitudes; mass receives its squared norm.
/// In sampled mode the mid-circuit procedures run with rejection until
/// both projections succeed; conditioned on success the collapse equals
/// the exact projection, so the returned amplitudes coincide.
inline AmpVec project_probe(const StateVector& probe, const EstimatorContext& ctx,
                            ProjectorMode mode, RngStream& rng, double& mass, int& attempts) {
    if (mode == ProjectorMode::exact) {
        AmpVec amps = probe.amps;
        project_order(amps, ctx.k);
        project_complex_exact(amps, ctx.member);
        mass = norm2(amps);
        attempts = 1;
        return amps;
    }
    {
        // a zero-amplitude branch can never post-select; all trials reject
        // and the estimated mass is exactly zero
        AmpVec check = probe.amps;
        project_order(check, ctx.k);
        project_complex_exact(check, ctx.member);
        if (norm2(check) <= 1e-28) {
            mass = 0.0;
            attempts = 0;
            return AmpVec(probe.amps.size(), cdouble{0.0, 0.0});
        }
    }
    for (attempts = 1; attempts <= kMaxProjectionAttempts; ++attempts) {
        StateVector s = probe;
        s.norm_tracking = 1.0;
        auto order_res = project_order_sampled(std::move(s), rng, ctx.k);
        if (!order_res.success) continue;
        auto complex_res = project_complex_sampled(std::move(order_res.state), *ctx.g, rng);
        if (!complex_res.success) continue;
        mass = complex_res.state.norm_tracking;
        AmpVec amps = std::move(complex_res.state.amps);
        const double root = std::sqrt(mass);
        for (auto& a : amps) a *= root;
        return amps;
    }
    throw std::runtime_error("sampled projection exhausted its rejection budget");
}

/// One sampled-projection step inside the moment chain, retried on the
/// saved pre-measurement state until the wanted branch is observed.
template <typename Step>
double retry_projection(const AmpVec& pre, AmpVec& post, Step step, int& attempts) {
    for (int a = 1; a <= kMaxProjectionAttempts; ++a) {
        ++attempts;
        StateVector s;
        s.n = std::countr_zero(pre.size());
        s.amps = pre;
        s.norm_tracking = 1.0;
        double kept = 0.0;
        if (step(s, kept)) {
            post = std::move(s.amps);
            return kept;
        }
    }
    throw std::runtime_error("sampled projection exhausted its rejection budget");
}

/// Power moments mu^(i) = <v| (s Delta_k)^i |v> for i = 0..m via the
/// alternating-projection chain; the state is renormalized after every
/// step and the post-selection mass carries the moment value.
inline ProbeMoments chain_power_moments(const StateVector& probe, const EstimatorContext& ctx,
                                        int m, const EstimatorParams& params, RngStream& rng) {
    ProbeMoments row;
    row.power.assign(m + 1, 0.0);
    double mass = 0.0;
    AmpVec amps = project_probe(probe, ctx, params.projector_mode, rng, mass, row.projection_attempts);
    row.mu0 = mass;
    row.power[0] = mass;
    if (mass <= 0.0) return row;  // probe has no in-complex component
    {
        const double inv = 1.0 / std::sqrt(mass);
        for (auto& a : amps) a *= inv;
    }
    const int n = ctx.n;
    for (int j = 0; j < m && mass > 0.0; ++j) {
        AmpVec next(amps.size(), cdouble{0.0, 0.0});
        accumulate_B(amps, next, n);
        double bn = norm2(next);
        mass *= ctx.scaled.scale * bn;
        if (bn == 0.0) {
            std::fill(row.power.begin() + j + 1, row.power.end(), 0.0);
            return row;
        }
        const double inv = 1.0 / std::sqrt(bn);
        for (auto& a : next) a *= inv;
        if (params.projector_mode == ProjectorMode::exact) {
            if (j % 2 == 1) project_order(next, ctx.k);
            project_complex_exact(next, ctx.member);
            const double kept = norm2(next);
            mass *= kept;
            if (kept == 0.0) {
                std::fill(row.power.begin() + j + 1, row.power.end(), 0.0);
                return row;
            }
            const double kinv = 1.0 / std::sqrt(kept);
            for (auto& a : next) a *= kinv;
        } else {
            // guard: post-selection on a zero branch can never succeed and
            // estimates the remaining moments as exactly zero
            AmpVec check = next;
            if (j % 2 == 1) project_order(check, ctx.k);
            project_complex_exact(check, ctx.member);
            if (norm2(check) <= 1e-28) {
                std::fill(row.power.begin() + j + 1, row.power.end(), 0.0);
                return row;
            }
            AmpVec pre = next;
            if (j % 2 == 1) {
                mass *= retry_projection(pre, next, [&](StateVector& s, double& kept) {
                    auto res = project_order_sampled(std::move(s), rng, ctx.k);
                    kept = res.state.norm_tracking;
                    s = std::move(res.state);
                    return res.success;
                }, row.projection_attempts);
                pre = next;
            }
            mass *= retry_projection(pre, next, [&](StateVector& s, double& kept) {
                auto res = project_complex_sampled(std::move(s), *ctx.g, rng);
                kept = res.state.norm_tracking;
                s = std::move(res.state);
                return res.success;
            }, row.projection_attempts);
        }
        amps = std::move(next);
        row.power[j + 1] = mass;
    }
    return row;
}

/// Small-t first-moment extraction from the Trotterized unitary:
/// mu^(1) ~= (mu^(0)(1 - n t^2) - Re M) / t^2 with
/// M = <v| P_k P_G U_B P_G U_B P_G P_k |v>.
inline double trotter_extract_mu1(const StateVector& probe, const EstimatorContext& ctx,
                                  const Circuit& circuit, double mu0) {
    const int n = ctx.n;
    const double t = kTrotterStep;
    AmpVec w = probe.amps;
    project_order(w, ctx.k);
    project_complex_exact(w, ctx.member);
    for (int pass = 0; pass < 2; ++pass) {
        StateVector full = StateVector::zero_state(n + 1);
        std::fill(full.amps.begin(), full.amps.end(), cdouble{0.0, 0.0});
        for (std::uint32_t z = 0; z < w.size(); ++z) full.amps[z << 1] = w[z];
        full = run_circuit(std::move(full), circuit);
        for (std::uint32_t z = 0; z < w.size(); ++z) w[z] = full.amps[z << 1];
        project_complex_exact(w, ctx.member);
    }
    project_order(w, ctx.k);
    cdouble M{0.0, 0.0};
    for (std::uint32_t z = 0; z < w.size(); ++z) M += std::conj(probe.amps[z]) * w[z];
    const double mu1_unscaled = (mu0 * (1.0 - n * t * t) - M.real()) / (t * t);
    return ctx.scaled.scale * mu1_unscaled;
}

/// Chebyshev moments by the three-term recurrence on the restricted
/// operator (the classical fallback above the conversion cap).
inline ProbeMoments recurrence_moments(const StateVector& probe, EstimatorContext& ctx, int m,
                                       const EstimatorParams& params, RngStream& rng) {
    ProbeMoments row;
    row.cheb.assign(m + 1, 0.0);
    double mass = 0.0;
    AmpVec amps = project_probe(probe, ctx, params.projector_mode, rng, mass, row.projection_attempts);
    row.mu0 = mass;
    row.power.assign(1, mass);
    if (mass <= 0.0) return row;
    if (ctx.n > 12) {
        // No dense restriction at this size; run the recurrence matrix-free
        // on the full register. The chain stays supported on the restricted
        // subspace, so the identity in the affine map acts there.
        const double s2 = 2.0 * ctx.scaled.scale;
        auto mapped = [&](const AmpVec& v) {
            AmpVec w = ctx.scaled.base.apply(v);
            for (std::size_t z = 0; z < w.size(); ++z) w[z] = s2 * w[z] - v[z];
            return w;
        };
        auto dot_u = [&amps](const AmpVec& w) {
            cdouble s{0.0, 0.0};
            for (std::size_t z = 0; z < w.size(); ++z) s += std::conj(amps[z]) * w[z];
            return s.real();
        };
        AmpVec w0 = amps;
        AmpVec w1 = mapped(amps);
        row.cheb[0] = dot_u(w0);
        if (m >= 1) row.cheb[1] = dot_u(w1);
        for (int j = 2; j <= m; ++j) {
            AmpVec w2 = mapped(w1);
            for (std::size_t z = 0; z < w2.size(); ++z) w2[z] = 2.0 * w2[z] - w0[z];
            w0 = std::move(w1);
            w1 = std::move(w2);
            row.cheb[j] = dot_u(w1);
        }
        return row;
    }
    ctx.ensure_restricted();
    const auto& basis = ctx.basis;
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd u(dim);
    for (Eigen::Index i = 0; i < dim; ++i) u(i) = amps[basis[static_cast<std::size_t>(i)]];
    const double s2 = 2.0 * ctx.scaled.scale;
    auto mapped = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
        return s2 * (ctx.lap_restricted * v) - v;
    };
    Eigen::VectorXcd w0 = u;
    Eigen::VectorXcd w1 = mapped(u);
    row.cheb[0] = u.dot(w0).real();
    if (m >= 1) row.cheb[1] = u.dot(w1).real();
    for (int j = 2; j <= m; ++j) {
        Eigen::VectorXcd w2 = 2.0 * mapped(w1) - w0;
        w0.swap(w1);
        w1.swap(w2);
        row.cheb[j] = u.dot(w1).real();
    }
    return row;
}

}  // namespace detail

/// Moment table row for one prepared probe; the spectral scale and delta
/// are resolved exactly as in estimate_betti.
inline ProbeMoments power_moments(const StateVector& probe, const Skeleton& g, int k, int m,
                                  const EstimatorParams& params, RngStream& rng) {
    params.validate();
    detail::EstimatorContext ctx(g, k);
    ctx.resolve_scaling(params.delta);
    require(ctx.scaled.delta_defined, "delta undefined for this operator");
    ProbeMoments row = detail::chain_power_moments(probe, ctx, m, params, rng);
    row.cheb.assign(m + 1, 0.0);
    const auto nu = moments_to_cheb_variable(row.power);
    double worst = 0.0;
    for (int j = 0; j <= m; ++j) {
        double slack = 0.0;
        row.cheb[j] = cheb_from_power(nu, j, &slack);
        worst = std::max(worst, slack);
    }
    row.conversion_slack = worst;
    return row;
}

/// Convenience overload with a fixed-seed measurement stream; exact
/// projector mode consumes no randomness at all.
inline ProbeMoments power_moments(const StateVector& probe, const Skeleton& g, int k, int m,
                                  const EstimatorParams& params) {
    RngStream rng(0);
    return power_moments(probe, g, k, m, params, rng);
}

/// Algorithm: prepare Hadamard probes, accumulate Chebyshev moments of
/// the scaled restricted Laplacian, and form
///   chi_k = 1 - (sum_l sum_j c_j theta_l^(j)) / (sum_l mu_l^(0)),
/// the probe-normalized reading of the trace estimator. Degrees above the
/// conversion cap switch to the operator recurrence and are flagged.
inline EstimationReport estimate_betti(const Skeleton& g, int k, const EstimatorParams& params,
                                       RngStream& rng) {
    const auto t0 = std::chrono::steady_clock::now();
    params.validate();
    require(k >= 0 && k <= g.n - 1, "order k out of range");
    require(g.n <= kMaxQubits, "n exceeds the statevector bound");

    EstimationReport rep;
    rep.k = k;
    rep.epsilon_scale = g.epsilon;
    rep.params = params;
    rep.seed = rng.seed();

    const ComplexStats stats = complex_stats(g, k);
    rep.simplex_count = stats.count;
    if (stats.count == 0) {
        rep.flags.push_back("empty-order");
        rep.chi = 0.0;
        return rep;
    }

    detail::EstimatorContext ctx(g, k);
    ctx.resolve_scaling(params.delta);
    if (!ctx.scaled.delta_defined) {
        rep.flags.push_back("delta-undefined");
        rep.chi = 0.0;
        return rep;
    }
    rep.scale = ctx.scaled.scale;
    rep.delta = ctx.scaled.delta;
    rep.delta_measured = ctx.scaled.delta_measured;
    rep.lambda_max = ctx.scaled.lambda_max;

    const int m = params.m > 0 ? params.m : degree_bound(ctx.scaled.delta, params.epsilon);
    const int n_v = params.n_v > 0 ? params.n_v
                                   : probe_bound(params.eta, params.epsilon, params.c_nv);
    rep.params.m = m;
    rep.params.n_v = n_v;
    rep.params.delta = ctx.scaled.delta;

    const bool use_power = m <= kPowerConversionCap;
    rep.conversion = use_power ? "power" : "recurrence";
    if (!use_power) rep.flags.push_back("degree-above-conversion-cap");

    const ChebSeries series = step_coefficients(m, ctx.scaled.delta - 1.0, 1.0);

    Circuit trotter;
    if (params.moment_mode == MomentMode::trotter_extraction) {
        trotter = build_trotter_circuit(g.n, detail::kTrotterStep);
        if (use_power)
            rep.flags.push_back("trotter-extraction-first-moment");
        else
            rep.flags.push_back("trotter-extraction-inactive");
    }

    const bool all_columns = params.trace_mode == TraceMode::all_columns;
    if (all_columns) require(g.n <= 10, "all-columns mode is a diagnostic for n <= 10");
    const std::uint32_t columns = std::uint32_t{1} << g.n;
    const int probes = all_columns ? static_cast<int>(columns) : n_v;

    long double numer = 0.0L;
    long double denom = 0.0L;
    double worst_slack = 0.0;
    for (int l = 0; l < probes; ++l) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(l));
        const std::uint32_t b =
            all_columns ? static_cast<std::uint32_t>(l)
                        : static_cast<std::uint32_t>(sub.next_below(columns));
        const StateVector probe = hadamard_column(g.n, b);
        ProbeMoments row;
        if (use_power) {
            row = detail::chain_power_moments(probe, ctx, m, params, sub);
            if (params.moment_mode == MomentMode::trotter_extraction && m >= 1 && row.mu0 > 0.0)
                row.power[1] = detail::trotter_extract_mu1(probe, ctx, trotter, row.mu0);
            row.cheb.assign(m + 1, 0.0);
            const auto nu = moments_to_cheb_variable(row.power);
            for (int j = 0; j <= m; ++j) {
                double slack = 0.0;
                row.cheb[j] = cheb_from_power(nu, j, &slack);
                row.conversion_slack = std::max(row.conversion_slack, slack);
            }
        } else {
            row = detail::recurrence_moments(probe, ctx, m, params, sub);
        }
        row.probe_index = b;
        for (int j = 0; j <= m; ++j) numer += static_cast<long double>(series.coeffs[j]) * row.cheb[j];
        denom += row.mu0;
        worst_slack = std::max(worst_slack, row.conversion_slack);
        rep.moments.rows.push_back(std::move(row));
    }

    rep.dim_estimate = static_cast<double>(denom) / probes * static_cast<double>(columns);
    rep.chi_raw = 1.0 - static_cast<double>(numer / denom);
    rep.chi = std::clamp(rep.chi_raw, 0.0, 1.0);
    if (rep.chi != rep.chi_raw) {
        rep.clamped = true;
        rep.flags.push_back("clamped");
    }
    if (worst_slack > 1e-6) rep.flags.push_back("conversion-slack");
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace bettiq
