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

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "bettiq/report.hpp"

namespace bettiq {

struct RunConfig {
    std::string input_path;
    PointFormat format = PointFormat::csv;
    Metric metric = Metric::euclidean;
    std::vector<double> epsilons;  // ascending, nonnegative
    std::vector<int> orders;       // empty means all of 0..n-1
    EstimatorParams est;
    std::uint64_t seed = 0;  // defaulted by the CLI and always recorded
    bool oracle = false;
    std::string out_prefix;  // writes <prefix>.jsonl and <prefix>.csv
    int workers = 0;         // 0: BETTIQ_WORKERS env, else hardware count
};

/// One (epsilon, k) cell of the multi-scale output.
struct BettiRecord {
    double epsilon = 0.0;
    int k = 0;
    double chi = 0.0;
    double beta_estimate = 0.0;  // chi times the dim estimate
    std::optional<int> beta_oracle;
    std::optional<double> beta0_unreduced_estimate;  // k = 0 only
    std::optional<int> beta0_unreduced_oracle;
    EstimationReport report;
};

struct BettiCurve {
    std::vector<BettiRecord> records;
};

/// Flags that mark an estimation failure (CLI exit code 2); everything
/// else is informational.
inline bool is_failure_flag(const std::string& f) {
    return f == "delta-undefined" || f.rfind("estimation-error", 0) == 0;
}

inline bool curve_has_failures(const BettiCurve& curve) {
    for (const auto& rec : curve.records)
        for (const auto& f : rec.report.flags)
            if (is_failure_flag(f)) return true;
    return false;
}

namespace detail {

inline int resolve_workers(int configured, std::size_t jobs) {
    int w = configured;
    if (w <= 0) {
        if (const char* env = std::getenv("BETTIQ_WORKERS")) w = std::atoi(env);
        if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
        if (w <= 0) w = 1;
    }
    return static_cast<int>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

/// Runs fn(job_index) over a fixed job list; results land in indexed
/// slots, so the output order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t jobs, int workers, Fn fn) {
    if (jobs == 0) return;
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

inline void validate_config(const RunConfig& config, int n) {
    require(!config.epsilons.empty(), "at least one epsilon is required");
    double prev = -1.0;
    for (double e : config.epsilons) {
        require(std::isfinite(e) && e >= 0.0, "epsilon values must be finite and >= 0");
        require(e >= prev, "epsilon values must be ascending");
        prev = e;
    }
    for (int k : config.orders) require(k >= 0 && k <= n - 1, "order out of 0..n-1");
    config.est.validate();
    require(n >= 1 && n <= kMaxQubits, "point count exceeds the statevector bound");
    if (config.est.trace_mode == TraceMode::all_columns)
        require(n <= 10, "all-columns mode is a diagnostic for n <= 10");
    if (config.oracle) require(n <= 12, "the exact oracle is limited to n <= 12");
    if (!config.est.delta && n > 12)
        require(false, "delta must be configured when n > 12 (oracle cannot measure it)");
}

/// The epsilon-sweep driver: one skeleton per scale, one estimate per
/// (epsilon, k) cell, oracle cross-check when enabled. Cells run on a
/// worker pool with per-cell RNG substreams; output order is the (eps, k)
/// sort.
inline BettiCurve run(const RunConfig& config, const DistanceMatrix& dm) {
    const int n = dm.n;
    validate_config(config, n);
    std::vector<int> orders = config.orders;
    if (orders.empty())
        for (int k = 0; k < n; ++k) orders.push_back(k);

    std::vector<Skeleton> skeletons;
    skeletons.reserve(config.epsilons.size());
    for (double e : config.epsilons) skeletons.push_back(build_skeleton(dm, e));

    struct Job {
        std::size_t eps_index;
        int k;
    };
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < config.epsilons.size(); ++e)
        for (int k : orders) jobs.push_back({e, k});

    BettiCurve curve;
    curve.records.resize(jobs.size());
    const RngStream root(config.seed);
    const int workers = detail::resolve_workers(config.workers, jobs.size());
    detail::parallel_for(jobs.size(), workers, [&](std::size_t i) {
        const Job& job = jobs[i];
        const Skeleton& g = skeletons[job.eps_index];
        BettiRecord rec;
        rec.epsilon = config.epsilons[job.eps_index];
        rec.k = job.k;
        RngStream cell = root.substream((static_cast<std::uint64_t>(job.eps_index) << 32) |
                                        static_cast<std::uint32_t>(job.k));
        try {
            rec.report = estimate_betti(g, job.k, config.est, cell);
        } catch (const std::exception& e) {
            rec.report.k = job.k;
            rec.report.epsilon_scale = g.epsilon;
            rec.report.flags.push_back(std::string("estimation-error: ") + e.what());
        }
        if (config.est.delta) rec.report.flags.push_back("abne-delta-override");
        if (config.oracle) {
            const auto oracle = exact_betti_laplacian(g, job.k);
            rec.report.oracle_beta = oracle.beta;
            rec.beta_oracle = oracle.beta;
        }
        rec.chi = rec.report.chi;
        rec.beta_estimate = rec.report.chi * rec.report.dim_estimate;
        curve.records[i] = std::move(rec);
    });
    return curve;
}

inline BettiCurve run(const RunConfig& config) {
    std::ifstream in(config.input_path);
    if (!in) throw std::runtime_error("cannot open input: " + config.input_path);
    DistanceMatrix dm;
    if (config.metric == Metric::precomputed) {
        dm = load_distance_matrix(in, config.format);
    } else {
        dm = pairwise_distances(load_points(in, config.format), config.metric);
    }
    return run(config, dm);
}

/// Adds the unreduced beta_0 = reduced + 1 adjustment to every k = 0
/// record of a nonempty complex; k >= 1 records pass through.
inline BettiCurve report_unreduced(BettiCurve curve) {
    for (auto& rec : curve.records) {
        if (rec.k != 0) continue;
        rec.beta0_unreduced_estimate = rec.beta_estimate + 1.0;
        if (rec.beta_oracle) rec.beta0_unreduced_oracle = *rec.beta_oracle + 1;
    }
    return curve;
}

inline nlohmann::json to_json(const BettiRecord& rec) {
    nlohmann::json j{
        {"epsilon", rec.epsilon},
        {"k", rec.k},
        {"chi", rec.chi},
        {"beta_estimate", rec.beta_estimate},
    };
    if (rec.beta_oracle) j["beta_oracle"] = *rec.beta_oracle;
    if (rec.beta0_unreduced_estimate) j["beta0_unreduced_estimate"] = *rec.beta0_unreduced_estimate;
    if (rec.beta0_unreduced_oracle) j["beta0_unreduced_oracle"] = *rec.beta0_unreduced_oracle;
    j["report"] = to_json(rec.report);
    return j;
}

/// Line-delimited JSON records plus one trailing summary object.
inline void write_jsonl(const BettiCurve& curve, const RunConfig& config, std::ostream& out) {
    for (const auto& rec : curve.records) out << to_json(rec).dump() << "\n";
    nlohmann::json summary{
        {"summary", true},
        {"records", curve.records.size()},
        {"seed", config.seed},
        {"input", config.input_path},
        {"params", to_json(config.est)},
        {"failures", curve_has_failures(curve)},
    };
    out << summary.dump() << "\n";
}

/// Flat plot-ready companion: epsilon, k, chi, beta_est, beta_oracle.
inline void write_csv(const BettiCurve& curve, std::ostream& out) {
    out << "epsilon,k,chi,beta_est,beta_oracle\n";
    char buf[128];
    for (const auto& rec : curve.records) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,", rec.epsilon, rec.k, rec.chi,
                      rec.beta_estimate);
        out << buf;
        if (rec.beta_oracle) out << *rec.beta_oracle;
        out << "\n";
    }
}

/// Full CLI body: run, adjust k = 0 reporting, write <prefix>.jsonl and
/// <prefix>.csv. Exit codes: 0 success, 1 configuration error, 2 flagged
/// estimation failure.
inline int run_cli(const RunConfig& config, std::ostream& log) {
    BettiCurve curve;
    try {
        curve = report_unreduced(run(config));
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        std::ofstream jout(config.out_prefix + ".jsonl");
        if (!jout) throw std::runtime_error("cannot write " + config.out_prefix + ".jsonl");
        write_jsonl(curve, config, jout);
        std::ofstream cout_(config.out_prefix + ".csv");
        if (!cout_) throw std::runtime_error("cannot write " + config.out_prefix + ".csv");
        write_csv(curve, cout_);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
    double wall = 0.0;
    for (const auto& rec : curve.records) wall += rec.report.wall_seconds;
    log << "wrote " << curve.records.size() << " records to " << config.out_prefix
        << ".jsonl/.csv (estimator time " << wall << "s)\n";
    if (curve_has_failures(curve)) {
        for (const auto& rec : curve.records)
            for (const auto& f : rec.report.flags)
                if (is_failure_flag(f))
                    log << "failure at epsilon=" << rec.epsilon << " k=" << rec.k << ": " << f << "\n";
        return 2;
    }
    return 0;
}

}  // namespace bettiq
