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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <sstream>

#include "bettiq/bettiq.hpp"

using namespace bettiq;

namespace {

struct Criterion {
    int id;
    std::string label;
    bool (*fn)(std::string& detail);
};

Skeleton random_skeleton(int n, double edge_prob, RngStream& rng) {
    Skeleton g = Skeleton::empty(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_double() < edge_prob) g.set_edge(i, j);
    return g;
}

Skeleton octahedron() {
    Skeleton g = Skeleton::empty(6);
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            if (a / 2 != b / 2) g.set_edge(a, b);
    return g;
}

std::string g_cli_path;

// --- criterion 1: boundary algebra ------------------------------------

bool boundary_algebra(std::string& detail) {
    RngStream rng(0xACCE5501);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_below(6));  // 3..8
        Skeleton g = random_skeleton(n, 0.25 + 0.6 * rng.next_double(), rng);
        for (int k = 0; k <= n - 1; ++k) {
            if (k + 1 <= n - 1) {
                Eigen::MatrixXd lower = restricted_boundary_matrix(g, k);
                Eigen::MatrixXd upper = restricted_boundary_matrix(g, k + 1);
                if (lower.cols() > 0 && upper.cols() > 0 &&
                    (lower * upper).cwiseAbs().maxCoeff() != 0.0) {
                    detail = "boundary composition nonzero";
                    return false;
                }
            }
            // Hermiticity of the full-space composition
            Eigen::MatrixXcd D = restricted_laplacian(g, k).dense();
            if ((D - D.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
                detail = "laplacian not Hermitian to 1e-12";
                return false;
            }
            // PSD on the restricted support
            Eigen::MatrixXd L = restricted_laplacian_matrix(g, k);
            if (L.rows() > 0) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
                if (eig.eigenvalues().minCoeff() < -1e-10) {
                    detail = "laplacian eigenvalue below -1e-10";
                    return false;
                }
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " (skeleton, k) cells";
    return true;
}

// --- criterion 2: B^2 = n I --------------------------------------------

bool b_squared_identity(std::string& detail) {
    for (int n = 1; n <= 10; ++n) {
        auto terms = boundary_terms(n);
        for (std::uint32_t z = 0; z < (1u << n); ++z) {
            AmpVec v(std::size_t{1} << n, cdouble{0.0, 0.0});
            v[z] = 1.0;
            AmpVec bb = apply_B(apply_B(v, terms), terms);
            for (std::uint32_t w = 0; w < (1u << n); ++w) {
                const cdouble want = (w == z) ? cdouble(n, 0.0) : cdouble(0.0, 0.0);
                if (bb[w] != want) {
                    detail = "mismatch at n=" + std::to_string(n);
                    return false;
                }
            }
        }
    }
    detail = "exact on all basis states, n = 1..10";
    return true;
}

// --- criterion 3: circuit tallies ---------------------------------------

bool circuit_tallies(std::string& detail) {
    for (int n = 1; n <= 20; ++n) {
        Circuit c = build_trotter_circuit(n, 1e-3);
        GateCounts counts = c.counts();
        if (counts.cnot != 2 * (2 * n - 1) || counts.h != 2 * n || counts.rz != n ||
            counts.x != 0 || counts.ccnot != 0) {
            detail = "tally mismatch at n=" + std::to_string(n);
            return false;
        }
        if (c.depth() > 4 * n) {
            detail = "depth " + std::to_string(c.depth()) + " > 4n at n=" + std::to_string(n);
            return false;
        }
    }
    detail = "2(2n-1) CNOT / 2n H / n Rz, depth <= 4n, n = 1..20";
    return true;
}

// --- criterion 4: trotter order ------------------------------------------

bool trotter_order(std::string& detail) {
    std::ostringstream seen;
    for (int n = 2; n <= 4; ++n) {
        const double ts[3] = {1e-2, 5e-3, 2.5e-3};
        double err[3];
        for (int i = 0; i < 3; ++i) err[i] = trotter_error(n, ts[i]);
        for (int i = 0; i + 1 < 3; ++i) {
            const double ratio = err[i] / err[i + 1];
            if (!(ratio >= 3.2 && ratio <= 4.8)) {
                detail = "ratio " + std::to_string(ratio) + " outside [3.2, 4.8] at n=" +
                         std::to_string(n);
                return false;
            }
            seen << (i || n > 2 ? " " : "") << std::fixed << ratio;
        }
    }
    detail = "halving ratios " + seen.str();
    return true;
}

// --- criterion 5: Hodge equivalence --------------------------------------

bool hodge_equivalence(std::string& detail) {
    RngStream rng(0xACCE5505);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_below(6));
        Skeleton g = random_skeleton(n, 0.2 + 0.7 * rng.next_double(), rng);
        for (int k = 0; k <= n - 1; ++k) {
            if (exact_betti_laplacian(g, k).beta != exact_betti_ranks(g, k)) {
                detail = "disagreement at n=" + std::to_string(n) + " k=" + std::to_string(k);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " cells, exact integer agreement";
    return true;
}

// --- criterion 6: projection statistics -----------------------------------

bool projection_statistics(std::string& detail) {
    RngStream meta(0xACCE5506);
    for (int inst = 0; inst < 10; ++inst) {
        const int n = 4 + static_cast<int>(meta.next_below(5));  // 4..8
        const int k = 1 + static_cast<int>(meta.next_below(2));  // 1..2
        Skeleton g = random_skeleton(n, 0.35 + 0.5 * meta.next_double(), meta);
        const double zeta = complex_stats(g, k).zeta;
        ComplexMembership member(g);

        StateVector input = StateVector::zero_state(n);
        std::fill(input.amps.begin(), input.amps.end(), cdouble{0.0, 0.0});
        const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, k + 1)));
        for (std::uint32_t z = 0; z < (1u << n); ++z)
            if (popcount32(z) == k + 1) input.amps[z] = amp;

        AmpVec exact = input.amps;
        project_complex_exact(exact, member);
        const double mass = norm2(exact);

        int successes = 0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(inst * 100003 + t);
            auto res = project_complex_sampled(input, g, rng);
            if (!res.success) continue;
            ++successes;
            for (std::uint32_t z = 0; z < exact.size(); ++z) {
                if (std::abs(res.state.amps[z] - exact[z] / std::sqrt(mass)) > 1e-10) {
                    detail = "conditioned state differs from the exact projection";
                    return false;
                }
            }
        }
        const double freq = static_cast<double>(successes) / trials;
        const double sigma = std::sqrt(zeta * (1.0 - zeta) / trials);
        if (std::abs(freq - zeta) > 3.0 * sigma + 1e-12) {
            detail = "frequency " + std::to_string(freq) + " vs zeta " + std::to_string(zeta);
            return false;
        }
    }
    detail = "10 skeletons x 1000 trials within 3 sigma";
    return true;
}

// --- criterion 7: chebyshev step bound -------------------------------------

bool chebyshev_bound(std::string& detail) {
    std::ostringstream seen;
    for (double delta : {0.05, 0.1, 0.2}) {
        for (double eps : {0.05, 0.1}) {
            const int m = degree_bound(delta, eps);
            ChebSeries p = step_coefficients(m, delta - 1.0, 1.0);
            double worst = std::abs(p.eval(0.0));
            const int grid = 10000;
            for (int i = 0; i <= grid; ++i) {
                const double x = delta + (1.0 - delta) * i / grid;
                worst = std::max(worst, std::abs(1.0 - p.eval(x)));
            }
            if (worst > eps) {
                detail = "max error " + std::to_string(worst) + " > eps at (delta, eps) = (" +
                         std::to_string(delta) + ", " + std::to_string(eps) + ")";
                return false;
            }
            seen << " " << std::setprecision(2) << worst;
        }
    }
    detail = "grid maxima" + seen.str();
    return true;
}

// --- criterion 8: trace exactness -------------------------------------------

bool trace_exactness(std::string& detail) {
    RngStream rng(0xACCE5508);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(5));  // 2..6
        const std::uint32_t dim = 1u << n;
        Eigen::MatrixXcd A(dim, dim);
        for (std::uint32_t r = 0; r < dim; ++r)
            for (std::uint32_t c = 0; c < dim; ++c)
                A(r, c) = cdouble{rng.next_double() - 0.5, rng.next_double() - 0.5};
        A = (A + A.adjoint()).eval();

        long double avg = 0.0L;
        for (std::uint32_t b = 0; b < dim; ++b) {
            StateVector h = hadamard_column(n, b);
            cdouble quad{0.0, 0.0};
            for (std::uint32_t r = 0; r < dim; ++r) {
                cdouble row{0.0, 0.0};
                for (std::uint32_t c = 0; c < dim; ++c) row += A(r, c) * h.amps[c];
                quad += std::conj(h.amps[r]) * row;
            }
            avg += quad.real();
        }
        avg /= dim;
        const double want = A.trace().real() / dim;
        if (std::abs(static_cast<double>(avg) - want) > 1e-10) {
            detail = "column average misses trace/2^n at n=" + std::to_string(n);
            return false;
        }
    }
    detail = "50 random Hermitian matrices to 1e-10";
    return true;
}

// --- criterion 9: end-to-end BNE ---------------------------------------------

struct BneInstance {
    std::string name;
    Skeleton g;
    int k;
};

std::vector<BneInstance> bne_instances() {
    std::vector<BneInstance> out;
    out.push_back({"C4", Skeleton::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 1});
    out.push_back({"K3", Skeleton::complete(3), 1});
    out.push_back({"octahedron", octahedron(), 2});
    // 20 random VR clouds on <= 7 points. The generation recipe is fixed:
    // seeded clouds, epsilon at the 55-65% distance quantile, orders cycling
    // 0..2; instances whose S_k is empty or whose measured scaled gap is
    // below 0.05 (degree bound beyond 600, runtime guard) are skipped.
    RngStream rng(0xACCE5509);
    int made = 0;
    for (std::uint64_t salt = 0; made < 20 && salt < 500; ++salt) {
        const int n = 5 + static_cast<int>(rng.next_below(3));  // 5..7
        PointCloud cloud;
        for (int i = 0; i < n; ++i)
            cloud.points.push_back({rng.next_double(), rng.next_double(), rng.next_double()});
        DistanceMatrix dm = pairwise_distances(cloud, Metric::euclidean);
        std::vector<double> ds;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) ds.push_back(dm(i, j));
        std::sort(ds.begin(), ds.end());
        const double eps = ds[static_cast<std::size_t>((0.55 + 0.1 * rng.next_double()) * ds.size())];
        Skeleton g = build_skeleton(dm, eps);
        const int k = static_cast<int>(made % 3);
        if (complex_stats(g, k).count == 0) continue;
        ScaledLaplacian sc = scale_laplacian(restricted_laplacian(g, k));
        if (!sc.delta_defined || sc.delta < 0.05) continue;
        out.push_back({"cloud" + std::to_string(made), std::move(g), k});
        ++made;
    }
    return out;
}

bool bne_end_to_end(std::string& detail) {
    const auto instances = bne_instances();
    if (instances.size() != 23) {
        detail = "instance generation produced " + std::to_string(instances.size());
        return false;
    }
    for (const auto& inst : instances) {
        const auto oracle = exact_betti_laplacian(inst.g, inst.k);
        const double dim = static_cast<double>(simplices_of_order(inst.g, inst.k).size());
        const double target = oracle.beta / dim;
        for (ProjectorMode mode : {ProjectorMode::exact, ProjectorMode::sampled}) {
            EstimatorParams params;
            params.epsilon = 0.2;
            params.eta = 0.1;
            params.projector_mode = mode;
            const int runs = 200;
            std::vector<int> ok(runs, 0);
            bettiq::detail::parallel_for(runs, 2, [&](std::size_t r) {
                RngStream rng = RngStream(0xBE771E5ULL).substream(
                    (static_cast<std::uint64_t>(r) << 8) ^
                    std::hash<std::string>{}(inst.name) ^
                    (mode == ProjectorMode::sampled ? 0x1ULL << 63 : 0x0ULL));
                EstimationReport rep = estimate_betti(inst.g, inst.k, params, rng);
                ok[r] = std::abs(rep.chi - target) <= params.epsilon ? 1 : 0;
            });
            int hits = 0;
            for (int v : ok) hits += v;
            const double frac = static_cast<double>(hits) / runs;
            if (frac < 0.9) {
                detail = inst.name + (mode == ProjectorMode::sampled ? "/sampled" : "/exact") +
                         " hit rate " + std::to_string(frac);
                return false;
            }
        }
    }
    detail = "23 instances x 2 modes x 200 runs, all >= 90% within 0.2";
    return true;
}

// --- criterion 10: moment-conversion oracle -----------------------------------

bool conversion_oracle(std::string& detail) {
    RngStream rng(0xACCE55010);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 8 + static_cast<int>(rng.next_below(57));  // 8..64
        Eigen::MatrixXd R(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) R(r, c) = rng.next_double() - 0.5;
        Eigen::MatrixXd A = R * R.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
        A /= eig.eigenvalues().maxCoeff() * 1.01;  // spectrum in [0, 1]
        Eigen::MatrixXd Y = 2.0 * A - Eigen::MatrixXd::Identity(dim, dim);

        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = (rng.next_u64() & 1) ? 1.0 : -1.0;
        v /= std::sqrt(static_cast<double>(dim));

        const int jmax = 20;
        std::vector<double> mu(jmax + 1);
        Eigen::VectorXd p = v;
        for (int i = 0; i <= jmax; ++i) {
            mu[i] = v.dot(p);
            p = (Y * p).eval();
        }
        Eigen::VectorXd w0 = v, w1 = Y * v;
        std::vector<double> rec(jmax + 1);
        rec[0] = v.dot(w0);
        rec[1] = v.dot(w1);
        for (int j = 2; j <= jmax; ++j) {
            Eigen::VectorXd w2 = 2.0 * (Y * w1) - w0;
            w0 = w1;
            w1 = w2;
            rec[j] = v.dot(w1);
        }
        for (int j = 0; j <= jmax; ++j) {
            const double conv = cheb_from_power(mu, j);
            if (std::abs(conv - rec[j]) > 1e-8 * std::max(1.0, std::abs(rec[j]))) {
                detail = "relative error above 1e-8 at j=" + std::to_string(j);
                return false;
            }
        }
    }
    detail = "20 random PSD matrices, j <= 20, relative 1e-8";
    return true;
}

// --- criterion 11: CLI determinism ---------------------------------------------

bool cli_determinism(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "pass --cli <path> to run";
        return false;
    }
    const std::string input = "acceptance_cli_points.csv";
    {
        std::ofstream out(input);
        out << "0,0\n1,0\n1,1\n0,1\n0.5,0.5\n";
    }
    auto invoke = [&](const std::string& prefix) {
        const std::string cmd = g_cli_path + " --input " + input +
                                " --epsilon 0.8,1.2 --orders all --oracle --seed 20260810" +
                                " --mode sampled --out " + prefix + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const int rc1 = invoke("acceptance_cli_a");
    const int rc2 = invoke("acceptance_cli_b");
    bool pass = rc1 == 0 && rc2 == 0;
    if (!pass) detail = "CLI returned nonzero";
    if (pass) {
        const std::string ja = slurp("acceptance_cli_a.jsonl");
        pass = !ja.empty() && ja == slurp("acceptance_cli_b.jsonl") &&
               slurp("acceptance_cli_a.csv") == slurp("acceptance_cli_b.csv");
        if (!pass) detail = "outputs differ between identical seeded runs";
    }
    for (const char* p : {"acceptance_cli_a.jsonl", "acceptance_cli_b.jsonl",
                          "acceptance_cli_a.csv", "acceptance_cli_b.csv", input.c_str()})
        std::remove(p);
    if (pass) detail = "byte-identical .jsonl and .csv across reruns";
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const Criterion criteria[] = {
        {1, "boundary algebra: dd = 0 and Hermitian PSD laplacians", boundary_algebra},
        {2, "B^2 = nI on the full register, n = 1..10", b_squared_identity},
        {3, "trotter circuit tallies and depth", circuit_tallies},
        {4, "trotter error is second order in t", trotter_order},
        {5, "laplacian-kernel vs boundary-rank Betti equivalence", hodge_equivalence},
        {6, "sampled complex projection statistics", projection_statistics},
        {7, "chebyshev step approximation at the bound degree", chebyshev_bound},
        {8, "all-columns Hadamard averaging is the exact trace", trace_exactness},
        {9, "end-to-end Betti estimation at the default bounds", bne_end_to_end},
        {10, "power-to-Chebyshev conversion vs three-term recurrence", conversion_oracle},
        {11, "CLI determinism: equal seeds, equal bytes", cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%s; %.1fs)\n", pass ? "PASS" : "FAIL", c.id,
                    c.label.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
