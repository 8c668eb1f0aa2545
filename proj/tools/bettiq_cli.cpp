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

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bettiq/bettiq.hpp"

namespace {

std::vector<double> parse_epsilons(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start = 0.0, stop = 0.0;
        int steps = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(spec);
        if (!(ss >> start >> c1 >> stop >> c2 >> steps) || c1 != ':' || c2 != ':' || steps < 1)
            throw std::runtime_error("bad --epsilon range, expected start:stop:steps");
        for (int i = 0; i < steps; ++i)
            out.push_back(steps == 1 ? start : start + i * (stop - start) / (steps - 1));
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    if (out.empty()) throw std::runtime_error("bad --epsilon list");
    return out;
}

std::vector<int> parse_orders(const std::string& spec) {
    std::vector<int> out;
    if (spec == "all") return out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    if (out.empty()) throw std::runtime_error("bad --orders list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale Betti number estimation over Vietoris-Rips complexes\n"
                 "via the stochastic Chebyshev rank estimator on a statevector simulator"};
    app.get_formatter()->column_width(30);

    bettiq::RunConfig config;
    std::string format = "csv";
    std::string metric = "euclidean";
    std::string epsilon_spec;
    std::string orders_spec = "all";
    std::string mode = "exact";
    double delta = -1.0;

    app.add_option("--input", config.input_path, "point cloud (or distance matrix) file")->required();
    app.add_option("--format", format, "input format: csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--metric", metric, "euclidean|manhattan|precomputed")
        ->check(CLI::IsMember({"euclidean", "manhattan", "precomputed"}));
    app.add_option("--epsilon", epsilon_spec, "scales: comma list or start:stop:steps")->required();
    app.add_option("--orders", orders_spec, "orders k: comma list or 'all'");
    app.add_option("--delta", delta, "spectral threshold override (scaled units); labels the run ABNE");
    app.add_option("--eps-tol", config.est.epsilon, "additive estimation tolerance (default 0.2)");
    app.add_option("--eta", config.est.eta, "failure probability (default 0.1)");
    app.add_option("--degree", config.est.m, "Chebyshev degree override (default: analytic degree bound)");
    app.add_option("--probes", config.est.n_v, "probe count override (default: analytic probe bound)");
    app.add_option("--mode", mode, "exact|sampled|all-columns")
        ->check(CLI::IsMember({"exact", "sampled", "all-columns"}));
    app.add_flag("--oracle", config.oracle, "run the exact homology oracle per cell (n <= 12)");
    app.add_option("--seed", config.seed, "master seed (default 0, always recorded)");
    app.add_option("--out", config.out_prefix, "output prefix (writes .jsonl and .csv)")->required();

    try {
        app.parse(argc, argv);
        config.format = (format == "csv") ? bettiq::PointFormat::csv : bettiq::PointFormat::json;
        config.metric = (metric == "euclidean")  ? bettiq::Metric::euclidean
                        : (metric == "manhattan") ? bettiq::Metric::manhattan
                                                  : bettiq::Metric::precomputed;
        config.epsilons = parse_epsilons(epsilon_spec);
        config.orders = parse_orders(orders_spec);
        if (delta >= 0.0) config.est.delta = delta;
        if (mode == "sampled") {
            config.est.projector_mode = bettiq::ProjectorMode::sampled;
        } else if (mode == "all-columns") {
            config.est.trace_mode = bettiq::TraceMode::all_columns;
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    return bettiq::run_cli(config, std::cerr);
}
