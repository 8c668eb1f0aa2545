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

#include <json.hpp>

#include "bettiq/estimator.hpp"

namespace bettiq {

inline const char* to_string(MomentMode m) {
    return m == MomentMode::exact_operator ? "exact-operator" : "trotter-extraction";
}

inline const char* to_string(TraceMode t) {
    return t == TraceMode::sampled_probes ? "sampled-probes" : "all-columns";
}

inline const char* to_string(ProjectorMode p) {
    return p == ProjectorMode::exact ? "exact" : "sampled";
}

inline nlohmann::json to_json(const EstimatorParams& p) {
    nlohmann::json j{
        {"epsilon", p.epsilon}, {"eta", p.eta},           {"m", p.m},
        {"n_v", p.n_v},         {"c_nv", p.c_nv},         {"moment_mode", to_string(p.moment_mode)},
        {"trace_mode", to_string(p.trace_mode)},          {"projector_mode", to_string(p.projector_mode)},
    };
    if (p.delta) j["delta"] = *p.delta;
    return j;
}

/// Serializes one per-(k, epsilon) record: parameters, seeds, moments,
/// chi, flags. Wall time stays out so equal seeds give equal bytes.
inline nlohmann::json to_json(const EstimationReport& r) {
    nlohmann::json j{
        {"k", r.k},
        {"epsilon_scale", r.epsilon_scale},
        {"chi", r.chi},
        {"chi_raw", r.chi_raw},
        {"clamped", r.clamped},
        {"flags", r.flags},
        {"params", to_json(r.params)},
        {"scale", r.scale},
        {"delta", r.delta},
        {"delta_measured", r.delta_measured},
        {"lambda_max", r.lambda_max},
        {"simplex_count", r.simplex_count},
        {"dim_estimate", r.dim_estimate},
        {"conversion", r.conversion},
        {"seed", r.seed},
    };
    if (r.oracle_beta) j["oracle_beta"] = *r.oracle_beta;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.moments.rows) {
        nlohmann::json jr{
            {"probe", row.probe_index},
            {"mu0", row.mu0},
            {"cheb", row.cheb},
            {"projection_attempts", row.projection_attempts},
        };
        if (!row.power.empty()) jr["power"] = row.power;
        if (row.conversion_slack > 0.0) jr["conversion_slack"] = row.conversion_slack;
        rows.push_back(std::move(jr));
    }
    j["moments"] = std::move(rows);
    return j;
}

}  // namespace bettiq
