// Copyright 2026-present the fdca project
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

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "fdca/cluster.hpp"
#include "fdca/metrics.hpp"

namespace fdca {

/// The four validity scores; metrics that are undefined for the partition
/// land in `errors` instead of failing the run.
struct ScoreSet {
    std::optional<double> silhouette, davies_bouldin, calinski_harabasz, dunn;
    std::map<std::string, std::string> errors;

    bool all_finite() const;
};

ScoreSet score_all(const Points& points, const std::vector<uint32_t>& labels);

struct RunReport {
    nlohmann::json config;
    std::vector<StageTrace> stages;
    Clustering clustering;
    ScoreSet scores;
    double total_ms = 0.0;
};

/// Timing fields (per-stage ms, total_ms) are the only run-to-run variable
/// parts; with include_timing=false the JSON is byte-stable for a fixed
/// seed.
nlohmann::json report_to_json(const RunReport& report, bool include_timing = true);

} // namespace fdca
