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

#include "fdca/report.hpp"

#include <cmath>

namespace fdca {

using nlohmann::json;

bool ScoreSet::all_finite() const {
    return silhouette && std::isfinite(*silhouette) && davies_bouldin &&
           std::isfinite(*davies_bouldin) && calinski_harabasz && std::isfinite(*calinski_harabasz) &&
           dunn && std::isfinite(*dunn);
}

ScoreSet score_all(const Points& points, const std::vector<uint32_t>& labels) {
    ScoreSet s;
    auto run = [&](const char* name, double (*fn)(const Points&, const std::vector<uint32_t>&),
                   std::optional<double>& slot) {
        try {
            slot = fn(points, labels);
        } catch (const MetricError& e) {
            s.errors[name] = e.what();
        }
    };
    run("silhouette", &silhouette, s.silhouette);
    run("davies_bouldin", &davies_bouldin, s.davies_bouldin);
    run("calinski_harabasz", &calinski_harabasz, s.calinski_harabasz);
    run("dunn", &dunn, s.dunn);
    return s;
}

namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

json scores_to_json(const ScoreSet& s, bool rounded) {
    auto val = [rounded](const std::optional<double>& v) {
        return v ? json(rounded ? round4(*v) : *v) : json(nullptr);
    };
    json j = json::object();
    j["silhouette"] = val(s.silhouette);
    j["davies_bouldin"] = val(s.davies_bouldin);
    j["calinski_harabasz"] = val(s.calinski_harabasz);
    j["dunn"] = val(s.dunn);
    return j;
}

} // namespace

json report_to_json(const RunReport& report, bool include_timing) {
    json j;
    j["config"] = report.config;
    j["k"] = report.clustering.k;
    j["labels"] = report.clustering.labels;
    if (report.config.contains("metric")) j["metric"] = report.config["metric"];
    j["provenance"] = report.clustering.provenance;
    // full precision so labels re-scored against the dataset reproduce
    // these values exactly; the _4dp block is the display form
    j["scores"] = scores_to_json(report.scores, false);
    j["scores_4dp"] = scores_to_json(report.scores, true);
    if (!report.scores.errors.empty()) j["score_errors"] = report.scores.errors;

    json stages = json::array();
    std::vector<std::string> rules_used;
    for (const StageTrace& t : report.stages) {
        json st;
        st["stage"] = t.stage;
        if (!t.rule.empty()) {
            st["rule"] = t.rule;
            if (rules_used.empty() || rules_used.back() != t.rule) rules_used.push_back(t.rule);
        }
        st["clusters"] = t.clusters;
        if (include_timing) st["ms"] = t.ms;
        stages.push_back(std::move(st));
    }
    j["stages"] = stages;
    j["rules_used"] = rules_used;
    if (include_timing) j["total_ms"] = report.total_ms;
    return j;
}

} // namespace fdca
