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

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdca/baseline.hpp"
#include "fdca/catalog.hpp"
#include "fdca/chaos.hpp"
#include "fdca/cluster.hpp"
#include "fdca/report.hpp"

using nlohmann::json;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? text.size() : comma + 1;
        if (tok.empty()) continue;
        size_t dash = tok.find('-');
        if (dash == std::string::npos) {
            out.push_back(std::stoi(tok));
        } else {
            const int lo = std::stoi(tok.substr(0, dash)), hi = std::stoi(tok.substr(dash + 1));
            for (int n = lo; n <= hi; ++n) out.push_back(n);
        }
    }
    if (out.empty()) throw fdca::PreconditionError("empty cell-length list");
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) throw fdca::PreconditionError("cannot open output file: " + out_path);
        out << j.dump(2) << '\n';
    }
}

double round8(double v) { return std::round(v * 1e8) / 1e8; }

json chaos_json(const fdca::ChaosProfile& c) {
    json j;
    j["lambda_p"] = round8(c.lambda_p.value());
    j["eta_p"] = round8(c.eta_p.value());
    j["lambda_c"] = round8(c.lambda_c.value());
    j["eta_c"] = round8(c.eta_c.value());
    j["delta_p"] = round8(c.delta_p.value());
    j["p"] = json::array({round8(c.p().first.value()), round8(c.p().second.value())});
    return j;
}

int cmd_analyze_rule(const std::string& rule_text, const std::string& n_list,
                     const std::string& out_path) {
    const fdca::FdcaRule rule = fdca::FdcaRule::parse(rule_text);
    json j;
    j["rule"] = rule.compact();
    j["affine"] = rule.affine();
    j["left_permutive"] = fdca::is_left_permutive(rule);
    j["right_permutive"] = fdca::is_right_permutive(rule);
    j["chaos"] = chaos_json(fdca::chaos_profile(rule));
    json per_n = json::object();
    for (int n : parse_n_list(n_list)) {
        json e;
        const bool reversible = rule.affine() ? fdca::is_reversible_affine(rule, n)
                                : n <= 8      ? fdca::is_reversible_bruteforce(rule, n)
                                              : false;
        if (!rule.affine() && n > 8) {
            e["reversible"] = nullptr; // undecided without enumeration
        } else {
            e["reversible"] = reversible;
        }
        if (reversible && n <= 8) {
            fdca::EnumerateOptions opts;
            opts.materialize = 0;
            const auto stats = fdca::enumerate_cycles(rule, n, opts).stats();
            e["cycles"] = stats.cycle_count;
            e["max_len"] = stats.max_cycle_length;
            e["mean_len"] = stats.mean_cycle_length;
        }
        per_n[std::to_string(n)] = e;
    }
    j["n"] = per_n;
    emit(j, out_path);
    return 0;
}

int cmd_scan(const std::string& family, const std::string& n_list, const std::string& out_path,
             int threads, bool budget_override, uint64_t limit) {
    const auto n_range = parse_n_list(n_list);
    fdca::ScanOptions opts;
    opts.threads = threads;
    opts.budget_override = budget_override;
    opts.full_family_limit = limit;
    fdca::RuleCatalog cat;
    if (family == "affine") {
        cat = fdca::scan_reversible(fdca::RuleFamily::affine, n_range, opts);
    } else if (family == "full") {
        cat = fdca::scan_reversible(fdca::RuleFamily::full, n_range, opts);
    } else {
        throw fdca::PreconditionError("unknown family: " + family + " (use affine or full)");
    }
    if (!out_path.empty()) fdca::write_catalog_jsonl(cat, out_path);
    json j;
    j["provenance"] = cat.provenance;
    j["entries"] = cat.entries.size();
    json fc = json::object();
    for (const auto& [n, c] : cat.family_counts) fc[std::to_string(n)] = c;
    j["family_counts"] = fc;
    std::cout << j.dump(2) << std::endl;
    return 0;
}

int cmd_filter(const std::string& catalog_path, const std::string& stage, int n,
               const std::string& cycle_exact, double quantile, const std::string& out_path,
               int threads) {
    fdca::RuleCatalog cat = fdca::read_catalog_jsonl(catalog_path);
    const size_t before = cat.entries.size();
    fdca::RuleCatalog out;
    if (stage == "first" || stage == "second" || stage == "third") {
        const auto st = stage == "first" ? fdca::ChaoticStage::first
                        : stage == "second" ? fdca::ChaoticStage::second
                                            : fdca::ChaoticStage::third;
        out = fdca::filter_chaotic(cat, st, {}, threads);
    } else if (stage == "cycle-exact") {
        const auto comma = cycle_exact.find(',');
        if (comma == std::string::npos) {
            throw fdca::PreconditionError("--cycle-exact needs \"cycles,max_len\"");
        }
        out = fdca::filter_cycle_structure(
            cat, n,
            fdca::CycleSelector::exact(std::stoull(cycle_exact.substr(0, comma)),
                                       std::stoull(cycle_exact.substr(comma + 1))),
            threads);
    } else if (stage == "cycle-quantile") {
        out = fdca::filter_cycle_structure(cat, n, fdca::CycleSelector::lowest_quantile(quantile),
                                           threads);
    } else {
        throw fdca::PreconditionError("unknown stage: " + stage);
    }
    if (!out_path.empty()) fdca::write_catalog_jsonl(out, out_path);
    json j;
    j["in"] = before;
    j["out"] = out.entries.size();
    j["provenance"] = out.provenance;
    std::cout << j.dump(2) << std::endl;
    return 0;
}

json config_echo(const fdca::PipelineConfig& cfg) {
    json j;
    j["split_size"] = cfg.split_size;
    j["rule"] = cfg.rule ? json(cfg.rule->compact()) : json("random");
    j["aux_rule"] = cfg.aux_rule ? json(cfg.aux_rule->compact()) : json("random");
    j["metric"] = fdca::to_string(cfg.metric);
    j["k"] = cfg.k;
    j["seed"] = cfg.seed;
    j["digit_cap"] = cfg.digit_cap;
    if (!cfg.columns.empty()) j["columns"] = cfg.columns;
    return j;
}

/// Pipeline options may come from a JSON config file:
/// {split_size, rule: "random"|digits, aux_rule, metric, k, seed, digit_cap,
/// columns}. Explicit command-line flags override file entries.
fdca::PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fdca::PreconditionError("cannot open config file: " + path);
    json j = json::parse(in);
    fdca::PipelineConfig cfg;
    if (j.contains("split_size")) cfg.split_size = j["split_size"].get<int>();
    if (j.contains("rule") && j["rule"] != "random") {
        cfg.rule = fdca::FdcaRule::parse(j["rule"].get<std::string>());
    }
    if (j.contains("aux_rule") && j["aux_rule"] != "random") {
        cfg.aux_rule = fdca::FdcaRule::parse(j["aux_rule"].get<std::string>());
    }
    if (j.contains("metric")) cfg.metric = fdca::merge_metric_from_string(j["metric"]);
    if (j.contains("k")) cfg.k = j["k"].get<uint32_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("digit_cap")) cfg.digit_cap = j["digit_cap"].get<size_t>();
    if (j.contains("columns")) cfg.columns = j["columns"].get<std::vector<std::string>>();
    return cfg;
}

int cmd_cluster(const std::string& data_path, const fdca::PipelineConfig& cfg,
                const std::string& out_path) {
    const double t0 = now_ms();
    const fdca::CsvTable table = fdca::CsvTable::read_file(data_path);
    fdca::PipelineResult res = fdca::cluster_dataset(table, cfg);

    fdca::RunReport report;
    report.config = config_echo(cfg);
    report.config["data"] = data_path;
    report.stages = res.trace;
    report.clustering = res.clustering;
    report.scores = fdca::score_all(res.raw_features, res.clustering.labels);
    report.total_ms = now_ms() - t0;
    emit(fdca::report_to_json(report), out_path);
    return 0;
}

/// Writes the encoded frame as CSV: the full decimal string plus one
/// column per vertical split.
int cmd_encode(const std::string& data_path, int split_size, const std::string& columns,
               size_t digit_cap, const std::string& out_path) {
    const fdca::CsvTable table = fdca::CsvTable::read_file(data_path);
    const auto cols = table.select_columns(parse_name_list(columns));
    const auto scaled = fdca::preprocess_scale(table, cols);
    std::vector<mpz_class> godels;
    godels.reserve(scaled.rows.size());
    for (const auto& row : scaled.rows) godels.push_back(fdca::godel_encode(row));
    const fdca::GodelFrame frame = fdca::build_frame(godels, split_size, true, digit_cap);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw fdca::PreconditionError("cannot open output file: " + out_path);
        out = &file;
    }
    *out << "godel";
    for (size_t i = 0; i < frame.digits.split_count(); ++i) *out << ",split" << i;
    *out << '\n';
    for (size_t r = 0; r < frame.digits.rows.size(); ++r) {
        *out << frame.godel[r].get_str();
        for (size_t i = 0; i < frame.digits.split_count(); ++i) {
            *out << ',' << frame.digits.split(r, i);
        }
        *out << '\n';
    }
    return 0;
}

int cmd_baseline(const std::string& data_path, const std::string& algo, uint32_t k, uint64_t seed,
                 const std::string& columns, const std::string& out_path) {
    const double t0 = now_ms();
    const fdca::CsvTable table = fdca::CsvTable::read_file(data_path);
    const auto cols = table.select_columns(parse_name_list(columns));

    fdca::RunReport report;
    report.config = {{"data", data_path}, {"algo", algo}, {"k", k}, {"seed", seed}};

    fdca::Points pts(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        for (size_t c : cols) pts[r].push_back(std::stod(table.rows[r][c]));
    }

    if (algo == "sort-godel") {
        const auto scaled = fdca::preprocess_scale(table, cols);
        std::vector<mpz_class> godels;
        godels.reserve(scaled.rows.size());
        for (const auto& row : scaled.rows) godels.push_back(fdca::godel_encode(row));
        report.clustering = fdca::sort_godel_clusters(godels, k);
        report.stages.push_back({"sort-godel", "", report.clustering.k, now_ms() - t0});
    } else if (algo == "kmeans") {
        const auto km = fdca::kmeans(pts, k, seed);
        report.clustering = km.clustering;
        report.stages.push_back({"kmeans(iters=" + std::to_string(km.iterations) + ")", "",
                                 report.clustering.k, now_ms() - t0});
    } else {
        throw fdca::PreconditionError("unknown baseline: " + algo + " (use sort-godel or kmeans)");
    }
    report.scores = fdca::score_all(pts, report.clustering.labels);
    report.total_ms = now_ms() - t0;
    emit(fdca::report_to_json(report), out_path);
    return 0;
}

int cmd_evaluate(const std::string& data_path, const std::string& labels_path,
                 const std::string& columns, const std::string& out_path) {
    const fdca::CsvTable table = fdca::CsvTable::read_file(data_path);
    const auto cols = table.select_columns(parse_name_list(columns));
    fdca::Points pts(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        for (size_t c : cols) pts[r].push_back(std::stod(table.rows[r][c]));
    }

    std::ifstream in(labels_path);
    if (!in) throw fdca::PreconditionError("cannot open labels file: " + labels_path);
    json lj = json::parse(in);
    std::vector<uint32_t> labels;
    if (lj.is_array()) {
        labels = lj.get<std::vector<uint32_t>>();
    } else if (lj.contains("labels")) {
        labels = lj["labels"].get<std::vector<uint32_t>>();
    } else {
        throw fdca::PreconditionError("labels file must be a JSON array or a report with a labels field");
    }
    if (labels.size() != pts.size()) {
        throw fdca::PreconditionError("labels length " + std::to_string(labels.size()) +
                                      " does not match " + std::to_string(pts.size()) + " rows");
    }
    const auto scores = fdca::score_all(pts, labels);
    json j;
    j["silhouette"] = scores.silhouette ? json(*scores.silhouette) : json(nullptr);
    j["davies_bouldin"] = scores.davies_bouldin ? json(*scores.davies_bouldin) : json(nullptr);
    j["calinski_harabasz"] = scores.calinski_harabasz ? json(*scores.calinski_harabasz) : json(nullptr);
    j["dunn"] = scores.dunn ? json(*scores.dunn) : json(nullptr);
    if (!scores.errors.empty()) j["score_errors"] = scores.errors;
    emit(j, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"clustering of numeric datasets by reversible decimal first-degree cellular automata"};
    app.require_subcommand(1);

    std::string rule_text, n_list = "4", out_path;
    auto* analyze = app.add_subcommand("analyze-rule", "reversibility, cycle structure and "
                                                       "information-flow profile of one rule");
    analyze->add_option("--rule", rule_text, "rule, e.g. 00001018 or <0,0,0,0,1,0,1,8>")->required();
    analyze->add_option("--n", n_list, "cell lengths, e.g. 4 or 6-10 or 4,6,8");
    analyze->add_option("--out", out_path, "write JSON here instead of stdout");

    std::string family = "affine", scan_n = "6-10", scan_out;
    int threads = 0;
    bool budget_override = false;
    uint64_t limit = 0;
    auto* scan = app.add_subcommand("scan", "scan a rule family for reversibility");
    scan->add_option("--family", family, "affine (default) or full");
    scan->add_option("--n", scan_n, "cell lengths the rules must all be reversible at");
    scan->add_option("--out", scan_out, "catalog JSONL path");
    scan->add_option("--threads", threads, "worker threads (0 = hardware)");
    scan->add_flag("--budget-override", budget_override, "allow the full 10^8-rule family");
    scan->add_option("--limit", limit, "scan only the first N rules of the full family");

    std::string catalog_path, stage = "second", cycle_exact;
    int filter_n = 6;
    double quantile = 0.25;
    std::string filter_out;
    auto* filter = app.add_subcommand("filter", "narrow a catalog by chaos or cycle structure");
    filter->add_option("--catalog", catalog_path, "catalog JSONL path")->required();
    filter->add_option("--stage", stage, "first | second | third | cycle-exact | cycle-quantile");
    filter->add_option("--n", filter_n, "cell length for cycle statistics");
    filter->add_option("--cycle-exact", cycle_exact, "\"cycles,max_len\" for stage cycle-exact");
    filter->add_option("--quantile", quantile, "fraction for stage cycle-quantile");
    filter->add_option("--out", filter_out, "filtered catalog JSONL path");
    filter->add_option("--threads", threads, "worker threads");

    std::string data_path, metric, rule_opt, aux_rule_opt, columns, config_path;
    fdca::PipelineConfig cfg;
    cfg.k = 0; // must come from --k or the config file
    uint32_t k_opt = 0;
    int split_opt = 0;
    uint64_t seed_opt = 0;
    int64_t digit_cap_opt = -1;
    bool seed_given = false;
    auto* cluster = app.add_subcommand("cluster", "run the full clustering pipeline");
    cluster->add_option("--data", data_path, "dataset CSV")->required();
    cluster->add_option("--config", config_path, "pipeline config JSON; flags override");
    cluster->add_option("--k", k_opt, "desired number of clusters");
    cluster->add_option("--metric", metric, "silhouette | average | participation");
    cluster->add_option("--split-size", split_opt, "vertical split width, 6..10");
    cluster->add_option("--seed", seed_opt, "seed for every randomized choice")
        ->each([&](const std::string&) { seed_given = true; });
    cluster->add_option("--rule", rule_opt, "fixed primary rule (default: seeded draw)");
    cluster->add_option("--aux-rule", aux_rule_opt, "fixed auxiliary rule (default: seeded draw)");
    cluster->add_option("--columns", columns, "comma-separated column subset");
    cluster->add_option("--digit-cap", digit_cap_opt, "max encoding digits (0 = unlimited)");
    cluster->add_option("--out", out_path, "write the report here instead of stdout");

    std::string enc_columns;
    int enc_split = 6;
    uint64_t enc_cap = 4096;
    auto* encode = app.add_subcommand("encode", "emit the encoded frame as CSV of split strings");
    encode->add_option("--data", data_path, "dataset CSV")->required();
    encode->add_option("--split-size", enc_split, "vertical split width, 6..10");
    encode->add_option("--columns", enc_columns, "comma-separated column subset");
    encode->add_option("--digit-cap", enc_cap, "max encoding digits (0 = unlimited)");
    encode->add_option("--out", out_path, "write CSV here instead of stdout");

    std::string algo = "sort-godel";
    uint32_t bk = 2;
    uint64_t bseed = 0;
    auto* baseline = app.add_subcommand("baseline", "run an internal baseline for comparison");
    baseline->add_option("--data", data_path, "dataset CSV")->required();
    baseline->add_option("--algo", algo, "sort-godel | kmeans");
    baseline->add_option("--k", bk, "clusters")->required();
    baseline->add_option("--seed", bseed, "seed");
    baseline->add_option("--columns", columns, "comma-separated column subset");
    baseline->add_option("--out", out_path, "write the report here instead of stdout");

    std::string labels_path;
    auto* evaluate = app.add_subcommand("evaluate", "score an existing labeling of a dataset");
    evaluate->add_option("--data", data_path, "dataset CSV")->required();
    evaluate->add_option("--labels", labels_path, "JSON report or JSON label array")->required();
    evaluate->add_option("--columns", columns, "comma-separated column subset");
    evaluate->add_option("--out", out_path, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return cmd_analyze_rule(rule_text, n_list, out_path);
        if (*scan) return cmd_scan(family, scan_n, scan_out, threads, budget_override, limit);
        if (*filter) return cmd_filter(catalog_path, stage, filter_n, cycle_exact, quantile,
                                       filter_out, threads);
        if (*cluster) {
            if (!config_path.empty()) cfg = load_config_file(config_path);
            if (!metric.empty()) cfg.metric = fdca::merge_metric_from_string(metric);
            if (k_opt > 0) cfg.k = k_opt;
            if (split_opt > 0) cfg.split_size = split_opt;
            if (seed_given) cfg.seed = seed_opt;
            if (digit_cap_opt >= 0) cfg.digit_cap = static_cast<size_t>(digit_cap_opt);
            if (!rule_opt.empty()) cfg.rule = fdca::FdcaRule::parse(rule_opt);
            if (!aux_rule_opt.empty()) cfg.aux_rule = fdca::FdcaRule::parse(aux_rule_opt);
            if (!columns.empty()) cfg.columns = parse_name_list(columns);
            if (cfg.k == 0) throw fdca::PreconditionError("a target k is required (--k or config)");
            return cmd_cluster(data_path, cfg, out_path);
        }
        if (*encode) {
            return cmd_encode(data_path, enc_split, enc_columns, enc_cap, out_path);
        }
        if (*baseline) return cmd_baseline(data_path, algo, bk, bseed, columns, out_path);
        if (*evaluate) return cmd_evaluate(data_path, labels_path, columns, out_path);
    } catch (const fdca::BudgetError& e) {
        std::cerr << "budget refusal: " << e.what() << std::endl;
        return 3;
    } catch (const fdca::PreconditionError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
