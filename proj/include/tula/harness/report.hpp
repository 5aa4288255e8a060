#pragma once

// CSV summary table and JSON report.
//
// CSV: one header line, then one line per SummaryRow, columns
//   algorithm,gamma,start,coordinate,moment_order,reference,n_included,
//   n_excluded,n_diverged,min,q1,median,q3,max,mean
// Numbers use the shortest round-trip decimal form with '.' as separator.
// Fields with no value (no reference, or every replicate excluded) are empty.
//
// JSON: {"spec", "rows", "diagnostics", "oracles", "version"}; absent values are null.

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tula/harness/config.hpp"
#include "tula/harness/experiment.hpp"

namespace tula::harness {

inline constexpr const char* kReportVersion = "1.0";

inline constexpr const char* kCsvHeader =
    "algorithm,gamma,start,coordinate,moment_order,reference,n_included,n_excluded,n_diverged,"
    "min,q1,median,q3,max,mean";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string optional_field(double v) { return std::isnan(v) ? std::string() : format_double(v); }

inline nlohmann::json optional_json(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

inline double from_optional_json(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace detail

inline std::string format_csv(const std::vector<SummaryRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        const auto& s = r.summary;
        out += r.algorithm + ',' + format_double(r.gamma) + ',' + r.start + ',' + std::to_string(r.coordinate) +
               ',' + std::to_string(r.moment_order) + ',' +
               (r.reference ? format_double(*r.reference) : std::string()) + ',' + std::to_string(s.n_included) +
               ',' + std::to_string(s.n_excluded) + ',' + std::to_string(r.n_diverged) + ',' +
               detail::optional_field(s.min) + ',' + detail::optional_field(s.q1) + ',' +
               detail::optional_field(s.median) + ',' + detail::optional_field(s.q3) + ',' +
               detail::optional_field(s.max) + ',' + detail::optional_field(s.mean) + '\n';
    }
    return out;
}

inline void emit_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    detail::write_file(path, format_csv(rows));
}

inline nlohmann::json row_to_json(const SummaryRow& r) {
    const auto& s = r.summary;
    return {{"algorithm", r.algorithm},
            {"gamma", r.gamma},
            {"start", r.start},
            {"coordinate", r.coordinate},
            {"moment_order", r.moment_order},
            {"reference", r.reference ? nlohmann::json(*r.reference) : nlohmann::json(nullptr)},
            {"n_included", s.n_included},
            {"n_excluded", s.n_excluded},
            {"n_diverged", r.n_diverged},
            {"min", detail::optional_json(s.min)},
            {"q1", detail::optional_json(s.q1)},
            {"median", detail::optional_json(s.median)},
            {"q3", detail::optional_json(s.q3)},
            {"max", detail::optional_json(s.max)},
            {"mean", detail::optional_json(s.mean)}};
}

inline SummaryRow row_from_json(const nlohmann::json& j) {
    SummaryRow r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.gamma = j.at("gamma").get<double>();
    r.start = j.at("start").get<std::string>();
    r.coordinate = j.at("coordinate").get<std::size_t>();
    r.moment_order = j.at("moment_order").get<int>();
    if (!j.at("reference").is_null()) r.reference = j.at("reference").get<double>();
    r.summary.n_included = j.at("n_included").get<std::size_t>();
    r.summary.n_excluded = j.at("n_excluded").get<std::size_t>();
    r.n_diverged = j.at("n_diverged").get<std::size_t>();
    r.summary.min = detail::from_optional_json(j.at("min"));
    r.summary.q1 = detail::from_optional_json(j.at("q1"));
    r.summary.median = detail::from_optional_json(j.at("median"));
    r.summary.q3 = detail::from_optional_json(j.at("q3"));
    r.summary.max = detail::from_optional_json(j.at("max"));
    r.summary.mean = detail::from_optional_json(j.at("mean"));
    return r;
}

inline nlohmann::json check_to_json(const CheckRecord& c) {
    const auto& d = c.dissipativity;
    return {{"algorithms", c.algorithms},
            {"drift", d.drift},
            {"gamma", d.gamma},
            {"quantity", d.quantity},
            {"radii", d.radii},
            {"minimum", d.minimum},
            {"max_scaled_drift_norm", d.max_scaled_drift_norm},
            {"verdict", std::string(to_string(d.verdict))},
            {"closeness_ratio", c.closeness ? nlohmann::json(*c.closeness) : nlohmann::json(nullptr)}};
}

inline nlohmann::json chain_to_json(const ChainRecord& c, const ExperimentSpec& spec) {
    nlohmann::json tracked = nlohmann::json::array();
    for (const auto& t : c.result.tracked) {
        tracked.push_back({{"coordinate", t.coordinate},
                           {"count", t.moments.count()},
                           {"mean", t.moments.mean()},
                           {"mean_of_squares", t.moments.mean_of_squares()},
                           {"first_standard_error", detail::optional_json(t.first_standard_error)},
                           {"second_standard_error", detail::optional_json(t.second_standard_error)}});
    }
    return {{"algorithm", std::string(to_string(c.algorithm))},
            {"gamma", spec.step_sizes[c.gamma_index]},
            {"start", spec.starts[c.start_index].label()},
            {"replicate", c.replicate},
            {"seed", c.result.seed},
            {"diverged", c.result.diverged},
            {"excluded", c.result.excluded},
            {"acceptance_rate", detail::optional_json(c.result.acceptance_rate)},
            {"steps_completed", c.result.steps_completed},
            {"final_norm", c.result.final_norm},
            {"duration_seconds", c.result.duration_seconds},
            {"tracked", tracked}};
}

inline nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    std::vector<std::string> algorithms;
    for (auto a : spec.algorithms) algorithms.emplace_back(to_string(a));
    std::vector<std::string> starts;
    for (const auto& s : spec.starts) starts.push_back(s.label());
    return {{"model", spec.model.name},
            {"dimension", spec.model.resolved_dimension()},
            {"algorithms", algorithms},
            {"step_sizes", spec.step_sizes},
            {"starts", starts},
            {"n_steps", spec.n_steps},
            {"n_chains", spec.n_chains},
            {"seed", spec.seed},
            {"tracked", spec.tracked_coordinates()},
            {"config", emit_config(spec)}};
}

inline nlohmann::json make_report(const ExperimentSpec& spec, const ExperimentResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) rows.push_back(row_to_json(r));
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.checks) checks.push_back(check_to_json(c));
    nlohmann::json oracles = nlohmann::json::array();
    for (const auto& o : result.oracles) {
        oracles.push_back({{"coordinate", o.coordinate}, {"order", o.order}, {"value", o.value},
                           {"tolerance", o.tolerance}});
    }
    nlohmann::json diagnostics = {{"assumption_checks", checks}, {"chains_executed", result.chains_executed}};
    if (spec.persist_chains) {
        nlohmann::json chains = nlohmann::json::array();
        for (const auto& c : result.chains) chains.push_back(chain_to_json(c, spec));
        diagnostics["chains"] = chains;
    }
    return {{"spec", spec_to_json(spec)},
            {"rows", rows},
            {"diagnostics", diagnostics},
            {"oracles", oracles},
            {"version", kReportVersion}};
}

inline void emit_json(const ExperimentSpec& spec, const ExperimentResult& result, const std::string& path) {
    detail::write_file(path, make_report(spec, result).dump(2) + "\n");
}

inline std::vector<SummaryRow> read_json_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
    std::vector<SummaryRow> rows;
    for (const auto& r : j.at("rows")) rows.push_back(row_from_json(r));
    return rows;
}

}  // namespace tula::harness
