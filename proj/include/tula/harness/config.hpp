#pragma once

// Experiment description and its INI-style config file. Comments take a whole
// line and start with ';' or '#'. Lists are comma separated.
//
//   [model]
//   # gaussian | ill_conditioned_gaussian | double_well | ginzburg_landau
//   name = double_well
//   # ignored by ginzburg_landau, whose dimension is side^3
//   dimension = 100
//   # gaussian only, optional; default 1, 2, ..., d
//   variances = 1, 2, 3
//   # ginzburg_landau only (defaults shown)
//   side = 10
//   tau = 2
//   alpha = 0.1
//   lambda = 0.5
//
//   [experiment]
//   algorithms = ULA, TULA, TULAc
//   step_sizes = 0.001, 0.01, 0.1
//   starts = origin, axis(100), random_norm(10)
//   n_steps = 100000
//   n_chains = 10
//   seed = 1
//   # optional, 0-based; default first and last coordinate
//   tracked = 0, 99
//   burn_in = 0
//   divergence_threshold = 100000
//   acceptance_floor = 0.05
//
//   [checks]
//   radii = 1, 10, 100, 1000
//   directions = 64
//
//   [output]
//   out_dir = results
//   # csv | json | both
//   format = both
//   persist_chains = false

#include <algorithm>
#include <cmath>
#include <optional>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tula/drift.hpp"
#include "tula/errors.hpp"
#include "tula/kernels.hpp"
#include "tula/potentials.hpp"

namespace tula::harness {

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, end);
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t depth = 0;
    std::string current;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')' && depth > 0) --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    if (!trim(current).empty() || !out.empty()) out.push_back(trim(current));
    return out;
}

inline double parse_double(const std::string& text, std::string_view what) {
    double v = 0.0;
    const auto t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ValidationError(std::string(what) + ": '" + t + "' is not a number");
    }
    return v;
}

inline std::uint64_t parse_uint(const std::string& text, std::string_view what) {
    std::uint64_t v = 0;
    const auto t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ValidationError(std::string(what) + ": '" + t + "' is not a non-negative integer");
    }
    return v;
}

inline bool parse_bool(const std::string& text, std::string_view what) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ValidationError(std::string(what) + ": '" + t + "' is not a boolean");
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += fmt(items[i]);
    }
    return out;
}

struct ModelSpec {
    std::string name = "double_well";
    std::size_t dimension = 100;
    std::vector<double> variances;  ///< gaussian only; empty means 1, 2, ..., d
    GinzburgLandauParams lattice;

    [[nodiscard]] TargetModel build() const {
        if (name == "gaussian") {
            if (!variances.empty()) return make_gaussian(variances);
            return make_linear_gaussian(dimension);
        }
        if (name == "ill_conditioned_gaussian") return make_ill_conditioned_gaussian(dimension);
        if (name == "double_well") return make_double_well(static_cast<int>(dimension));
        if (name == "ginzburg_landau") return make_ginzburg_landau(lattice);
        throw ValidationError("unknown model '" + name + "'");
    }

    [[nodiscard]] std::size_t resolved_dimension() const {
        if (name == "ginzburg_landau") {
            const auto p = static_cast<std::size_t>(lattice.side);
            return p * p * p;
        }
        if (name == "gaussian" && !variances.empty()) return variances.size();
        return dimension;
    }
};

enum class StartKind { origin, axis, random_norm };

/// origin: 0; axis(r): r e_1; random_norm(r): uniform on the sphere of radius r,
/// one fresh direction per replicate.
struct StartSpec {
    StartKind kind = StartKind::origin;
    double radius = 0.0;

    [[nodiscard]] std::string label() const {
        switch (kind) {
            case StartKind::origin: return "origin";
            case StartKind::axis: return "axis(" + format_double(radius) + ")";
            case StartKind::random_norm: return "random_norm(" + format_double(radius) + ")";
        }
        return "unknown";
    }

    static StartSpec parse(const std::string& text) {
        const auto t = trim(text);
        if (t == "origin") return {};
        auto with_radius = [&](std::string_view prefix, StartKind kind) -> std::optional<StartSpec> {
            if (t.rfind(prefix, 0) != 0 || t.back() != ')') return std::nullopt;
            const auto inner = t.substr(prefix.size(), t.size() - prefix.size() - 1);
            const double r = parse_double(inner, "start radius");
            if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("start radius must be >= 0: " + t);
            return StartSpec{kind, r};
        };
        if (auto s = with_radius("axis(", StartKind::axis)) return *s;
        if (auto s = with_radius("random_norm(", StartKind::random_norm)) return *s;
        throw ValidationError("unknown start '" + t + "' (expected origin, axis(r) or random_norm(r))");
    }

    friend bool operator==(const StartSpec&, const StartSpec&) = default;
};

enum class OutputFormat { csv, json, both };

inline std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        case OutputFormat::both: return "both";
    }
    return "both";
}

inline OutputFormat output_format_from_string(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "both") return OutputFormat::both;
    throw ValidationError("unknown output format '" + std::string(s) + "'");
}

struct ExperimentSpec {
    ModelSpec model;
    std::vector<Algorithm> algorithms;
    std::vector<double> step_sizes;
    std::vector<StartSpec> starts;
    std::uint64_t n_steps = 0;
    std::uint64_t n_chains = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> tracked;  ///< empty: first and last coordinate
    std::uint64_t burn_in = 0;
    double divergence_threshold = kDefaultDivergenceThreshold;
    double acceptance_floor = kDefaultAcceptanceFloor;
    std::vector<double> check_radii = default_radius_grid();
    int check_directions = kDefaultDirectionsPerRadius;
    std::string out_dir = "results";
    OutputFormat format = OutputFormat::both;
    bool persist_chains = false;

    [[nodiscard]] std::vector<std::size_t> tracked_coordinates() const {
        if (!tracked.empty()) return tracked;
        const auto d = model.resolved_dimension();
        if (d <= 1) return {0};
        return {0, d - 1};
    }

    /// Throws ValidationError describing the first problem found.
    void validate() const {
        if (algorithms.empty()) throw ValidationError("experiment.algorithms is empty");
        if (step_sizes.empty()) throw ValidationError("experiment.step_sizes is empty");
        for (double g : step_sizes) {
            if (!(g > 0.0) || !std::isfinite(g)) {
                throw ValidationError("step sizes must be positive, got " + format_double(g));
            }
        }
        if (starts.empty()) throw ValidationError("experiment.starts is empty");
        if (n_steps < 1) throw ValidationError("experiment.n_steps must be >= 1");
        if (n_chains < 1) throw ValidationError("experiment.n_chains must be >= 1");
        if (!(divergence_threshold > 0.0)) throw ValidationError("divergence_threshold must be positive");
        if (!(acceptance_floor >= 0.0 && acceptance_floor <= 1.0)) {
            throw ValidationError("acceptance_floor must lie in [0, 1]");
        }
        if (check_radii.empty() || check_directions < 1) {
            throw ValidationError("checks need a non-empty radius grid and directions >= 1");
        }
        for (std::size_t i = 0; i < check_radii.size(); ++i) {
            if (!(check_radii[i] > 0.0) || (i > 0 && check_radii[i] <= check_radii[i - 1])) {
                throw ValidationError("checks.radii must be positive and strictly increasing");
            }
        }
        if (model.name != "gaussian" && model.name != "ill_conditioned_gaussian" &&
            model.name != "double_well" && model.name != "ginzburg_landau") {
            throw ValidationError("unknown model '" + model.name + "'");
        }
        if (model.name != "ginzburg_landau" && model.variances.empty() && model.dimension < 1) {
            throw ValidationError("model.dimension must be >= 1");
        }
        for (auto a : algorithms) {
            if (a == Algorithm::TULA_partial && model.name != "double_well") {
                throw ValidationError("TULA_partial is only defined for the double_well model");
            }
        }
        const auto d = model.resolved_dimension();
        for (auto c : tracked) {
            if (c >= d) {
                throw ValidationError("tracked coordinate " + std::to_string(c) +
                                      " out of range for dimension " + std::to_string(d));
            }
        }
    }
};

namespace detail {

inline std::string require(const boost::property_tree::ptree& tree, const std::string& key) {
    auto v = tree.get_optional<std::string>(key);
    if (!v) throw ValidationError("missing config key '" + key + "'");
    return *v;
}

}  // namespace detail

inline ExperimentSpec parse_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(std::string("config syntax error: ") + e.what());
    }
    for (const auto& [section, _] : tree) {
        if (section != "model" && section != "experiment" && section != "checks" && section != "output") {
            throw ValidationError("unknown config section [" + section + "]");
        }
    }
    auto check_keys = [&](const std::string& section, std::initializer_list<std::string_view> keys) {
        auto child = tree.get_child_optional(section);
        if (!child) return;
        for (const auto& [key, _] : *child) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                throw ValidationError("unknown key '" + key + "' in [" + section + "]");
            }
        }
    };
    check_keys("model", {"name", "dimension", "variances", "side", "tau", "alpha", "lambda"});
    check_keys("experiment", {"algorithms", "step_sizes", "starts", "n_steps", "n_chains", "seed",
                              "tracked", "burn_in", "divergence_threshold", "acceptance_floor"});
    check_keys("checks", {"radii", "directions"});
    check_keys("output", {"out_dir", "format", "persist_chains"});

    ExperimentSpec spec;
    spec.model.name = trim(detail::require(tree, "model.name"));
    if (auto v = tree.get_optional<std::string>("model.dimension")) {
        spec.model.dimension = parse_uint(*v, "model.dimension");
    }
    if (auto v = tree.get_optional<std::string>("model.variances")) {
        for (const auto& item : split_list(*v)) spec.model.variances.push_back(parse_double(item, "model.variances"));
    }
    if (auto v = tree.get_optional<std::string>("model.side")) {
        spec.model.lattice.side = static_cast<int>(parse_uint(*v, "model.side"));
    }
    if (auto v = tree.get_optional<std::string>("model.tau")) spec.model.lattice.tau = parse_double(*v, "model.tau");
    if (auto v = tree.get_optional<std::string>("model.alpha")) spec.model.lattice.alpha = parse_double(*v, "model.alpha");
    if (auto v = tree.get_optional<std::string>("model.lambda")) spec.model.lattice.lambda = parse_double(*v, "model.lambda");

    for (const auto& item : split_list(detail::require(tree, "experiment.algorithms"))) {
        auto a = algorithm_from_string(item);
        if (!a) throw ValidationError("unknown algorithm '" + item + "'");
        spec.algorithms.push_back(*a);
    }
    for (const auto& item : split_list(detail::require(tree, "experiment.step_sizes"))) {
        spec.step_sizes.push_back(parse_double(item, "experiment.step_sizes"));
    }
    for (const auto& item : split_list(detail::require(tree, "experiment.starts"))) {
        spec.starts.push_back(StartSpec::parse(item));
    }
    spec.n_steps = parse_uint(detail::require(tree, "experiment.n_steps"), "experiment.n_steps");
    spec.n_chains = parse_uint(detail::require(tree, "experiment.n_chains"), "experiment.n_chains");
    spec.seed = parse_uint(detail::require(tree, "experiment.seed"), "experiment.seed");
    if (auto v = tree.get_optional<std::string>("experiment.tracked")) {
        for (const auto& item : split_list(*v)) spec.tracked.push_back(parse_uint(item, "experiment.tracked"));
    }
    if (auto v = tree.get_optional<std::string>("experiment.burn_in")) spec.burn_in = parse_uint(*v, "experiment.burn_in");
    if (auto v = tree.get_optional<std::string>("experiment.divergence_threshold")) {
        spec.divergence_threshold = parse_double(*v, "experiment.divergence_threshold");
    }
    if (auto v = tree.get_optional<std::string>("experiment.acceptance_floor")) {
        spec.acceptance_floor = parse_double(*v, "experiment.acceptance_floor");
    }
    if (auto v = tree.get_optional<std::string>("checks.radii")) {
        spec.check_radii.clear();
        for (const auto& item : split_list(*v)) spec.check_radii.push_back(parse_double(item, "checks.radii"));
    }
    if (auto v = tree.get_optional<std::string>("checks.directions")) {
        spec.check_directions = static_cast<int>(parse_uint(*v, "checks.directions"));
    }
    if (auto v = tree.get_optional<std::string>("output.out_dir")) spec.out_dir = trim(*v);
    if (auto v = tree.get_optional<std::string>("output.format")) spec.format = output_format_from_string(trim(*v));
    if (auto v = tree.get_optional<std::string>("output.persist_chains")) {
        spec.persist_chains = parse_bool(*v, "output.persist_chains");
    }
    spec.validate();
    return spec;
}

inline ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    return parse_config(in);
}

/// Canonical text form; parse_config(emit_config(s)) reproduces s.
inline std::string emit_config(const ExperimentSpec& spec) {
    std::ostringstream out;
    const auto& m = spec.model;
    out << "[model]\n";
    out << "name = " << m.name << "\n";
    if (m.name == "ginzburg_landau") {
        out << "side = " << m.lattice.side << "\n";
        out << "tau = " << format_double(m.lattice.tau) << "\n";
        out << "alpha = " << format_double(m.lattice.alpha) << "\n";
        out << "lambda = " << format_double(m.lattice.lambda) << "\n";
    } else {
        out << "dimension = " << m.dimension << "\n";
        if (!m.variances.empty()) out << "variances = " << join(m.variances, format_double) << "\n";
    }
    out << "\n[experiment]\n";
    out << "algorithms = " << join(spec.algorithms, [](Algorithm a) { return std::string(to_string(a)); }) << "\n";
    out << "step_sizes = " << join(spec.step_sizes, format_double) << "\n";
    out << "starts = " << join(spec.starts, [](const StartSpec& s) { return s.label(); }) << "\n";
    out << "n_steps = " << spec.n_steps << "\n";
    out << "n_chains = " << spec.n_chains << "\n";
    out << "seed = " << spec.seed << "\n";
    if (!spec.tracked.empty()) {
        out << "tracked = " << join(spec.tracked, [](std::size_t c) { return std::to_string(c); }) << "\n";
    }
    out << "burn_in = " << spec.burn_in << "\n";
    out << "divergence_threshold = " << format_double(spec.divergence_threshold) << "\n";
    out << "acceptance_floor = " << format_double(spec.acceptance_floor) << "\n";
    out << "\n[checks]\n";
    out << "radii = " << join(spec.check_radii, format_double) << "\n";
    out << "directions = " << spec.check_directions << "\n";
    out << "\n[output]\n";
    out << "out_dir = " << spec.out_dir << "\n";
    out << "format = " << to_string(spec.format) << "\n";
    out << "persist_chains = " << (spec.persist_chains ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace tula::harness
