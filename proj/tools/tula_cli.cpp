// tula: run Langevin sampling experiments from a config file.
//
//   tula run <config> [--seed N] [--workers N] [--out-dir DIR] [--format csv|json|both]
//   tula check <config> [--seed N] [--out-dir DIR]
//   tula oracle <model> <d>
//
// Exit status: 0 success, 2 usage or validation error, 1 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tula/harness/config.hpp"
#include "tula/harness/experiment.hpp"
#include "tula/harness/report.hpp"
#include "tula/oracles.hpp"
#include "tula/potentials.hpp"

namespace {

using namespace tula;
using namespace tula::harness;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
};

ExperimentSpec load_with_overrides(const std::string& path, const Overrides& o) {
    ExperimentSpec spec = load_config(path);
    if (o.seed) spec.seed = *o.seed;
    if (o.out_dir) spec.out_dir = *o.out_dir;
    if (o.format) spec.format = output_format_from_string(*o.format);
    spec.validate();
    return spec;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

int cmd_run(const std::string& config, const Overrides& o, unsigned workers) {
    const auto spec = load_with_overrides(config, o);
    const auto result = run_experiment(spec, workers);
    ensure_dir(spec.out_dir);
    const auto dir = std::filesystem::path(spec.out_dir);
    if (spec.format != OutputFormat::json) {
        const auto p = (dir / "summary.csv").string();
        emit_csv(result.rows, p);
        std::cout << "wrote " << p << "\n";
    }
    if (spec.format != OutputFormat::csv) {
        const auto p = (dir / "report.json").string();
        emit_json(spec, result, p);
        std::cout << "wrote " << p << "\n";
    }
    std::printf("%-13s %-8s %-18s %5s %5s %9s %9s %11s %11s\n", "algorithm", "gamma", "start", "coord",
                "order", "included", "diverged", "median_err", "mean_err");
    for (const auto& r : result.rows) {
        std::printf("%-13s %-8g %-18s %5zu %5d %9zu %9zu %11.4g %11.4g\n", r.algorithm.c_str(), r.gamma,
                    r.start.c_str(), r.coordinate, r.moment_order, r.summary.n_included, r.n_diverged,
                    r.summary.median, r.summary.mean);
    }
    return kExitOk;
}

int cmd_check(const std::string& config, const Overrides& o) {
    const auto spec = load_with_overrides(config, o);
    TargetModel model = [&] {
        try {
            return spec.model.build();
        } catch (const InvalidParameter& e) {
            throw ValidationError(e.what());
        }
    }();
    const auto checks = run_checks(spec, model);
    nlohmann::json out = nlohmann::json::array();
    std::printf("%-20s %-22s %-8s %-13s %12s %12s\n", "algorithms", "drift", "gamma", "verdict",
                "closeness", "max_g|G|");
    for (const auto& c : checks) {
        out.push_back(check_to_json(c));
        std::printf("%-20s %-22s %-8g %-13s %12.4g %12.4g\n", c.algorithms.c_str(), c.dissipativity.drift.c_str(),
                    c.dissipativity.gamma, std::string(to_string(c.dissipativity.verdict)).c_str(),
                    c.closeness.value_or(std::nan("")), c.dissipativity.max_scaled_drift_norm);
    }
    ensure_dir(spec.out_dir);
    const auto p = (std::filesystem::path(spec.out_dir) / "check.json").string();
    harness::detail::write_file(p, out.dump(2) + "\n");
    std::cout << "wrote " << p << "\n";
    return kExitOk;
}

int cmd_oracle(const std::string& model, std::uint64_t d) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (model == "double_well") {
        std::printf("%.10f\n", reference_moment_double_well(static_cast<int>(d)));
        return kExitOk;
    }
    if (model == "gaussian" || model == "ill_conditioned_gaussian") {
        const auto m = model == "gaussian" ? make_linear_gaussian(d) : make_ill_conditioned_gaussian(d);
        std::printf("coordinate order value\n");
        for (const auto& r : m.reference_moments()) std::printf("%zu %d %.17g\n", r.coordinate, r.order, r.value);
        return kExitOk;
    }
    if (model == "ginzburg_landau") {
        std::printf("first moments are 0 by symmetry; no second-moment reference is available\n");
        return kExitOk;
    }
    throw ValidationError("unknown model '" + model + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tamed and Metropolis-adjusted Langevin sampling experiments"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string config;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string format;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config, "Config file")->required();
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--workers", workers, "Number of worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out-dir", out_dir, "Override the output directory");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "both"}));

    auto* check = app.add_subcommand("check", "Evaluate the drift assumption checks only");
    check->add_option("config", config, "Config file")->required();
    check->add_option("--seed", seed, "Override the master seed");
    check->add_option("--out-dir", out_dir, "Override the output directory");
    check->add_option("--workers", workers, "Ignored; accepted for symmetry with run");
    check->add_option("--format", format, "Ignored; check always writes JSON")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    std::string model;
    std::uint64_t dimension = 0;
    auto* oracle = app.add_subcommand("oracle", "Print reference moments of a model");
    oracle->add_option("model", model, "double_well | gaussian | ill_conditioned_gaussian | ginzburg_landau")
        ->required();
    oracle->add_option("d", dimension, "Dimension")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        auto* sub = app.get_subcommands().front();
        if (sub == oracle) return cmd_oracle(model, dimension);
        if (sub->count("--seed")) overrides.seed = seed;
        if (sub->count("--out-dir")) overrides.out_dir = out_dir;
        if (sub->count("--format")) overrides.format = format;
        if (sub == run) return cmd_run(config, overrides, workers);
        return cmd_check(config, overrides);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
