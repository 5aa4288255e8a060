#pragma once

// Cross product of algorithms x step sizes x starts x replicates, executed on a
// pool of workers and reduced into one summary row per
// (cell, tracked coordinate, moment order).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tula/drift.hpp"
#include "tula/harness/config.hpp"
#include "tula/kernels.hpp"
#include "tula/stats.hpp"

namespace tula::harness {

/// Seed from a master seed and a list of indices, independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint32_t> indices) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master & 0xffffffffu),
                                     static_cast<std::uint32_t>(master >> 32)};
    words.insert(words.end(), indices.begin(), indices.end());
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline constexpr std::uint32_t kChainStream = 0;
inline constexpr std::uint32_t kStartStream = 1;
inline constexpr std::uint32_t kCheckStream = 2;

inline std::uint64_t chain_seed(std::uint64_t master, Algorithm a, std::size_t gamma_index,
                                std::size_t start_index, std::size_t replicate) {
    return derive_seed(master, {kChainStream, static_cast<std::uint32_t>(a),
                                static_cast<std::uint32_t>(gamma_index),
                                static_cast<std::uint32_t>(start_index),
                                static_cast<std::uint32_t>(replicate)});
}

/// Starting point of a replicate; shared by every algorithm and step size.
inline Vector start_point(const StartSpec& start, std::size_t dimension, std::uint64_t master,
                          std::size_t start_index, std::size_t replicate) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(dimension));
    switch (start.kind) {
        case StartKind::origin: break;
        case StartKind::axis: x[0] = start.radius; break;
        case StartKind::random_norm: {
            std::mt19937_64 rng(derive_seed(master, {kStartStream, static_cast<std::uint32_t>(start_index),
                                                     static_cast<std::uint32_t>(replicate)}));
            x = start.radius * random_direction(dimension, rng);
            break;
        }
    }
    return x;
}

struct SummaryRow {
    std::string algorithm;
    double gamma = 0.0;
    std::string start;
    std::size_t coordinate = 0;
    int moment_order = 1;
    std::optional<double> reference;  ///< absent: summary of raw estimates
    BoxplotSummary summary;
    std::size_t n_diverged = 0;
};

struct ChainRecord {
    Algorithm algorithm = Algorithm::ULA;
    std::size_t gamma_index = 0;
    std::size_t start_index = 0;
    std::size_t replicate = 0;
    ChainResult result;
};

struct CheckRecord {
    std::string algorithms;  ///< algorithms sharing this drift, e.g. "TULA/TMALA"
    AssumptionReport dissipativity;
    std::optional<double> closeness;  ///< absent when every sampled point is a critical point of U
};

struct ExperimentResult {
    std::vector<SummaryRow> rows;
    std::vector<ChainRecord> chains;
    std::vector<CheckRecord> checks;
    std::vector<ReferenceMoment> oracles;  ///< reference moments of the tracked coordinates
    std::size_t chains_executed = 0;
};

/// Assumption reports for every distinct drift used by the experiment's algorithms,
/// at every step size. RWM ignores the drift and contributes nothing.
inline std::vector<CheckRecord> run_checks(const ExperimentSpec& spec, const TargetModel& model) {
    std::vector<CheckRecord> out;
    std::vector<DriftKind> kinds;
    std::vector<std::string> names;
    for (auto a : spec.algorithms) {
        if (adjustment_of(a) == Adjustment::metropolis_rw) continue;
        const auto k = drift_kind_of(a);
        auto it = std::find(kinds.begin(), kinds.end(), k);
        if (it == kinds.end()) {
            kinds.push_back(k);
            names.emplace_back(to_string(a));
        } else {
            names[static_cast<std::size_t>(it - kinds.begin())] += "/" + std::string(to_string(a));
        }
    }
    for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
        const DriftSpec drift(kinds[ki], model);
        for (std::size_t gi = 0; gi < spec.step_sizes.size(); ++gi) {
            const double gamma = spec.step_sizes[gi];
            const auto seed = derive_seed(spec.seed, {kCheckStream, static_cast<std::uint32_t>(kinds[ki]),
                                                      static_cast<std::uint32_t>(gi)});
            CheckRecord rec;
            rec.algorithms = names[ki];
            rec.dissipativity = check_dissipativity(drift, gamma, spec.check_radii, spec.check_directions, seed);
            std::mt19937_64 rng(seed);
            std::vector<Vector> points;
            for (double r : spec.check_radii) {
                for (int n = 0; n < spec.check_directions; ++n) {
                    points.push_back(r * random_direction(model.dimension(), rng));
                }
            }
            try {
                rec.closeness = check_closeness(drift, gamma, points);
            } catch (const InvalidArgument&) {
                rec.closeness.reset();
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

/// Runs every chain of the experiment. Output is identical for any worker count.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers = 1) {
    spec.validate();
    std::optional<TargetModel> built;
    try {
        built.emplace(spec.model.build());
    } catch (const InvalidParameter& e) {
        throw ValidationError(std::string("invalid model parameters: ") + e.what());
    }
    const TargetModel& model = *built;
    const auto tracked = spec.tracked_coordinates();

    struct Task {
        std::size_t algorithm_index;
        std::size_t gamma_index;
        std::size_t start_index;
        std::size_t replicate;
    };
    std::vector<Task> tasks;
    for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai)
        for (std::size_t gi = 0; gi < spec.step_sizes.size(); ++gi)
            for (std::size_t si = 0; si < spec.starts.size(); ++si)
                for (std::size_t r = 0; r < spec.n_chains; ++r) tasks.push_back({ai, gi, si, r});

    std::vector<ChainRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    RunOptions options;
    options.burn_in = spec.burn_in;

    auto worker = [&] {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto& t = tasks[i];
            try {
                const auto algorithm = spec.algorithms[t.algorithm_index];
                KernelConfig config = make_kernel_config(algorithm, model, spec.step_sizes[t.gamma_index]);
                config.divergence_threshold = spec.divergence_threshold;
                config.acceptance_floor = spec.acceptance_floor;
                const Vector x0 = start_point(spec.starts[t.start_index], model.dimension(), spec.seed,
                                              t.start_index, t.replicate);
                const auto seed = chain_seed(spec.seed, algorithm, t.gamma_index, t.start_index, t.replicate);
                records[i] = {algorithm, t.gamma_index, t.start_index, t.replicate,
                              run_chain(model, config, spec.n_steps, x0, seed, tracked, options)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks.size());
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const unsigned n = std::max(1u, workers);
        for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult result;
    result.chains_executed = records.size();
    std::size_t offset = 0;
    for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
        for (std::size_t gi = 0; gi < spec.step_sizes.size(); ++gi) {
            for (std::size_t si = 0; si < spec.starts.size(); ++si) {
                const auto first = records.begin() + static_cast<std::ptrdiff_t>(offset);
                const auto last = first + static_cast<std::ptrdiff_t>(spec.n_chains);
                offset += spec.n_chains;
                std::size_t excluded = 0;
                std::size_t diverged = 0;
                for (auto it = first; it != last; ++it) {
                    excluded += it->result.excluded ? 1 : 0;
                    diverged += it->result.diverged ? 1 : 0;
                }
                for (std::size_t ti = 0; ti < tracked.size(); ++ti) {
                    for (int order : {1, 2}) {
                        std::vector<double> estimates;
                        for (auto it = first; it != last; ++it) {
                            if (!it->result.excluded) estimates.push_back(it->result.tracked[ti].moments.moment(order));
                        }
                        SummaryRow row;
                        row.algorithm = std::string(to_string(spec.algorithms[ai]));
                        row.gamma = spec.step_sizes[gi];
                        row.start = spec.starts[si].label();
                        row.coordinate = tracked[ti];
                        row.moment_order = order;
                        if (auto ref = model.reference_moment(tracked[ti], order)) row.reference = ref->value;
                        row.summary = error_summary(estimates, row.reference.value_or(0.0), excluded);
                        row.n_diverged = diverged;
                        result.rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    for (auto c : tracked) {
        for (int order : {1, 2}) {
            if (auto ref = model.reference_moment(c, order)) result.oracles.push_back(*ref);
        }
    }
    result.checks = run_checks(spec, model);
    result.chains = std::move(records);
    return result;
}

}  // namespace tula::harness
