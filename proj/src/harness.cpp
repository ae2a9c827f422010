#include "dgg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "dgg/rank_correlation.hpp"
#include "dgg/rng.hpp"

namespace dgg {
namespace {

constexpr std::uint64_t kTagLoo = 0x4c4f4f;
constexpr std::uint64_t kTagFull = 0x46554c4c;
constexpr std::uint64_t kTagAlgorithm = 0x414c47;

constexpr MeasureKind kPracticalKinds[] = {MeasureKind::average, MeasureKind::worst_gap,
                                           MeasureKind::worst_only, MeasureKind::gap_only};

std::uint64_t algorithm_run_seed(std::uint64_t seed, std::size_t algorithm_index) {
    return hash_combine(mix64(seed), kTagAlgorithm + algorithm_index);
}

double measure_of(const MeasureRow& row, MeasureKind kind) {
    switch (kind) {
        case MeasureKind::average: return row.average;
        case MeasureKind::worst_gap: return row.worst_gap;
        case MeasureKind::worst_only: return row.worst_only;
        case MeasureKind::gap_only: return row.gap_only;
        case MeasureKind::ideal:
            if (!row.ideal) throw InvalidInput("measure_of: ideal value missing");
            return *row.ideal;
    }
    throw InvalidInput("measure_of: unknown measure kind");
}

// (algorithm, seed) -> row index, plus the sorted key sets
struct ReportIndex {
    std::vector<std::string> algorithms;
    std::vector<long> seeds;
    std::map<std::pair<std::string, long>, std::size_t> cells;

    explicit ReportIndex(const MeasureReport& report) {
        std::set<std::string> algs;
        std::set<long> seed_set;
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const MeasureRow& row = report.rows[i];
            if (!cells.emplace(std::make_pair(row.algorithm, row.seed), i).second) {
                throw InvalidInput("correlation_study: duplicate (algorithm, seed) row");
            }
            algs.insert(row.algorithm);
            seed_set.insert(row.seed);
        }
        algorithms.assign(algs.begin(), algs.end());
        seeds.assign(seed_set.begin(), seed_set.end());
        for (const auto& alg : algorithms) {
            for (long seed : seeds) {
                if (!cells.contains({alg, seed})) {
                    throw InvalidInput("correlation_study: missing row for algorithm '" + alg +
                                       "' seed " + std::to_string(seed));
                }
            }
        }
    }

    const MeasureRow& row(const MeasureReport& report, const std::string& alg, long seed) const {
        return report.rows[cells.at({alg, seed})];
    }
};

void require_ideal(const MeasureReport& report) {
    for (const MeasureRow& row : report.rows) {
        if (!row.ideal) {
            throw InvalidInput("ideal values required (no full-training records present)");
        }
    }
}

std::string best_by(const std::vector<std::string>& algorithms,
                    const std::vector<double>& values, MeasureKind kind) {
    std::vector<ScoredAlgorithm> scored;
    scored.reserve(algorithms.size());
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        scored.push_back({algorithms[i], {kind, values[i]}});
    }
    return select_best(scored);
}

}  // namespace

const char* to_string(RecordType type) { return type == RecordType::loo ? "loo" : "full"; }

ErrorMatrix::ErrorMatrix(std::vector<ErrorRecord> records) : records_(std::move(records)) {
    std::set<std::tuple<RecordType, std::string, long, std::string>> keys;
    for (auto& rec : records_) {
        if (!std::isfinite(rec.error) || rec.error < -kErrorRateTolerance ||
            rec.error > 1.0 + kErrorRateTolerance) {
            throw ValidationError("ErrorMatrix: error out of [0,1] for algorithm '" +
                                  rec.algorithm + "' env '" + rec.env_id + "'");
        }
        rec.error = std::clamp(rec.error, 0.0, 1.0);
        if (!keys.emplace(rec.type, rec.algorithm, rec.seed, rec.env_id).second) {
            throw DuplicateRecord("ErrorMatrix: duplicate record (" +
                                  std::string(to_string(rec.type)) + ", " + rec.algorithm + ", " +
                                  std::to_string(rec.seed) + ", " + rec.env_id + ")");
        }
    }
}

LooErrorVector run_loo(const EnvironmentSet& env_set, const AlgorithmOracle& oracle,
                       std::uint64_t seed) {
    const std::vector<Environment> given = env_set.given_envs();
    if (given.size() < 2) {
        throw InsufficientEnvironments("run_loo: needs at least 2 given environments");
    }

    std::vector<EnvError> entries;
    entries.reserve(given.size());
    for (std::size_t held_out = 0; held_out < given.size(); ++held_out) {
        std::vector<double> training;
        training.reserve(given.size() - 1);
        for (std::size_t i = 0; i < given.size(); ++i) {
            if (i != held_out) training.push_back(given[i].e);
        }
        RngStream rng = derive_stream(seed, kTagLoo, held_out);
        entries.push_back({given[held_out].id, oracle.error(training, given[held_out].e, rng)});
    }
    return LooErrorVector(std::move(entries));
}

FullErrorVector run_full(const EnvironmentSet& env_set, const AlgorithmOracle& oracle,
                         std::uint64_t seed) {
    if (env_set.all_envs().empty()) throw InvalidInput("run_full: empty environment set");

    const std::vector<double> training = env_set.given_es();
    std::vector<EnvError> entries;
    entries.reserve(env_set.all_envs().size());
    for (std::size_t i = 0; i < env_set.all_envs().size(); ++i) {
        const Environment& env = env_set.all_envs()[i];
        RngStream rng = derive_stream(seed, kTagFull, i);
        entries.push_back({env.id, oracle.error(training, env.e, rng)});
    }
    return FullErrorVector(std::move(entries));
}

MeasureReport compute_report(const ErrorMatrix& matrix) {
    struct Cell {
        std::vector<EnvError> loo;
        std::vector<EnvError> full;
    };
    std::map<std::pair<std::string, long>, Cell> cells;
    std::set<std::string> loo_envs, full_envs;

    for (const ErrorRecord& rec : matrix.records()) {
        Cell& cell = cells[{rec.algorithm, rec.seed}];
        if (rec.type == RecordType::loo) {
            cell.loo.push_back({rec.env_id, rec.error});
            loo_envs.insert(rec.env_id);
        } else {
            cell.full.push_back({rec.env_id, rec.error});
            full_envs.insert(rec.env_id);
        }
    }
    if (cells.empty()) throw InvalidInput("compute_report: empty error matrix");

    // Every (algorithm, seed) must cover the union of observed envs, once
    // each. Duplicates were already rejected by ErrorMatrix.
    std::vector<std::string> missing;
    for (const auto& [key, cell] : cells) {
        std::set<std::string> have;
        for (const auto& entry : cell.loo) have.insert(entry.env_id);
        for (const auto& env : loo_envs) {
            if (!have.contains(env)) {
                missing.push_back(key.first + ", seed " + std::to_string(key.second) +
                                  ", loo env " + env);
            }
        }
        if (!full_envs.empty()) {
            std::set<std::string> have_full;
            for (const auto& entry : cell.full) have_full.insert(entry.env_id);
            for (const auto& env : full_envs) {
                if (!have_full.contains(env)) {
                    missing.push_back(key.first + ", seed " + std::to_string(key.second) +
                                      ", full env " + env);
                }
            }
        }
    }
    if (!missing.empty()) {
        std::string message = "compute_report: incomplete matrix, missing: ";
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i > 0) message += "; ";
            message += missing[i];
        }
        throw IncompleteMatrix(message, std::move(missing));
    }

    MeasureReport report;
    report.rows.reserve(cells.size());
    for (auto& [key, cell] : cells) {
        LooErrorVector loo(std::move(cell.loo));
        MeasureRow row{key.first,
                       key.second,
                       average_measure(loo).value,
                       worst_gap_measure(loo).value,
                       worst_only_measure(loo).value,
                       gap_only_measure(loo).value,
                       std::nullopt};
        if (!full_envs.empty()) {
            row.ideal = ideal_measure(FullErrorVector(std::move(cell.full))).value;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

ErrorMatrix evaluate_oracles(
    const EnvironmentSet& env_set,
    const std::vector<std::pair<std::string, AlgorithmOracle>>& algorithms,
    const std::vector<long>& seeds) {
    if (algorithms.empty()) throw InvalidInput("evaluate_oracles: no algorithms");
    if (seeds.empty()) throw InvalidInput("evaluate_oracles: no seeds");

    std::vector<ErrorRecord> records;
    for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
        const auto& [name, oracle] = algorithms[ai];
        for (long seed : seeds) {
            const std::uint64_t run_seed =
                algorithm_run_seed(static_cast<std::uint64_t>(seed), ai);
            LooErrorVector loo = run_loo(env_set, oracle, run_seed);
            FullErrorVector full = run_full(env_set, oracle, run_seed);
            for (const EnvError& entry : loo.entries()) {
                records.push_back({RecordType::loo, name, seed, entry.env_id, entry.error});
            }
            for (const EnvError& entry : full.entries()) {
                records.push_back({RecordType::full, name, seed, entry.env_id, entry.error});
            }
        }
    }
    return ErrorMatrix(std::move(records));
}

StudyResult correlation_study(const MeasureReport& report, CorrelationMode mode) {
    require_ideal(report);
    const ReportIndex index(report);
    if (index.algorithms.size() < 2) {
        throw InvalidInput("correlation_study: needs at least 2 algorithms");
    }
    if (index.seeds.empty()) throw InvalidInput("correlation_study: needs at least 1 seed");

    StudyResult result;
    result.mode = mode;
    result.seeds = index.seeds;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (MeasureKind kind : kPracticalKinds) {
        CorrelationSummary summary{kind, 0, 0, nan, nan, nan, nan};
        std::vector<double> rhos, taus;

        if (mode == CorrelationMode::per_seed) {
            for (long seed : index.seeds) {
                std::vector<double> xs, ys;
                for (const auto& alg : index.algorithms) {
                    const MeasureRow& row = index.row(report, alg, seed);
                    xs.push_back(measure_of(row, kind));
                    ys.push_back(*row.ideal);
                }
                try {
                    PairedSample sample(std::move(xs), std::move(ys));
                    double rho = spearman_rho(sample);
                    double tau = kendall_tau(sample);
                    rhos.push_back(rho);
                    taus.push_back(tau);
                } catch (const UndefinedCorrelation&) {
                    ++summary.excluded_seeds;
                }
            }
        } else {
            std::vector<double> xs, ys;
            for (const auto& alg : index.algorithms) {
                for (long seed : index.seeds) {
                    const MeasureRow& row = index.row(report, alg, seed);
                    xs.push_back(measure_of(row, kind));
                    ys.push_back(*row.ideal);
                }
            }
            try {
                PairedSample sample(std::move(xs), std::move(ys));
                double rho = spearman_rho(sample);
                double tau = kendall_tau(sample);
                rhos.push_back(rho);
                taus.push_back(tau);
            } catch (const UndefinedCorrelation&) {
                summary.excluded_seeds = static_cast<int>(index.seeds.size());
            }
        }

        summary.n_seeds = static_cast<int>(rhos.size());
        if (!rhos.empty()) {
            SeedAggregate rho_agg = seed_aggregate(rhos);
            SeedAggregate tau_agg = seed_aggregate(taus);
            summary.rho_mean = rho_agg.mean;
            summary.rho_std = rho_agg.std_dev;
            summary.tau_mean = tau_agg.mean;
            summary.tau_std = tau_agg.std_dev;
        }
        result.correlations.push_back(summary);
    }

    // selection + degradation, per seed and on seed-averaged values
    std::map<std::string, double> mean_ideal, mean_measure;
    for (MeasureKind kind : kPracticalKinds) {
        SelectionSummary selection{kind, {}, "", "", 0.0};
        for (long seed : index.seeds) {
            std::vector<double> measure_vals, ideal_vals;
            for (const auto& alg : index.algorithms) {
                const MeasureRow& row = index.row(report, alg, seed);
                measure_vals.push_back(measure_of(row, kind));
                ideal_vals.push_back(*row.ideal);
            }
            std::string ideal_best = best_by(index.algorithms, ideal_vals, MeasureKind::ideal);
            std::string selected = best_by(index.algorithms, measure_vals, kind);
            double ideal_of_best = ideal_vals[static_cast<std::size_t>(
                std::find(index.algorithms.begin(), index.algorithms.end(), ideal_best) -
                index.algorithms.begin())];
            double ideal_of_selected = ideal_vals[static_cast<std::size_t>(
                std::find(index.algorithms.begin(), index.algorithms.end(), selected) -
                index.algorithms.begin())];
            selection.per_seed.push_back(
                {seed, ideal_best, selected, std::abs(ideal_of_best - ideal_of_selected)});
        }

        std::vector<double> mean_measure_vals, mean_ideal_vals;
        for (const auto& alg : index.algorithms) {
            double m = 0.0, ideal = 0.0;
            for (long seed : index.seeds) {
                const MeasureRow& row = index.row(report, alg, seed);
                m += measure_of(row, kind);
                ideal += *row.ideal;
            }
            mean_measure_vals.push_back(m / static_cast<double>(index.seeds.size()));
            mean_ideal_vals.push_back(ideal / static_cast<double>(index.seeds.size()));
        }
        selection.mean_ideal_best = best_by(index.algorithms, mean_ideal_vals, MeasureKind::ideal);
        selection.mean_selected = best_by(index.algorithms, mean_measure_vals, kind);
        double ideal_of_best = mean_ideal_vals[static_cast<std::size_t>(
            std::find(index.algorithms.begin(), index.algorithms.end(),
                      selection.mean_ideal_best) -
            index.algorithms.begin())];
        double ideal_of_selected = mean_ideal_vals[static_cast<std::size_t>(
            std::find(index.algorithms.begin(), index.algorithms.end(), selection.mean_selected) -
            index.algorithms.begin())];
        selection.mean_degradation = std::abs(ideal_of_best - ideal_of_selected);
        result.selections.push_back(std::move(selection));
    }
    return result;
}

std::vector<std::pair<long, double>> performance_degradation(const MeasureReport& report,
                                                             MeasureKind kind) {
    require_ideal(report);
    const ReportIndex index(report);

    std::vector<std::pair<long, double>> result;
    result.reserve(index.seeds.size());
    for (long seed : index.seeds) {
        std::vector<double> measure_vals, ideal_vals;
        for (const auto& alg : index.algorithms) {
            const MeasureRow& row = index.row(report, alg, seed);
            measure_vals.push_back(measure_of(row, kind));
            ideal_vals.push_back(*row.ideal);
        }
        std::string ideal_best = best_by(index.algorithms, ideal_vals, MeasureKind::ideal);
        std::string selected = best_by(index.algorithms, measure_vals, kind);
        auto pos_of = [&](const std::string& alg) {
            return static_cast<std::size_t>(
                std::find(index.algorithms.begin(), index.algorithms.end(), alg) -
                index.algorithms.begin());
        };
        result.emplace_back(seed,
                            std::abs(ideal_vals[pos_of(ideal_best)] - ideal_vals[pos_of(selected)]));
    }
    return result;
}

AsymptoticResult asymptotic_study(const AsymptoticConfig& config) {
    if (config.scales.empty()) throw InvalidInput("asymptotic_study: no scales");
    if (!std::is_sorted(config.scales.begin(), config.scales.end())) {
        throw InvalidInput("asymptotic_study: scales must be ascending");
    }
    if (config.oracles.empty()) throw InvalidInput("asymptotic_study: no oracles");
    if (config.seeds.empty()) throw InvalidInput("asymptotic_study: no seeds");

    const std::size_t n_scales = config.scales.size();
    const std::size_t n_oracles = config.oracles.size();
    const double n_seeds = static_cast<double>(config.seeds.size());

    // diff[kind][oracle][scale] = mean over seeds of |ideal - measure|
    std::map<MeasureKind, std::vector<std::vector<double>>> diff;
    for (MeasureKind kind : kPracticalKinds) {
        diff[kind].assign(n_oracles, std::vector<double>(n_scales, 0.0));
    }

    for (std::size_t si = 0; si < n_scales; ++si) {
        const EnvironmentSet env_set = build_given_srcmnist(
            ScaleRatio(config.scales[si], config.ratio_major, config.ratio_minor));
        for (std::size_t oi = 0; oi < n_oracles; ++oi) {
            for (std::uint64_t seed : config.seeds) {
                const std::uint64_t run_seed = algorithm_run_seed(seed, oi);
                LooErrorVector loo = run_loo(env_set, config.oracles[oi], run_seed);
                FullErrorVector full = run_full(env_set, config.oracles[oi], run_seed);
                const double ideal = ideal_measure(full).value;
                diff[MeasureKind::average][oi][si] +=
                    std::abs(ideal - average_measure(loo).value) / n_seeds;
                diff[MeasureKind::worst_gap][oi][si] +=
                    std::abs(ideal - worst_gap_measure(loo).value) / n_seeds;
                diff[MeasureKind::worst_only][oi][si] +=
                    std::abs(ideal - worst_only_measure(loo).value) / n_seeds;
                diff[MeasureKind::gap_only][oi][si] +=
                    std::abs(ideal - gap_only_measure(loo).value) / n_seeds;
            }
        }
    }

    AsymptoticResult result;
    result.scales = config.scales;
    for (MeasureKind kind : kPracticalKinds) {
        AsymptoticCurve curve{kind, std::vector<double>(n_scales, 0.0), 0};
        std::size_t included = 0;
        for (std::size_t oi = 0; oi < n_oracles; ++oi) {
            const double base = diff[kind][oi][0];
            if (base <= 0.0) {
                ++curve.excluded_oracles;
                result.warnings.push_back("oracle " + config.oracles[oi].name() +
                                          " excluded from measure " + to_string(kind) +
                                          ": zero base-scale value");
                continue;
            }
            ++included;
            for (std::size_t si = 0; si < n_scales; ++si) {
                curve.normalized[si] += diff[kind][oi][si] / base;
            }
        }
        if (included == 0) {
            std::fill(curve.normalized.begin(), curve.normalized.end(),
                      std::numeric_limits<double>::quiet_NaN());
        } else {
            for (double& v : curve.normalized) v /= static_cast<double>(included);
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

}  // namespace dgg
