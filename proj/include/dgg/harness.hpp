#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgg/errors.hpp"
#include "dgg/measures.hpp"
#include "dgg/synthetic_worlds.hpp"

namespace dgg {

enum class RecordType { loo, full };

const char* to_string(RecordType type);

struct ErrorRecord {
    RecordType type;
    std::string algorithm;
    long seed;
    std::string env_id;
    double error;
};

// Raw (algorithm, seed, env, error) observations: `loo` rows are held-out
// errors, `full` rows come from the model trained on every given env.
class ErrorMatrix {
public:
    ErrorMatrix() = default;
    explicit ErrorMatrix(std::vector<ErrorRecord> records);

    const std::vector<ErrorRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }

private:
    std::vector<ErrorRecord> records_;
};

// Holds out each given environment in turn; entry n is the oracle's error
// on env n when trained on the rest.
LooErrorVector run_loo(const EnvironmentSet& env_set, const AlgorithmOracle& oracle,
                       std::uint64_t seed);

// Trains on all given environments and evaluates on every env in the set.
FullErrorVector run_full(const EnvironmentSet& env_set, const AlgorithmOracle& oracle,
                         std::uint64_t seed);

struct MeasureRow {
    std::string algorithm;
    long seed;
    double average;
    double worst_gap;
    double worst_only;
    double gap_only;
    std::optional<double> ideal;
};

// One row per (algorithm, seed), sorted.
struct MeasureReport {
    std::vector<MeasureRow> rows;
};

MeasureReport compute_report(const ErrorMatrix& matrix);

// Runs the LOO protocol plus the full-training evaluation for a family of
// named oracles over one environment set. Every (algorithm, seed) cell
// draws from its own derived stream, so cells are independent and the
// result does not depend on evaluation order.
ErrorMatrix evaluate_oracles(
    const EnvironmentSet& env_set,
    const std::vector<std::pair<std::string, AlgorithmOracle>>& algorithms,
    const std::vector<long>& seeds);

enum class CorrelationMode {
    per_seed,  // correlation per seed, then mean/std over seeds
    pooled     // all (algorithm, seed) pairs as one sample
};

struct CorrelationSummary {
    MeasureKind measure;
    int n_seeds;          // seeds that produced a defined correlation
    int excluded_seeds;   // seeds skipped because the correlation was undefined
    double rho_mean;      // NaN when n_seeds == 0
    double rho_std;
    double tau_mean;
    double tau_std;
};

struct SelectionRow {
    long seed;
    std::string ideal_best;
    std::string selected;
    double degradation;
};

struct SelectionSummary {
    MeasureKind measure;
    std::vector<SelectionRow> per_seed;
    // selection on seed-averaged measure values
    std::string mean_ideal_best;
    std::string mean_selected;
    double mean_degradation;
};

struct StudyResult {
    CorrelationMode mode;
    std::vector<long> seeds;
    std::vector<CorrelationSummary> correlations;  // fixed measure order
    std::vector<SelectionSummary> selections;
};

// Spearman/Kendall of every practical measure against the ideal measure
// across algorithms, aggregated over seeds, plus best-algorithm selection
// and its performance degradation (per seed and on seed-averaged values).
StudyResult correlation_study(const MeasureReport& report,
                              CorrelationMode mode = CorrelationMode::per_seed);

// |ideal(best by ideal) - ideal(best by `kind`)| per seed.
std::vector<std::pair<long, double>> performance_degradation(const MeasureReport& report,
                                                             MeasureKind kind);

struct AsymptoticConfig {
    std::vector<int> scales;  // ascending; the first is the normalization base
    int ratio_major;
    int ratio_minor;
    std::vector<AlgorithmOracle> oracles;
    std::vector<std::uint64_t> seeds;
};

struct AsymptoticCurve {
    MeasureKind measure;
    std::vector<double> normalized;  // per scale; NaN when every oracle was excluded
    int excluded_oracles;
};

struct AsymptoticResult {
    std::vector<int> scales;
    std::vector<AsymptoticCurve> curves;
    std::vector<std::string> warnings;
};

// |ideal - measure| per scale, normalized per oracle by its value at the
// base scale. Oracles whose base value is zero are excluded with a
// warning.
AsymptoticResult asymptotic_study(const AsymptoticConfig& config);

}  // namespace dgg
