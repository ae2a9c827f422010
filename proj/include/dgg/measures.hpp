#pragma once

#include <span>
#include <string>
#include <vector>

#include "dgg/errors.hpp"

namespace dgg {

// Error rates live in [0, 1]; anything within this tolerance of the range
// is treated as floating round-off and clamped, anything beyond rejects.
inline constexpr double kErrorRateTolerance = 1e-12;

struct EnvError {
    std::string env_id;
    double error;
};

enum class MeasureKind { average, ideal, worst_gap, worst_only, gap_only };

const char* to_string(MeasureKind kind);

struct MeasureValue {
    MeasureKind kind;
    double value;
};

// Leave-one-environment-out errors: entry n is the error on environment n
// of a model trained on every other given environment.
class LooErrorVector {
public:
    explicit LooErrorVector(std::vector<EnvError> entries);

    const std::vector<EnvError>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<EnvError> entries_;
};

// Errors over the complete environment set of the model trained on all
// given environments.
class FullErrorVector {
public:
    explicit FullErrorVector(std::vector<EnvError> entries);

    const std::vector<EnvError>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<EnvError> entries_;
};

// mean of the held-out errors
MeasureValue average_measure(const LooErrorVector& v);

// max error over the complete environment set
MeasureValue ideal_measure(const FullErrorVector& v);

// worst held-out error plus (worst - best) / (N - 2); needs N >= 3
MeasureValue worst_gap_measure(const LooErrorVector& v);

MeasureValue worst_only_measure(const LooErrorVector& v);

// worst minus best held-out error; needs N >= 2
MeasureValue gap_only_measure(const LooErrorVector& v);

struct ScoredAlgorithm {
    std::string algorithm_id;
    MeasureValue measure;
};

// Lowest value wins; ties resolve to the earliest entry. All entries must
// carry the same measure kind.
std::string select_best(std::span<const ScoredAlgorithm> scored);

}  // namespace dgg
