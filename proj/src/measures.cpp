#include "dgg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace dgg {
namespace {

std::vector<EnvError> validate_entries(std::vector<EnvError> entries, const char* what) {
    if (entries.empty()) {
        throw InvalidInput(std::string(what) + ": no entries");
    }
    std::unordered_set<std::string> seen;
    seen.reserve(entries.size());
    for (auto& entry : entries) {
        if (!std::isfinite(entry.error) || entry.error < -kErrorRateTolerance ||
            entry.error > 1.0 + kErrorRateTolerance) {
            throw InvalidInput(std::string(what) + ": error rate out of [0,1] for env '" +
                               entry.env_id + "'");
        }
        entry.error = std::clamp(entry.error, 0.0, 1.0);
        if (!seen.insert(entry.env_id).second) {
            throw InvalidInput(std::string(what) + ": duplicate env_id '" + entry.env_id + "'");
        }
    }
    return entries;
}

double max_error(const std::vector<EnvError>& entries) {
    double m = entries.front().error;
    for (const auto& e : entries) m = std::max(m, e.error);
    return m;
}

double min_error(const std::vector<EnvError>& entries) {
    double m = entries.front().error;
    for (const auto& e : entries) m = std::min(m, e.error);
    return m;
}

}  // namespace

const char* to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::average: return "average";
        case MeasureKind::ideal: return "ideal";
        case MeasureKind::worst_gap: return "worst_gap";
        case MeasureKind::worst_only: return "worst_only";
        case MeasureKind::gap_only: return "gap_only";
    }
    return "unknown";
}

LooErrorVector::LooErrorVector(std::vector<EnvError> entries)
    : entries_(validate_entries(std::move(entries), "LooErrorVector")) {}

FullErrorVector::FullErrorVector(std::vector<EnvError> entries)
    : entries_(validate_entries(std::move(entries), "FullErrorVector")) {}

MeasureValue average_measure(const LooErrorVector& v) {
    double sum = 0.0;
    for (const auto& e : v.entries()) sum += e.error;
    return {MeasureKind::average, sum / static_cast<double>(v.size())};
}

MeasureValue ideal_measure(const FullErrorVector& v) {
    return {MeasureKind::ideal, max_error(v.entries())};
}

MeasureValue worst_gap_measure(const LooErrorVector& v) {
    if (v.size() < 3) {
        throw InsufficientEnvironments(
            "worst_gap_measure: needs at least 3 environments, got " + std::to_string(v.size()));
    }
    double worst = max_error(v.entries());
    double best = min_error(v.entries());
    double weight = 1.0 / static_cast<double>(v.size() - 2);
    return {MeasureKind::worst_gap, worst + (worst - best) * weight};
}

MeasureValue worst_only_measure(const LooErrorVector& v) {
    return {MeasureKind::worst_only, max_error(v.entries())};
}

MeasureValue gap_only_measure(const LooErrorVector& v) {
    if (v.size() < 2) {
        throw InsufficientEnvironments(
            "gap_only_measure: needs at least 2 environments, got " + std::to_string(v.size()));
    }
    return {MeasureKind::gap_only, max_error(v.entries()) - min_error(v.entries())};
}

std::string select_best(std::span<const ScoredAlgorithm> scored) {
    if (scored.empty()) throw InvalidInput("select_best: empty candidate list");
    const MeasureKind kind = scored.front().measure.kind;
    std::size_t best = 0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (scored[i].measure.kind != kind) {
            throw InvalidInput("select_best: mixed measure kinds");
        }
        if (scored[i].measure.value < scored[best].measure.value) best = i;
    }
    return scored[best].algorithm_id;
}

}  // namespace dgg
