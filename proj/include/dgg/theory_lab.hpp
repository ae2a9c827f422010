#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dgg/errors.hpp"
#include "dgg/measures.hpp"

namespace dgg {

// Error rates assumed i.i.d. uniform on [a, b].
struct UniformErrorModel {
    double a;
    double b;

    UniformErrorModel(double a, double b);
};

struct MaxOrderStats {
    int k;
    double mean;
    double variance;
};

// Closed forms for the max of k i.i.d. U(a, b) draws:
//   mean     = (a + b*k) / (k + 1)
//   variance = (b - a)^2 * k / ((k + 2)(k + 1)^2)
MaxOrderStats lemma_closed_form(const UniformErrorModel& model, int k);

// Empirical mean and sample variance of the max of k draws, over `trials`
// independent repetitions. Bit-deterministic given (seed, config) and
// independent of the worker count.
MaxOrderStats lemma_monte_carlo(const UniformErrorModel& model, int k, std::int64_t trials,
                                std::uint64_t seed);

struct ChebyshevTrialConfig {
    int n_envs;
    double delta;  // strictly inside (0, 1)
    std::int64_t trials;
    std::uint64_t seed;

    ChebyshevTrialConfig(int n_envs, double delta, std::int64_t trials, std::uint64_t seed);
};

// Fraction of trials with |max of N draws - mu_N| <= (b - a)/(N * delta),
// where mu_N is the closed-form mean. The Chebyshev argument guarantees a
// fraction of at least 1 - delta^2.
double chebyshev_coverage(const ChebyshevTrialConfig& cfg, const UniformErrorModel& model);

struct ResidualPoint {
    int n;
    double mean_abs_residual;
};

// Mean of |b - (N+1)/N * max of N draws| for each N in the grid. The
// residual is the error term of the scaled-worst-error identity and decays
// like (b - a)/N.
std::vector<ResidualPoint> theorem1_residual(const UniformErrorModel& model,
                                             std::span<const int> n_grid, std::int64_t trials,
                                             std::uint64_t seed);

struct DecreasingRangeConfig {
    int n_envs;  // >= 3 so the 1/(N-2) weight exists
    UniformErrorModel model;
    std::int64_t trials;
    std::uint64_t seed;
    // Attempts allowed per accepted tuple before reporting starvation.
    std::int64_t max_attempts_per_trial = 200000;

    DecreasingRangeConfig(int n_envs, UniformErrorModel model, std::int64_t trials,
                          std::uint64_t seed);
};

struct BoundCheckResult {
    std::int64_t violations;
    std::int64_t trials;
};

// Draws N-tuples from U(a, b) by rejection until max >= b - (b-a)/N and
// min <= a + (b-a)/N, then checks b <= max + (max - min)/(N - 2) on each
// accepted tuple. The bound is deterministic under the assumption, so the
// violation count must come back 0.
BoundCheckResult theorem2_bound_check(const DecreasingRangeConfig& cfg);

// Whether the ideal measure of the fully-trained model is bounded by the
// worst+gap of the held-out errors. Diagnostic only: the inequality is
// conditional on the range assumption, not universal.
bool reconnection_bound_check(const FullErrorVector& oracle_errors, const LooErrorVector& loo);

}  // namespace dgg
