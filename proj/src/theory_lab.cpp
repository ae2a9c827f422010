#include "dgg/theory_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "dgg/parallel.hpp"
#include "dgg/rng.hpp"

namespace dgg {
namespace {

// Stream domain tags; each operation derives its trial streams under its
// own tag so seeds never collide across operations.
constexpr std::uint64_t kTagLemma = 0x4c454d4d41;
constexpr std::uint64_t kTagChebyshev = 0x43484542;
constexpr std::uint64_t kTagTheorem1 = 0x54484d31;
constexpr std::uint64_t kTagTheorem2 = 0x54484d32;

// Slack for pure float rounding when checking an inequality that holds
// with real-number certainty. A genuine violation would exceed this by
// orders of magnitude.
constexpr double kFloatSlack = 1e-12;

double max_of_draws(RngStream& rng, int k, const UniformErrorModel& model) {
    double m = rng.uniform(model.a, model.b);
    for (int i = 1; i < k; ++i) m = std::max(m, rng.uniform(model.a, model.b));
    return m;
}

}  // namespace

UniformErrorModel::UniformErrorModel(double a_in, double b_in) : a(a_in), b(b_in) {
    if (!(a >= 0.0 && a < b && b <= 1.0)) {
        throw InvalidInput("UniformErrorModel: need 0 <= a < b <= 1");
    }
}

ChebyshevTrialConfig::ChebyshevTrialConfig(int n_envs_in, double delta_in,
                                           std::int64_t trials_in, std::uint64_t seed_in)
    : n_envs(n_envs_in), delta(delta_in), trials(trials_in), seed(seed_in) {
    if (n_envs < 1) throw InvalidInput("ChebyshevTrialConfig: n_envs must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidInput("ChebyshevTrialConfig: delta must be strictly inside (0,1)");
    }
    if (trials < 1) throw InvalidInput("ChebyshevTrialConfig: trials must be >= 1");
}

DecreasingRangeConfig::DecreasingRangeConfig(int n_envs_in, UniformErrorModel model_in,
                                             std::int64_t trials_in, std::uint64_t seed_in)
    : n_envs(n_envs_in), model(model_in), trials(trials_in), seed(seed_in) {
    if (n_envs < 3) throw InvalidInput("DecreasingRangeConfig: n_envs must be >= 3");
    if (trials < 1) throw InvalidInput("DecreasingRangeConfig: trials must be >= 1");
}

MaxOrderStats lemma_closed_form(const UniformErrorModel& model, int k) {
    if (k < 1) throw InvalidInput("lemma_closed_form: k must be >= 1");
    const double kd = static_cast<double>(k);
    const double range = model.b - model.a;
    const double mean = (model.a + model.b * kd) / (kd + 1.0);
    const double variance = range * range * kd / ((kd + 2.0) * (kd + 1.0) * (kd + 1.0));
    return {k, mean, variance};
}

MaxOrderStats lemma_monte_carlo(const UniformErrorModel& model, int k, std::int64_t trials,
                                std::uint64_t seed) {
    if (k < 1) throw InvalidInput("lemma_monte_carlo: k must be >= 1");
    if (trials < 1) throw InvalidInput("lemma_monte_carlo: trials must be >= 1");

    const std::size_t n = static_cast<std::size_t>(trials);
    auto [sum, sum_sq] = parallel_sum2(n, [&](std::size_t i) {
        RngStream rng = derive_stream(seed, kTagLemma, i);
        return max_of_draws(rng, k, model);
    });
    const double nd = static_cast<double>(trials);
    const double mean = sum / nd;
    const double variance = trials > 1 ? (sum_sq - nd * mean * mean) / (nd - 1.0) : 0.0;
    return {k, mean, variance};
}

double chebyshev_coverage(const ChebyshevTrialConfig& cfg, const UniformErrorModel& model) {
    const double mu = lemma_closed_form(model, cfg.n_envs).mean;
    const double radius = (model.b - model.a) / (static_cast<double>(cfg.n_envs) * cfg.delta);

    const std::size_t n = static_cast<std::size_t>(cfg.trials);
    const std::size_t inside = parallel_count(n, [&](std::size_t i) {
        RngStream rng = derive_stream(cfg.seed, kTagChebyshev, i);
        return std::abs(max_of_draws(rng, cfg.n_envs, model) - mu) <= radius;
    });
    return static_cast<double>(inside) / static_cast<double>(cfg.trials);
}

std::vector<ResidualPoint> theorem1_residual(const UniformErrorModel& model,
                                             std::span<const int> n_grid, std::int64_t trials,
                                             std::uint64_t seed) {
    if (trials < 1) throw InvalidInput("theorem1_residual: trials must be >= 1");
    std::vector<ResidualPoint> points;
    points.reserve(n_grid.size());
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const int n_envs = n_grid[gi];
        if (n_envs < 1) throw InvalidInput("theorem1_residual: each n must be >= 1");
        const double scale = static_cast<double>(n_envs + 1) / static_cast<double>(n_envs);
        const double total = parallel_sum(static_cast<std::size_t>(trials), [&](std::size_t i) {
            RngStream rng = derive_stream(seed, kTagTheorem1, gi, i);
            return std::abs(model.b - scale * max_of_draws(rng, n_envs, model));
        });
        points.push_back({n_envs, total / static_cast<double>(trials)});
    }
    return points;
}

BoundCheckResult theorem2_bound_check(const DecreasingRangeConfig& cfg) {
    const double a = cfg.model.a;
    const double b = cfg.model.b;
    const double n = static_cast<double>(cfg.n_envs);
    const double max_floor = b - (b - a) / n;
    const double min_ceil = a + (b - a) / n;
    const double gap_weight = 1.0 / (n - 2.0);

    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    std::atomic<bool> starved{false};

    const std::size_t violations = parallel_count(trials, [&](std::size_t i) {
        RngStream rng = derive_stream(cfg.seed, kTagTheorem2, i);
        for (std::int64_t attempt = 0; attempt < cfg.max_attempts_per_trial; ++attempt) {
            double max_v = rng.uniform(a, b);
            double min_v = max_v;
            for (int d = 1; d < cfg.n_envs; ++d) {
                double v = rng.uniform(a, b);
                max_v = std::max(max_v, v);
                min_v = std::min(min_v, v);
            }
            if (max_v >= max_floor && min_v <= min_ceil) {
                return b > max_v + (max_v - min_v) * gap_weight + kFloatSlack;
            }
        }
        starved.store(true);
        return false;
    });

    if (starved.load()) {
        throw GeneratorStarvation(
            "theorem2_bound_check: acceptance rate below threshold after " +
            std::to_string(cfg.max_attempts_per_trial) + " attempts per trial");
    }
    return {static_cast<std::int64_t>(violations), cfg.trials};
}

bool reconnection_bound_check(const FullErrorVector& oracle_errors, const LooErrorVector& loo) {
    return ideal_measure(oracle_errors).value <= worst_gap_measure(loo).value;
}

}  // namespace dgg
