#include "dgg/rank_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace dgg {
namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite value");
    }
}

}  // namespace

PairedSample::PairedSample(std::vector<double> x_in, std::vector<double> y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {
    if (x.size() != y.size()) throw InvalidInput("PairedSample: length mismatch");
    if (x.size() < 2) throw InvalidInput("PairedSample: needs at least 2 pairs");
    require_finite(x, "PairedSample.x");
    require_finite(y, "PairedSample.y");
}

std::vector<double> fractional_ranks(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("fractional_ranks: empty input");
    require_finite(values, "fractional_ranks");

    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share the mean of ranks i+1..j+1
        double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const PairedSample& s) {
    const std::vector<double> rx = fractional_ranks(s.x);
    const std::vector<double> ry = fractional_ranks(s.y);
    const std::size_t n = rx.size();

    const double mean = 0.5 * static_cast<double>(n + 1);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedCorrelation("spearman_rho: constant input has no rank ordering");
    }
    return sxy / std::sqrt(sxx * syy);
}

double kendall_tau(const PairedSample& s) {
    const std::size_t n = s.x.size();
    std::int64_t concordant = 0, discordant = 0, tied_x_only = 0, tied_y_only = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = s.x[i] - s.x[j];
            double dy = s.y[i] - s.y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) {
                ++tied_x_only;
            } else if (dy == 0.0) {
                ++tied_y_only;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double nx = static_cast<double>(concordant + discordant + tied_x_only);
    const double ny = static_cast<double>(concordant + discordant + tied_y_only);
    if (nx == 0.0 || ny == 0.0) {
        throw UndefinedCorrelation("kendall_tau: all pairs tied on one side");
    }
    return static_cast<double>(concordant - discordant) / std::sqrt(nx * ny);
}

SeedAggregate seed_aggregate(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("seed_aggregate: empty input");
    require_finite(values, "seed_aggregate");

    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    if (values.size() == 1) return {mean, 0.0};

    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace dgg
