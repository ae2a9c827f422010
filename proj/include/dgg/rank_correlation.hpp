#pragma once

#include <span>
#include <vector>

#include "dgg/errors.hpp"

namespace dgg {

// Two measurements of the same n items, paired by index.
struct PairedSample {
    std::vector<double> x;
    std::vector<double> y;

    PairedSample(std::vector<double> x, std::vector<double> y);
};

// Tied values receive the mean of the ranks they span; ranks always sum to
// n(n+1)/2.
std::vector<double> fractional_ranks(std::span<const double> values);

// Pearson correlation of the fractional ranks. Equals the textbook
// 1 - 6*sum(d^2)/(n(n^2-1)) when there are no ties. Throws
// UndefinedCorrelation when either side is constant.
double spearman_rho(const PairedSample& s);

// tau-b: (C - D) / sqrt((C + D + Tx)(C + D + Ty)), with Tx/Ty counting
// pairs tied only in x / only in y. Reduces to (C - D)/(n(n-1)/2) without
// ties. Throws UndefinedCorrelation when either side is constant.
double kendall_tau(const PairedSample& s);

struct SeedAggregate {
    double mean;
    double std_dev;  // sample std (n-1 divisor); 0 for a single value
};

SeedAggregate seed_aggregate(std::span<const double> values);

}  // namespace dgg
