#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dgg/rank_correlation.hpp"
#include "dgg/rng.hpp"

using namespace dgg;

namespace {

// Independent tau-b oracle built on the group-count identity: counts ties
// per value group and uses tot - n1 / tot - n2 denominators, a different
// algebraic route than the implementation's per-pair classification.
double brute_force_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double prod = (x[i] - x[j]) * (y[i] - y[j]);
            if (prod > 0) ++concordant;
            if (prod < 0) ++discordant;
        }
    }
    auto tie_pairs = [](std::vector<double> values) {
        std::sort(values.begin(), values.end());
        long long pairs = 0;
        std::size_t i = 0;
        while (i < values.size()) {
            std::size_t j = i;
            while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
            long long run = static_cast<long long>(j - i + 1);
            pairs += run * (run - 1) / 2;
            i = j + 1;
        }
        return pairs;
    };
    const long long total = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
    const long long tie_x = tie_pairs(x);
    const long long tie_y = tie_pairs(y);
    return static_cast<double>(concordant - discordant) /
           std::sqrt(static_cast<double>(total - tie_x) * static_cast<double>(total - tie_y));
}

std::vector<double> random_values(RngStream& rng, std::size_t n, bool with_ties) {
    std::vector<double> values(n);
    for (double& v : values) {
        v = with_ties ? static_cast<double>(rng.next_below(8)) : rng.next_unit();
    }
    return values;
}

}  // namespace

TEST_CASE("fractional ranks") {
    CHECK(fractional_ranks(std::vector<double>{10, 20, 30}) == std::vector<double>{1, 2, 3});
    CHECK(fractional_ranks(std::vector<double>{5, 5, 7}) == std::vector<double>{1.5, 1.5, 3});
    CHECK(fractional_ranks(std::vector<double>{3, 1, 2}) == std::vector<double>{3, 1, 2});

    CHECK_THROWS_AS(fractional_ranks(std::vector<double>{}), InvalidInput);
    CHECK_THROWS_AS(fractional_ranks(std::vector<double>{1.0, std::nan("")}), InvalidInput);

    RngStream rng(5);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 1 + rng.next_below(40);
        const std::vector<double> values = random_values(rng, n, iter % 2 == 0);
        const std::vector<double> ranks = fractional_ranks(values);
        const double sum = std::accumulate(ranks.begin(), ranks.end(), 0.0);
        CHECK(sum == doctest::Approx(0.5 * double(n) * double(n + 1)).epsilon(1e-12));
    }
}

TEST_CASE("spearman rho basics") {
    CHECK(spearman_rho({{1, 2, 3}, {1, 2, 3}}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spearman_rho({{1, 2, 3}, {3, 2, 1}}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(spearman_rho({{1, 2, 3, 4}, {2, 1, 4, 3}}) == doctest::Approx(0.6).epsilon(1e-12));

    CHECK_THROWS_AS(PairedSample({1.0}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(PairedSample({1.0, 2.0}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(spearman_rho({{2, 2, 2}, {2, 2, 2}}), UndefinedCorrelation);
    // a constant on one side alone already has no rank ordering
    CHECK_THROWS_AS(spearman_rho({{2, 2, 2}, {1, 2, 3}}), UndefinedCorrelation);
}

TEST_CASE("kendall tau basics") {
    CHECK(kendall_tau({{1, 2, 3}, {1, 2, 3}}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kendall_tau({{1, 2, 3}, {3, 2, 1}}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(kendall_tau({{1, 2, 3, 4}, {2, 1, 4, 3}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(kendall_tau({{2, 2, 2}, {2, 2, 2}}), UndefinedCorrelation);
    CHECK_THROWS_AS(kendall_tau({{2, 2, 2}, {1, 2, 3}}), UndefinedCorrelation);
}

TEST_CASE("kendall tau equals the brute-force pair count") {
    RngStream rng(77);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t n = 2 + rng.next_below(49);
        const bool with_ties = iter % 2 == 0;
        std::vector<double> x = random_values(rng, n, with_ties);
        std::vector<double> y = random_values(rng, n, with_ties);

        const double expected = brute_force_tau_b(x, y);
        if (!std::isfinite(expected)) {
            CHECK_THROWS_AS(kendall_tau({x, y}), UndefinedCorrelation);
            continue;
        }
        CHECK(kendall_tau({x, y}) == expected);
    }
}

TEST_CASE("spearman matches the textbook formula without ties") {
    RngStream rng(99);
    for (int iter = 0; iter < 500; ++iter) {
        const std::size_t n = 2 + rng.next_below(30);
        std::vector<double> x(n), y(n);
        std::iota(x.begin(), x.end(), 1.0);
        std::iota(y.begin(), y.end(), 1.0);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(x[i - 1], x[rng.next_below(i)]);
            std::swap(y[i - 1], y[rng.next_below(i)]);
        }
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
        const double nd = static_cast<double>(n);
        const double textbook = 1.0 - 6.0 * d2 / (nd * (nd * nd - 1.0));
        CHECK(std::abs(spearman_rho({x, y}) - textbook) <= 1e-12);
    }
}

TEST_CASE("correlation symmetry, negation and monotone invariance") {
    RngStream rng(123);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t n = 3 + rng.next_below(20);
        std::vector<double> x = random_values(rng, n, false);
        std::vector<double> y = random_values(rng, n, false);

        const double rho = spearman_rho({x, y});
        const double tau = kendall_tau({x, y});
        CHECK(std::abs(rho) <= 1.0 + 1e-12);
        CHECK(std::abs(tau) <= 1.0 + 1e-12);

        CHECK(spearman_rho({y, x}) == doctest::Approx(rho).epsilon(1e-12));
        CHECK(kendall_tau({y, x}) == doctest::Approx(tau).epsilon(1e-12));

        std::vector<double> neg_y = y;
        for (double& v : neg_y) v = -v;
        CHECK(spearman_rho({x, neg_y}) == doctest::Approx(-rho).epsilon(1e-12));
        CHECK(kendall_tau({x, neg_y}) == doctest::Approx(-tau).epsilon(1e-12));

        std::vector<double> tx = x;
        for (double& v : tx) v = std::exp(3.0 * v + 1.0);
        CHECK(spearman_rho({tx, y}) == doctest::Approx(rho).epsilon(1e-12));
        CHECK(kendall_tau({tx, y}) == doctest::Approx(tau).epsilon(1e-12));
    }
}

TEST_CASE("seed aggregation") {
    const SeedAggregate two = seed_aggregate(std::vector<double>{0.4, 0.6});
    CHECK(two.mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.std_dev == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));

    const SeedAggregate one = seed_aggregate(std::vector<double>{0.7});
    CHECK(one.mean == 0.7);
    CHECK(one.std_dev == 0.0);

    const SeedAggregate constant = seed_aggregate(std::vector<double>{0.3, 0.3, 0.3});
    CHECK(constant.mean == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(constant.std_dev == 0.0);

    CHECK_THROWS_AS(seed_aggregate(std::vector<double>{}), InvalidInput);
}
