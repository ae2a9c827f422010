#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dgg/measures.hpp"
#include "dgg/rng.hpp"

using namespace dgg;

namespace {

std::vector<EnvError> entries_of(const std::vector<double>& errors) {
    std::vector<EnvError> entries;
    entries.reserve(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        entries.push_back({"e" + std::to_string(i), errors[i]});
    }
    return entries;
}

LooErrorVector loo(const std::vector<double>& errors) { return LooErrorVector(entries_of(errors)); }

FullErrorVector full(const std::vector<double>& errors) {
    return FullErrorVector(entries_of(errors));
}

// Test-only re-implementation with deliberately different code paths
// (sort-based extremes instead of running max/min).
struct NaiveMeasures {
    double average, worst, gap, worst_gap;

    explicit NaiveMeasures(std::vector<double> errors) {
        double sum = 0.0;
        for (double e : errors) sum += e;
        average = sum / static_cast<double>(errors.size());
        std::sort(errors.begin(), errors.end());
        worst = errors.back();
        gap = errors.back() - errors.front();
        worst_gap = worst + gap / static_cast<double>(errors.size() - 2);
    }
};

std::vector<double> random_errors(RngStream& rng, std::size_t n) {
    std::vector<double> errors(n);
    for (double& e : errors) e = rng.next_unit();
    return errors;
}

}  // namespace

TEST_CASE("average measure") {
    CHECK(average_measure(loo({0.3, 0.2, 0.5, 0.4})).value == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(average_measure(loo({0.3, 0.2, 0.5, 0.4})).kind == MeasureKind::average);

    RngStream rng(1);
    for (int i = 0; i < 20; ++i) {
        double c = rng.next_unit();
        CHECK(average_measure(loo({c, c, c})).value == doctest::Approx(c).epsilon(1e-12));
    }

    CHECK_THROWS_AS(LooErrorVector({}), InvalidInput);
}

TEST_CASE("ideal measure") {
    CHECK(ideal_measure(full(std::vector<double>(101, 0.25))).value == 0.25);
    CHECK(ideal_measure(full({0.1, 0.9, 0.3})).value == 0.9);
    CHECK(ideal_measure(full({0.1, 0.9, 0.3})).kind == MeasureKind::ideal);
    CHECK_THROWS_AS(FullErrorVector({}), InvalidInput);
}

TEST_CASE("worst+gap measure") {
    CHECK(worst_gap_measure(loo({0.3, 0.2, 0.5, 0.4})).value ==
          doctest::Approx(0.65).epsilon(1e-12));
    CHECK(worst_gap_measure(loo({0.25, 0.25, 0.25})).value == 0.25);
    CHECK_THROWS_AS(worst_gap_measure(loo({0.3, 0.7})), InsufficientEnvironments);
}

TEST_CASE("worst-only and gap-only measures") {
    CHECK(worst_only_measure(loo({0.3, 0.2, 0.5, 0.4})).value == 0.5);
    CHECK(worst_only_measure(loo({0.7})).value == 0.7);
    CHECK(worst_only_measure(loo({0.0, 1.0})).value == 1.0);

    CHECK(gap_only_measure(loo({0.3, 0.2, 0.5, 0.4})).value == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(gap_only_measure(loo({0.4, 0.4})).value == 0.0);
    CHECK(gap_only_measure(loo({0.0, 1.0})).value == 1.0);
    CHECK_THROWS_AS(gap_only_measure(loo({0.5})), InsufficientEnvironments);
}

TEST_CASE("error rates validated at ingestion") {
    CHECK_THROWS_AS(loo({0.3, 1.5}), InvalidInput);
    CHECK_THROWS_AS(loo({-0.2}), InvalidInput);
    CHECK_THROWS_AS(LooErrorVector({{"a", 0.1}, {"a", 0.2}}), InvalidInput);

    // round-off inside the tolerance clamps instead of failing
    CHECK(worst_only_measure(loo({1.0 + 1e-13})).value == 1.0);
    CHECK(worst_only_measure(loo({-1e-13})).value == 0.0);
}

TEST_CASE("select_best") {
    std::vector<ScoredAlgorithm> scored = {{"A", {MeasureKind::average, 0.3}},
                                           {"B", {MeasureKind::average, 0.1}},
                                           {"C", {MeasureKind::average, 0.2}}};
    CHECK(select_best(scored) == "B");

    std::vector<ScoredAlgorithm> tie = {{"A", {MeasureKind::ideal, 0.1}},
                                        {"B", {MeasureKind::ideal, 0.1}}};
    CHECK(select_best(tie) == "A");

    CHECK_THROWS_AS(select_best({}), InvalidInput);

    std::vector<ScoredAlgorithm> mixed = {{"A", {MeasureKind::average, 0.1}},
                                          {"B", {MeasureKind::ideal, 0.2}}};
    CHECK_THROWS_AS(select_best(mixed), InvalidInput);
}

TEST_CASE("measure identities and bounds on random vectors") {
    RngStream rng(42);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t n = 3 + rng.next_below(20);
        const std::vector<double> errors = random_errors(rng, n);
        const LooErrorVector v = loo(errors);

        const double wg = worst_gap_measure(v).value;
        const double worst = worst_only_measure(v).value;
        const double gap = gap_only_measure(v).value;
        const double avg = average_measure(v).value;

        CHECK(wg == doctest::Approx(worst + gap / double(n - 2)).epsilon(1e-14));
        CHECK(worst <= wg + 1e-15);
        CHECK(avg <= worst + 1e-15);
        CHECK(wg >= 0.0);
        CHECK(wg <= 1.0 + 1.0 / double(n - 2) + 1e-15);

        const NaiveMeasures naive(errors);
        CHECK(avg == doctest::Approx(naive.average).epsilon(1e-13));
        CHECK(worst == naive.worst);
        CHECK(gap == naive.gap);
        CHECK(wg == doctest::Approx(naive.worst_gap).epsilon(1e-13));
    }
}

TEST_CASE("measures are permutation invariant") {
    RngStream rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 3 + rng.next_below(12);
        std::vector<double> errors = random_errors(rng, n);
        const LooErrorVector original = loo(errors);

        std::vector<double> shuffled = errors;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
        }
        const LooErrorVector permuted = loo(shuffled);

        CHECK(average_measure(original).value ==
              doctest::Approx(average_measure(permuted).value).epsilon(1e-13));
        CHECK(worst_only_measure(original).value == worst_only_measure(permuted).value);
        CHECK(gap_only_measure(original).value == gap_only_measure(permuted).value);
        CHECK(worst_gap_measure(original).value ==
              doctest::Approx(worst_gap_measure(permuted).value).epsilon(1e-13));
    }
}

TEST_CASE("adding a constant shifts measures predictably") {
    RngStream rng(11);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 3 + rng.next_below(10);
        std::vector<double> errors(n);
        for (double& e : errors) e = 0.5 * rng.next_unit();
        const double c = 0.5 * rng.next_unit();

        std::vector<double> shifted = errors;
        for (double& e : shifted) e += c;

        CHECK(average_measure(loo(shifted)).value ==
              doctest::Approx(average_measure(loo(errors)).value + c).epsilon(1e-12));
        CHECK(worst_only_measure(loo(shifted)).value ==
              doctest::Approx(worst_only_measure(loo(errors)).value + c).epsilon(1e-12));
        CHECK(gap_only_measure(loo(shifted)).value ==
              doctest::Approx(gap_only_measure(loo(errors)).value).epsilon(1e-12));
        CHECK(worst_gap_measure(loo(shifted)).value ==
              doctest::Approx(worst_gap_measure(loo(errors)).value + c).epsilon(1e-12));
        CHECK(ideal_measure(full(shifted)).value ==
              doctest::Approx(ideal_measure(full(errors)).value + c).epsilon(1e-12));
    }
}

TEST_CASE("select_best is invariant under strictly increasing transforms") {
    RngStream rng(13);
    const auto transforms = {+[](double v) { return 2.0 * v + 1.0; },
                             +[](double v) { return std::exp(v); },
                             +[](double v) { return v * v * v + v; }};
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 2 + rng.next_below(8);
        std::vector<ScoredAlgorithm> scored;
        for (std::size_t i = 0; i < n; ++i) {
            // small grid forces occasional ties
            double v = static_cast<double>(rng.next_below(6)) / 10.0;
            scored.push_back({"alg" + std::to_string(i), {MeasureKind::worst_gap, v}});
        }
        const std::string baseline = select_best(scored);
        for (auto f : transforms) {
            std::vector<ScoredAlgorithm> transformed = scored;
            for (auto& s : transformed) s.measure.value = f(s.measure.value);
            CHECK(select_best(transformed) == baseline);
        }
    }
}
