#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dgg/cli_io.hpp"
#include "dgg/harness.hpp"
#include "dgg/synthetic_worlds.hpp"

using namespace dgg;

namespace {

std::vector<std::pair<std::string, AlgorithmOracle>> mixture_family(int count, double noise) {
    std::vector<std::pair<std::string, AlgorithmOracle>> family;
    for (int i = 0; i < count; ++i) {
        const double lambda = static_cast<double>(i) / static_cast<double>(count - 1);
        family.emplace_back("lam" + std::to_string(i), AlgorithmOracle::mixture(lambda, noise));
    }
    return family;
}

const CorrelationSummary& summary_for(const StudyResult& result, MeasureKind kind) {
    for (const CorrelationSummary& s : result.correlations) {
        if (s.measure == kind) return s;
    }
    throw std::logic_error("missing measure summary");
}

}  // namespace

TEST_CASE("run_loo on analytic oracles") {
    const EnvironmentSet set = build_given_srcmnist({1, 4, 1});

    const LooErrorVector invariant = run_loo(set, AlgorithmOracle::invariant(), 0);
    REQUIRE(invariant.size() == 5);
    for (const EnvError& entry : invariant.entries()) CHECK(entry.error == 0.25);

    const EnvironmentSet custom = environment_set_from_values(
        std::vector<double>{0.8, 0.85, 0.9}, std::vector<double>{0.1});
    const LooErrorVector spurious = run_loo(custom, AlgorithmOracle::spurious(), 0);
    bool found_minor = false;
    for (const EnvError& entry : spurious.entries()) {
        if (entry.env_id == "0.10") {
            // training mean (0.8+0.85+0.9)/3 > 0.5, so the held-out low-e
            // env takes error 1 - 0.1
            CHECK(entry.error == doctest::Approx(0.9).epsilon(1e-12));
            found_minor = true;
        }
    }
    CHECK(found_minor);

    const EnvironmentSet lone = build_given_srcmnist({1, 1, 0});
    CHECK_THROWS_AS(run_loo(lone, AlgorithmOracle::invariant(), 0), InsufficientEnvironments);
}

TEST_CASE("run_full on analytic oracles") {
    const EnvironmentSet set = build_given_srcmnist({1, 3, 1});

    const FullErrorVector invariant = run_full(set, AlgorithmOracle::invariant(), 0);
    CHECK(invariant.size() == set.all_envs().size());
    CHECK(ideal_measure(invariant).value == 0.25);

    const FullErrorVector spurious = run_full(set, AlgorithmOracle::spurious(), 0);
    CHECK(ideal_measure(spurious).value == 1.0);

    const FullErrorVector mixed = run_full(set, AlgorithmOracle::mixture(0.4, 0.0), 0);
    CHECK(ideal_measure(mixed).value == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("noiseless runs are seed-independent, noisy runs are seed-deterministic") {
    const EnvironmentSet set = build_given_srcmnist({2, 4, 1});
    const AlgorithmOracle noiseless = AlgorithmOracle::mixture(0.7, 0.0);
    const AlgorithmOracle noisy = AlgorithmOracle::mixture(0.7, 0.05);

    CHECK(run_loo(set, noiseless, 1).entries().front().error ==
          run_loo(set, noiseless, 2).entries().front().error);

    const LooErrorVector noisy_a = run_loo(set, noisy, 1);
    const LooErrorVector noisy_b = run_loo(set, noisy, 1);
    const LooErrorVector noisy_c = run_loo(set, noisy, 2);
    CHECK(noisy_a.entries().front().error == noisy_b.entries().front().error);
    CHECK(noisy_a.entries().front().error != noisy_c.entries().front().error);
}

TEST_CASE("compute_report on a hand-built matrix") {
    std::vector<ErrorRecord> records;
    const std::vector<std::pair<std::string, double>> loo_rows = {
        {"env_a", 0.3}, {"env_b", 0.2}, {"env_c", 0.5}, {"env_d", 0.4}};
    for (const auto& [env, error] : loo_rows) {
        records.push_back({RecordType::loo, "alg", 0, env, error});
    }
    const MeasureReport report = compute_report(ErrorMatrix(records));
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].average == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(report.rows[0].worst_gap == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(report.rows[0].worst_only == 0.5);
    CHECK(report.rows[0].gap_only == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_FALSE(report.rows[0].ideal.has_value());
}

TEST_CASE("compute_report flags incomplete coverage") {
    std::vector<ErrorRecord> records = {{RecordType::loo, "A", 0, "e1", 0.1},
                                        {RecordType::loo, "A", 0, "e2", 0.2},
                                        {RecordType::loo, "A", 0, "e3", 0.3},
                                        {RecordType::loo, "B", 0, "e1", 0.2},
                                        {RecordType::loo, "B", 0, "e2", 0.3}};
    try {
        compute_report(ErrorMatrix(records));
        FAIL("expected IncompleteMatrix");
    } catch (const IncompleteMatrix& e) {
        REQUIRE(e.missing().size() == 1);
        CHECK(e.missing()[0].find("B") != std::string::npos);
        CHECK(e.missing()[0].find("e3") != std::string::npos);
    }

    CHECK_THROWS_AS(compute_report(ErrorMatrix(std::vector<ErrorRecord>{})), InvalidInput);
    const std::vector<ErrorRecord> duplicated = {{RecordType::loo, "A", 0, "e1", 0.1},
                                                 {RecordType::loo, "A", 0, "e1", 0.2}};
    CHECK_THROWS_AS(ErrorMatrix{duplicated}, DuplicateRecord);
    const std::vector<ErrorRecord> out_of_range = {{RecordType::loo, "A", 0, "e1", 1.4}};
    CHECK_THROWS_AS(ErrorMatrix{out_of_range}, ValidationError);
}

TEST_CASE("compute_report on an invariant-oracle matrix") {
    const EnvironmentSet set = build_given_srcmnist({1, 4, 1});
    const ErrorMatrix matrix =
        evaluate_oracles(set, {{"erm", AlgorithmOracle::invariant()}}, {0, 1});
    const MeasureReport report = compute_report(matrix);
    REQUIRE(report.rows.size() == 2);
    for (const MeasureRow& row : report.rows) {
        CHECK(row.average == 0.25);
        CHECK(row.worst_only == 0.25);
        CHECK(row.gap_only == 0.0);
        CHECK(row.ideal == 0.25);
    }
}

TEST_CASE("correlation study: measures identical to the ideal") {
    // constant per-algorithm errors make every practical measure except
    // gap_only coincide with the ideal value
    std::vector<ErrorRecord> records;
    const std::vector<std::pair<std::string, double>> algorithms = {
        {"A", 0.2}, {"B", 0.4}, {"C", 0.3}};
    for (const auto& [alg, level] : algorithms) {
        for (int env = 0; env < 4; ++env) {
            records.push_back({RecordType::loo, alg, 0, "e" + std::to_string(env), level});
            records.push_back({RecordType::full, alg, 0, "f" + std::to_string(env), level});
        }
    }
    const StudyResult study = correlation_study(compute_report(ErrorMatrix(records)));

    for (MeasureKind kind :
         {MeasureKind::average, MeasureKind::worst_gap, MeasureKind::worst_only}) {
        const CorrelationSummary& s = summary_for(study, kind);
        CHECK(s.n_seeds == 1);
        CHECK(s.rho_mean == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.tau_mean == doctest::Approx(1.0).epsilon(1e-12));
    }
    // gap_only is constant zero across algorithms: excluded as undefined
    const CorrelationSummary& gap = summary_for(study, MeasureKind::gap_only);
    CHECK(gap.n_seeds == 0);
    CHECK(gap.excluded_seeds == 1);
}

TEST_CASE("correlation study on the noiseless mixture family") {
    const EnvironmentSet set = build_given_srcmnist({4, 5, 1});
    const ErrorMatrix matrix = evaluate_oracles(set, mixture_family(11, 0.0), {0});
    const StudyResult study = correlation_study(compute_report(matrix));

    const CorrelationSummary& wg = summary_for(study, MeasureKind::worst_gap);
    CHECK(wg.rho_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wg.tau_mean == doctest::Approx(1.0).epsilon(1e-12));

    // both worst_gap and ideal are strictly increasing in lambda, so the
    // selected algorithm matches and degradation vanishes
    for (const SelectionSummary& selection : study.selections) {
        if (selection.measure != MeasureKind::worst_gap) continue;
        for (const SelectionRow& row : selection.per_seed) {
            CHECK(row.selected == row.ideal_best);
            CHECK(row.degradation == 0.0);
        }
        CHECK(selection.mean_selected == selection.mean_ideal_best);
        CHECK(selection.mean_degradation == 0.0);
    }

    const MeasureReport report = compute_report(matrix);
    const auto degradation = performance_degradation(report, MeasureKind::worst_gap);
    REQUIRE(degradation.size() == 1);
    CHECK(degradation[0].second == 0.0);
}

TEST_CASE("correlation study prefers worst+gap under noise") {
    const EnvironmentSet set = build_given_srcmnist({4, 5, 1});
    std::vector<long> seeds(10);
    for (int i = 0; i < 10; ++i) seeds[static_cast<std::size_t>(i)] = i;
    const ErrorMatrix matrix = evaluate_oracles(set, mixture_family(11, 0.05), seeds);
    const StudyResult study = correlation_study(compute_report(matrix));

    const CorrelationSummary& wg = summary_for(study, MeasureKind::worst_gap);
    const CorrelationSummary& avg = summary_for(study, MeasureKind::average);
    CHECK(wg.n_seeds == 10);
    CHECK(wg.rho_mean > avg.rho_mean);
    CHECK(wg.rho_mean > 0.9);
}

TEST_CASE("correlation study requires ideal values and enough algorithms") {
    std::vector<ErrorRecord> loo_only = {{RecordType::loo, "A", 0, "e1", 0.1},
                                         {RecordType::loo, "A", 0, "e2", 0.2},
                                         {RecordType::loo, "A", 0, "e3", 0.3},
                                         {RecordType::loo, "B", 0, "e1", 0.3},
                                         {RecordType::loo, "B", 0, "e2", 0.2},
                                         {RecordType::loo, "B", 0, "e3", 0.1}};
    CHECK_THROWS_AS(correlation_study(compute_report(ErrorMatrix(loo_only))), InvalidInput);

    const EnvironmentSet set = build_given_srcmnist({1, 3, 1});
    const ErrorMatrix single = evaluate_oracles(set, {{"only", AlgorithmOracle::invariant()}}, {0});
    CHECK_THROWS_AS(correlation_study(compute_report(single)), InvalidInput);
}

TEST_CASE("correlation study is invariant to row order") {
    const EnvironmentSet set = build_given_srcmnist({2, 4, 1});
    const ErrorMatrix matrix = evaluate_oracles(set, mixture_family(5, 0.03), {0, 1, 2});
    MeasureReport report = compute_report(matrix);

    MeasureReport reversed = report;
    std::reverse(reversed.rows.begin(), reversed.rows.end());

    CHECK(emit_report(correlation_study(report), ReportFormat::json) ==
          emit_report(correlation_study(reversed), ReportFormat::json));
}

TEST_CASE("pooled correlation mode") {
    const EnvironmentSet set = build_given_srcmnist({2, 4, 1});
    const ErrorMatrix matrix = evaluate_oracles(set, mixture_family(5, 0.03), {0, 1, 2});
    const StudyResult pooled =
        correlation_study(compute_report(matrix), CorrelationMode::pooled);
    CHECK(pooled.mode == CorrelationMode::pooled);
    for (const CorrelationSummary& s : pooled.correlations) {
        CHECK(s.n_seeds == 1);
        CHECK(s.rho_std == 0.0);
        CHECK(std::abs(s.rho_mean) <= 1.0 + 1e-12);
    }
}

TEST_CASE("performance degradation example") {
    // ideal picks C (0.25), the measure picks B whose ideal is 0.5
    MeasureReport report;
    report.rows = {{"A", 0, 0.1, 0.1, 0.1, 0.0, 0.3},
                   {"B", 0, 0.05, 0.05, 0.05, 0.0, 0.5},
                   {"C", 0, 0.2, 0.2, 0.2, 0.0, 0.25}};
    const auto degradation = performance_degradation(report, MeasureKind::average);
    REQUIRE(degradation.size() == 1);
    CHECK(degradation[0].second == doctest::Approx(0.25).epsilon(1e-12));

    // equal ideal values: degradation is zero no matter what gets picked
    MeasureReport flat;
    flat.rows = {{"A", 0, 0.4, 0.4, 0.4, 0.0, 0.3},
                 {"B", 0, 0.1, 0.1, 0.1, 0.0, 0.3},
                 {"C", 0, 0.9, 0.9, 0.9, 0.0, 0.3}};
    CHECK(performance_degradation(flat, MeasureKind::average)[0].second == 0.0);
}

TEST_CASE("asymptotic study on the analytic mixture family") {
    AsymptoticConfig config;
    config.scales = {1, 2, 3, 4};
    config.ratio_major = 5;
    config.ratio_minor = 1;
    for (int i = 1; i <= 10; ++i) {
        config.oracles.push_back(
            AlgorithmOracle::mixture(static_cast<double>(i) / 10.0, 0.0));
    }
    config.seeds = {0};

    const AsymptoticResult result = asymptotic_study(config);
    REQUIRE(result.scales == std::vector<int>{1, 2, 3, 4});

    for (const AsymptoticCurve& curve : result.curves) {
        if (curve.measure == MeasureKind::worst_gap) {
            // |ideal - W+G| = lambda * |0.1 - 0.8/(6s - 2)|, so the
            // normalized curve is the same for every lambda
            CHECK(curve.normalized[0] == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(curve.normalized[1] == doctest::Approx(0.2).epsilon(1e-9));
            CHECK(curve.normalized[2] == doctest::Approx(0.5).epsilon(1e-9));
            CHECK(curve.normalized[3] == doctest::Approx(0.7 / 1.1).epsilon(1e-9));
        }
        if (curve.measure == MeasureKind::average) {
            // scale 1 has the lone {0.1} minority env; larger scales share
            // one mean, so the curve is flat just above 1
            CHECK(curve.normalized[0] == doctest::Approx(1.0).epsilon(1e-9));
            for (std::size_t i = 1; i < 4; ++i) {
                CHECK(curve.normalized[i] ==
                      doctest::Approx(2.2 / 3.0 / 0.725).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("asymptotic study excludes zero-base oracles with a warning") {
    AsymptoticConfig config;
    config.scales = {1, 2};
    config.ratio_major = 4;
    config.ratio_minor = 1;
    // the invariant oracle matches the ideal exactly, so |ideal - measure|
    // is identically zero and the normalization base vanishes
    config.oracles = {AlgorithmOracle::invariant()};
    config.seeds = {0};

    const AsymptoticResult result = asymptotic_study(config);
    CHECK(result.warnings.size() == 3);
    for (const AsymptoticCurve& curve : result.curves) {
        if (curve.measure == MeasureKind::gap_only) {
            // |ideal - gap_only| = 0.25 for the invariant oracle, so the
            // base never vanishes and the curve stays defined
            CHECK(curve.excluded_oracles == 0);
            CHECK(curve.normalized[0] == doctest::Approx(1.0).epsilon(1e-12));
        } else {
            CHECK(curve.excluded_oracles == 1);
            CHECK(std::isnan(curve.normalized[0]));
        }
    }

    config.scales = {2, 1};
    CHECK_THROWS_AS(asymptotic_study(config), InvalidInput);
}
