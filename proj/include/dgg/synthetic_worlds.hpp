#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dgg/errors.hpp"
#include "dgg/rng.hpp"

namespace dgg {

// An environment is a data distribution indexed by the flip probability e
// of its spurious feature.
struct Environment {
    std::string id;
    double e;
};

// Complete environment set plus the given subset, optionally split into a
// majority and a minority group. The given environments keep their real
// (possibly off-grid) e values; the evaluation grid exists alongside them.
class EnvironmentSet {
public:
    EnvironmentSet() = default;

    // `all` must contain every given env; major/minor must either both be
    // empty (unpartitioned given set) or partition the given ids with
    // |major| >= |minor|.
    static EnvironmentSet create(std::vector<Environment> all,
                                 std::vector<std::string> given_ids,
                                 std::vector<std::string> major_ids,
                                 std::vector<std::string> minor_ids);

    const std::vector<Environment>& all_envs() const noexcept { return all_; }
    const std::vector<std::string>& given_ids() const noexcept { return given_ids_; }
    const std::vector<std::string>& major_ids() const noexcept { return major_ids_; }
    const std::vector<std::string>& minor_ids() const noexcept { return minor_ids_; }

    std::vector<Environment> given_envs() const;
    std::vector<double> given_es() const;
    double e_of(const std::string& env_id) const;
    bool is_partitioned() const noexcept { return !major_ids_.empty() || !minor_ids_.empty(); }

private:
    std::vector<Environment> all_;
    std::vector<std::string> given_ids_;
    std::vector<std::string> major_ids_;
    std::vector<std::string> minor_ids_;
    std::unordered_map<std::string, std::size_t> index_;
};

// env_id for a flip probability: grid values use the grid's two decimals,
// off-grid values six.
std::string env_id_for(double e);

// Evaluation grid {0, step, ..., 1}; step must divide 1 evenly.
EnvironmentSet build_e_all(double step);

// Cardinality controls of the synthetic given set: N_major = scale *
// ratio_major, N_minor = scale * ratio_minor.
struct ScaleRatio {
    int scale;
    int ratio_major;
    int ratio_minor;

    ScaleRatio(int scale, int ratio_major, int ratio_minor);
};

// Majority envs evenly spaced on [0.8, 0.9], minority on [0.1, 0.2]
// ({0.1} alone when N_minor is 1, empty when 0). The full set is the
// 101-point grid plus any off-grid given values.
EnvironmentSet build_given_srcmnist(const ScaleRatio& sr);

enum class FixedDataset { c_cats_dogs, l_cifar10 };

// The two five-environment given sets, unpartitioned; callers assign the
// major/minor split themselves when they need one.
EnvironmentSet fixed_given_set(FixedDataset dataset);

// Convenience builder for explicit major/minor value lists over the
// standard grid.
EnvironmentSet environment_set_from_values(std::span<const double> major_es,
                                           std::span<const double> minor_es);

// Corrupted-world indexing: n_base base environments, each with n_variants
// variants (clean + corruptions); the pattern says how many variants to
// sample per base.
struct CorruptedWorldConfig {
    int n_base_envs;
    int n_variants;
    std::vector<int> envs_pattern;

    CorruptedWorldConfig(int n_base_envs, int n_variants, std::vector<int> envs_pattern);
};

// Samples pattern[i] distinct variants for base i, uniformly without
// replacement; ids look like "base0:variant12". Deterministic per seed.
std::vector<std::string> sample_corrupted_given(const CorruptedWorldConfig& cfg,
                                                std::uint64_t seed);

// One synthetic observation: a stable feature, the label derived from it
// with 25% flip noise, and a spurious feature derived from the label with
// environment-specific flip probability e.
struct AbstractSample {
    bool invariant_feature;
    bool label;
    bool spurious_feature;
};

std::vector<AbstractSample> generate_environment(double e, std::int64_t n, std::uint64_t seed);

enum class ClassifierRule { use_invariant, use_spurious, use_spurious_flipped };

// Error rate of the rule's prediction against the labels.
double classify_and_score(std::span<const AbstractSample> samples, ClassifierRule rule);

// Analytic stand-in for a trained model. The invariant model always errs
// at the label-noise floor 0.25; the spurious model follows the majority
// direction of its training environments; the mixture interpolates and can
// add clamped Gaussian noise for seed-to-seed variation.
class AlgorithmOracle {
public:
    enum class Kind { invariant, spurious, mixture };

    static AlgorithmOracle invariant();
    static AlgorithmOracle spurious();
    static AlgorithmOracle mixture(double lambda, double noise_std);

    Kind kind() const noexcept { return kind_; }
    double lambda() const noexcept { return lambda_; }
    double noise_std() const noexcept { return noise_std_; }
    std::string name() const;

    // Error rate on a test environment given the training environments'
    // flip probabilities. Noiseless oracles never touch the stream.
    double error(std::span<const double> training_es, double test_e, RngStream& rng) const;

private:
    AlgorithmOracle(Kind kind, double lambda, double noise_std)
        : kind_(kind), lambda_(lambda), noise_std_(noise_std) {}

    Kind kind_;
    double lambda_;
    double noise_std_;
};

}  // namespace dgg
