#include "dgg/synthetic_worlds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "dgg/measures.hpp"
#include "dgg/numfmt.hpp"

namespace dgg {
namespace {

constexpr std::uint64_t kTagCorrupted = 0x434f5252;
constexpr std::uint64_t kTagSample = 0x53414d50;

constexpr double kGridStep = 0.01;
constexpr int kGridPoints = 101;

bool on_grid(double e) {
    return std::abs(e * 100.0 - std::round(e * 100.0)) <= 1e-9;
}

double snap_if_on_grid(double e) {
    return on_grid(e) ? std::round(e * 100.0) / 100.0 : e;
}

std::vector<Environment> standard_grid() {
    std::vector<Environment> grid;
    grid.reserve(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) {
        double e = static_cast<double>(i) / 100.0;
        grid.push_back({format_fixed(e, 2), e});
    }
    return grid;
}

// lo..hi inclusive with consistent increments; a single point sits at lo.
std::vector<double> evenly_spaced(double lo, double hi, int n) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        values.push_back(lo);
        return values;
    }
    for (int k = 0; k < n; ++k) {
        values.push_back(snap_if_on_grid(lo + (hi - lo) * static_cast<double>(k) /
                                                  static_cast<double>(n - 1)));
    }
    return values;
}

// grid plus any off-grid given values, sorted by e
EnvironmentSet assemble_with_grid(const std::vector<double>& major_es,
                                  const std::vector<double>& minor_es) {
    std::vector<Environment> all = standard_grid();
    std::vector<Environment> given;
    std::vector<std::string> major_ids, minor_ids;

    auto add_group = [&](const std::vector<double>& es, std::vector<std::string>& group_ids) {
        for (double e : es) {
            double snapped = snap_if_on_grid(e);
            std::string id = env_id_for(snapped);
            if (!on_grid(snapped)) all.push_back({id, snapped});
            given.push_back({id, snapped});
            group_ids.push_back(id);
        }
    };
    add_group(minor_es, minor_ids);
    add_group(major_es, major_ids);

    auto by_e = [](const Environment& x, const Environment& y) { return x.e < y.e; };
    std::sort(all.begin(), all.end(), by_e);
    std::sort(given.begin(), given.end(), by_e);

    std::vector<std::string> given_ids;
    given_ids.reserve(given.size());
    for (const Environment& env : given) given_ids.push_back(env.id);
    return EnvironmentSet::create(std::move(all), std::move(given_ids), std::move(major_ids),
                                  std::move(minor_ids));
}

}  // namespace

std::string env_id_for(double e) {
    return on_grid(e) ? format_fixed(snap_if_on_grid(e), 2) : format_fixed(e, 6);
}

EnvironmentSet EnvironmentSet::create(std::vector<Environment> all,
                                      std::vector<std::string> given_ids,
                                      std::vector<std::string> major_ids,
                                      std::vector<std::string> minor_ids) {
    EnvironmentSet set;
    set.index_.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Environment& env = all[i];
        if (!(env.e >= -kErrorRateTolerance && env.e <= 1.0 + kErrorRateTolerance)) {
            throw InvalidInput("EnvironmentSet: flip probability out of [0,1] for '" + env.id +
                               "'");
        }
        if (!set.index_.emplace(env.id, i).second) {
            throw InvalidInput("EnvironmentSet: duplicate env_id '" + env.id + "'");
        }
    }

    auto require_known = [&](const std::vector<std::string>& ids, const char* what) {
        std::unordered_set<std::string> seen;
        for (const auto& id : ids) {
            if (!set.index_.contains(id)) {
                throw InvalidInput(std::string("EnvironmentSet: ") + what + " env '" + id +
                                   "' not in all_envs");
            }
            if (!seen.insert(id).second) {
                throw InvalidInput(std::string("EnvironmentSet: duplicate ") + what + " env '" +
                                   id + "'");
            }
        }
    };
    require_known(given_ids, "given");
    require_known(major_ids, "major");
    require_known(minor_ids, "minor");

    std::unordered_set<std::string> given_set(given_ids.begin(), given_ids.end());
    if (!major_ids.empty() || !minor_ids.empty()) {
        std::unordered_set<std::string> partition;
        for (const auto& id : major_ids) partition.insert(id);
        for (const auto& id : minor_ids) {
            if (!partition.insert(id).second) {
                throw InvalidInput("EnvironmentSet: env '" + id + "' in both major and minor");
            }
        }
        if (partition.size() != given_set.size() ||
            !std::all_of(given_ids.begin(), given_ids.end(),
                         [&](const std::string& id) { return partition.contains(id); })) {
            throw InvalidInput("EnvironmentSet: major and minor must partition the given set");
        }
        if (major_ids.size() < minor_ids.size()) {
            throw InvalidInput("EnvironmentSet: majority group smaller than minority group");
        }
    }

    set.all_ = std::move(all);
    set.given_ids_ = std::move(given_ids);
    set.major_ids_ = std::move(major_ids);
    set.minor_ids_ = std::move(minor_ids);
    return set;
}

std::vector<Environment> EnvironmentSet::given_envs() const {
    std::vector<Environment> envs;
    envs.reserve(given_ids_.size());
    for (const auto& id : given_ids_) envs.push_back(all_[index_.at(id)]);
    return envs;
}

std::vector<double> EnvironmentSet::given_es() const {
    std::vector<double> es;
    es.reserve(given_ids_.size());
    for (const auto& id : given_ids_) es.push_back(all_[index_.at(id)].e);
    return es;
}

double EnvironmentSet::e_of(const std::string& env_id) const {
    auto it = index_.find(env_id);
    if (it == index_.end()) throw InvalidInput("EnvironmentSet: unknown env_id '" + env_id + "'");
    return all_[it->second].e;
}

EnvironmentSet build_e_all(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("build_e_all: step must be in (0,1]");
    const double points = 1.0 / step;
    const long long n_steps = std::llround(points);
    if (n_steps < 1 || std::abs(static_cast<double>(n_steps) * step - 1.0) > 1e-12) {
        throw InvalidInput("build_e_all: step must divide 1 evenly");
    }

    int decimals = 0;
    for (; decimals <= 9; ++decimals) {
        double scaled = step * std::pow(10.0, decimals);
        if (std::abs(scaled - std::round(scaled)) <= 1e-9) break;
    }

    std::vector<Environment> all;
    all.reserve(static_cast<std::size_t>(n_steps) + 1);
    for (long long i = 0; i <= n_steps; ++i) {
        double e = static_cast<double>(i) / static_cast<double>(n_steps);
        all.push_back({format_fixed(e, decimals), e});
    }
    return EnvironmentSet::create(std::move(all), {}, {}, {});
}

ScaleRatio::ScaleRatio(int scale_in, int ratio_major_in, int ratio_minor_in)
    : scale(scale_in), ratio_major(ratio_major_in), ratio_minor(ratio_minor_in) {
    if (scale < 1) throw InvalidInput("ScaleRatio: scale must be >= 1");
    if (ratio_minor < 0) throw InvalidInput("ScaleRatio: ratio_minor must be >= 0");
    if (ratio_major < ratio_minor) {
        throw InvalidInput("ScaleRatio: ratio_major must be >= ratio_minor");
    }
}

EnvironmentSet build_given_srcmnist(const ScaleRatio& sr) {
    const int n_major = sr.ratio_major * sr.scale;
    const int n_minor = sr.ratio_minor * sr.scale;
    if (n_major == 0) throw InvalidInput("build_given_srcmnist: majority group is empty");

    std::vector<double> majors = evenly_spaced(0.8, 0.9, n_major);
    std::vector<double> minors =
        n_minor == 0 ? std::vector<double>{} : evenly_spaced(0.1, 0.2, n_minor);
    return assemble_with_grid(majors, minors);
}

EnvironmentSet fixed_given_set(FixedDataset dataset) {
    std::vector<double> given = dataset == FixedDataset::c_cats_dogs
                                    ? std::vector<double>{0.05, 0.10, 0.15, 0.20, 0.50}
                                    : std::vector<double>{0.50, 0.80, 0.85, 0.90, 0.95};

    std::vector<Environment> all = standard_grid();
    std::vector<std::string> given_ids;
    given_ids.reserve(given.size());
    for (double e : given) given_ids.push_back(env_id_for(e));
    return EnvironmentSet::create(std::move(all), std::move(given_ids), {}, {});
}

EnvironmentSet environment_set_from_values(std::span<const double> major_es,
                                           std::span<const double> minor_es) {
    return assemble_with_grid(std::vector<double>(major_es.begin(), major_es.end()),
                              std::vector<double>(minor_es.begin(), minor_es.end()));
}

CorruptedWorldConfig::CorruptedWorldConfig(int n_base_envs_in, int n_variants_in,
                                           std::vector<int> envs_pattern_in)
    : n_base_envs(n_base_envs_in), n_variants(n_variants_in),
      envs_pattern(std::move(envs_pattern_in)) {
    if (n_base_envs < 1) throw InvalidInput("CorruptedWorldConfig: n_base_envs must be >= 1");
    if (n_variants < 1) throw InvalidInput("CorruptedWorldConfig: n_variants must be >= 1");
    if (envs_pattern.size() != static_cast<std::size_t>(n_base_envs)) {
        throw InvalidInput("CorruptedWorldConfig: pattern length must equal n_base_envs");
    }
    for (int count : envs_pattern) {
        if (count < 0 || count > n_variants) {
            throw InvalidInput("CorruptedWorldConfig: pattern count must be in [0, n_variants]");
        }
    }
}

std::vector<std::string> sample_corrupted_given(const CorruptedWorldConfig& cfg,
                                                std::uint64_t seed) {
    std::vector<std::string> env_ids;
    for (int base = 0; base < cfg.n_base_envs; ++base) {
        const int count = cfg.envs_pattern[static_cast<std::size_t>(base)];
        if (count == 0) continue;

        RngStream rng = derive_stream(seed, kTagCorrupted, base);
        std::vector<int> variants(static_cast<std::size_t>(cfg.n_variants));
        std::iota(variants.begin(), variants.end(), 0);
        // partial Fisher-Yates: the first `count` slots end up a uniform
        // sample without replacement
        for (int t = 0; t < count; ++t) {
            std::size_t j = static_cast<std::size_t>(t) +
                            rng.next_below(static_cast<std::uint64_t>(cfg.n_variants - t));
            std::swap(variants[static_cast<std::size_t>(t)], variants[j]);
        }
        std::sort(variants.begin(), variants.begin() + count);
        for (int t = 0; t < count; ++t) {
            env_ids.push_back("base" + std::to_string(base) + ":variant" +
                              std::to_string(variants[static_cast<std::size_t>(t)]));
        }
    }
    return env_ids;
}

std::vector<AbstractSample> generate_environment(double e, std::int64_t n, std::uint64_t seed) {
    if (!(e >= -kErrorRateTolerance && e <= 1.0 + kErrorRateTolerance)) {
        throw InvalidInput("generate_environment: e must be in [0,1]");
    }
    if (n < 1) throw InvalidInput("generate_environment: n must be >= 1");
    e = std::clamp(e, 0.0, 1.0);

    std::vector<AbstractSample> samples(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream rng = derive_stream(seed, kTagSample, i);
        AbstractSample& s = samples[static_cast<std::size_t>(i)];
        s.invariant_feature = rng.bernoulli(0.5);
        s.label = s.invariant_feature != rng.bernoulli(0.25);
        s.spurious_feature = s.label != rng.bernoulli(e);
    }
    return samples;
}

double classify_and_score(std::span<const AbstractSample> samples, ClassifierRule rule) {
    if (samples.empty()) throw InvalidInput("classify_and_score: no samples");
    std::size_t wrong = 0;
    for (const AbstractSample& s : samples) {
        bool predicted = false;
        switch (rule) {
            case ClassifierRule::use_invariant: predicted = s.invariant_feature; break;
            case ClassifierRule::use_spurious: predicted = s.spurious_feature; break;
            case ClassifierRule::use_spurious_flipped: predicted = !s.spurious_feature; break;
        }
        if (predicted != s.label) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(samples.size());
}

AlgorithmOracle AlgorithmOracle::invariant() { return {Kind::invariant, 0.0, 0.0}; }

AlgorithmOracle AlgorithmOracle::spurious() { return {Kind::spurious, 1.0, 0.0}; }

AlgorithmOracle AlgorithmOracle::mixture(double lambda, double noise_std) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidInput("AlgorithmOracle::mixture: lambda must be in [0,1]");
    }
    if (!(noise_std >= 0.0)) {
        throw InvalidInput("AlgorithmOracle::mixture: noise_std must be >= 0");
    }
    return {Kind::mixture, lambda, noise_std};
}

std::string AlgorithmOracle::name() const {
    switch (kind_) {
        case Kind::invariant: return "invariant";
        case Kind::spurious: return "spurious";
        case Kind::mixture:
            return "mixture(lambda=" + format_fixed(lambda_, 2) +
                   ",noise=" + format_fixed(noise_std_, 3) + ")";
    }
    return "unknown";
}

double AlgorithmOracle::error(std::span<const double> training_es, double test_e,
                              RngStream& rng) const {
    if (!(test_e >= -kErrorRateTolerance && test_e <= 1.0 + kErrorRateTolerance)) {
        throw InvalidInput("AlgorithmOracle: test_e must be in [0,1]");
    }
    if (kind_ == Kind::invariant) return 0.25;

    if (training_es.empty()) {
        throw InvalidInput("AlgorithmOracle: training environments required");
    }
    double sum = 0.0;
    for (double e : training_es) {
        if (!(e >= -kErrorRateTolerance && e <= 1.0 + kErrorRateTolerance)) {
            throw InvalidInput("AlgorithmOracle: training e out of [0,1]");
        }
        sum += e;
    }
    // The learned color mapping follows the training majority: mostly
    // flipped training environments teach the anti-color rule, which errs
    // on low-e test environments.
    const double mean = sum / static_cast<double>(training_es.size());
    const double spurious_err = mean > 0.5 ? 1.0 - test_e : test_e;
    if (kind_ == Kind::spurious) return std::clamp(spurious_err, 0.0, 1.0);

    double value = lambda_ * spurious_err + (1.0 - lambda_) * 0.25;
    if (noise_std_ > 0.0) value += noise_std_ * rng.gaussian();
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace dgg
