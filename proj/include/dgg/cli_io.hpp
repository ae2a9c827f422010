#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dgg/harness.hpp"
#include "dgg/synthetic_worlds.hpp"

namespace dgg {

// errors.csv: header `record_type,algorithm,seed,env_id,error`,
// record_type in {loo, full}, error a decimal in [0,1].
ErrorMatrix parse_error_csv(const std::filesystem::path& path);
ErrorMatrix parse_error_csv_text(std::string_view text);

std::string emit_error_csv(const ErrorMatrix& matrix);

// envs.csv: header `env_id,e,group`, group in {major, minor, all}. Given
// environments are the major/minor rows; `all` rows extend the complete
// set beyond them. Files without `all` rows get the standard 101-point
// grid as the complete set.
EnvironmentSet parse_envs_csv(const std::filesystem::path& path);
EnvironmentSet parse_envs_csv_text(std::string_view text);

std::string emit_envs_csv(const EnvironmentSet& set, bool include_all);

enum class ReportFormat { csv, json };

// Deterministic bytes: fixed row order (algorithm, then seed), reals at 6
// significant digits.
std::string emit_report(const MeasureReport& report, ReportFormat format);
std::string emit_report(const StudyResult& result, ReportFormat format);

enum class RunMode { measure, correlate, simulate_lemma, simulate_theorem1, simulate_theorem2,
                     bench, envs };

// Everything the CLI surface can ask for, in one bag.
struct RunConfig {
    RunMode mode = RunMode::envs;
    std::optional<std::string> input_path;
    std::optional<std::string> output_path;
    ReportFormat format = ReportFormat::csv;

    // envs / bench
    int scale = 1;
    int ratio_major = 5;
    int ratio_minor = 1;
    bool include_all = false;
    std::optional<std::string> envs_file;

    // bench oracle family
    std::vector<double> lambdas;
    double noise = 0.0;
    std::vector<long> seeds;
    bool pooled = false;

    // simulate
    double model_a = 0.0;
    double model_b = 1.0;
    std::vector<int> k_values;
    std::vector<int> n_grid;
    int n_envs = 10;
    double delta = 0.5;
    std::int64_t trials = 100000;
    std::uint64_t seed = 0;
};

int run_config(const RunConfig& config, std::ostream& out);

// Parses argv-style arguments (without the program name), runs the chosen
// subcommand, and maps failures to exit codes: 0 success, 1 validation
// error, 2 usage error.
int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dgg
