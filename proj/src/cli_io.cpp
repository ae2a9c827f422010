#include "dgg/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgg/numfmt.hpp"
#include "dgg/theory_lab.hpp"

namespace dgg {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kErrorCsvHeader = "record_type,algorithm,seed,env_id,error";
constexpr const char* kEnvsCsvHeader = "env_id,e,group";

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            return fields;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return std::move(buffer).str();
}

// Values pass through a 6-significant-digit filter before JSON emission so
// byte output matches the CSV path.
double round_sig6(double value) {
    if (!std::isfinite(value)) return value;
    return *parse_real(format_sig6(value));
}

double parse_error_rate(const std::string& field, std::size_t line_no) {
    auto value = parse_real(field);
    if (!value) throw ParseError("malformed error value '" + field + "'", line_no);
    if (*value < -kErrorRateTolerance || *value > 1.0 + kErrorRateTolerance) {
        throw ValidationError("error value " + field + " out of [0,1] (line " +
                              std::to_string(line_no) + ")");
    }
    return std::clamp(*value, 0.0, 1.0);
}

}  // namespace

ErrorMatrix parse_error_csv_text(std::string_view text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0] != kErrorCsvHeader) {
        throw ParseError(std::string("expected header '") + kErrorCsvHeader + "'", 1);
    }

    std::vector<ErrorRecord> records;
    std::set<std::tuple<std::string, std::string, long, std::string>> keys;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) continue;
        const std::vector<std::string> fields = split(lines[i], ',');
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
        }

        RecordType type;
        if (fields[0] == "loo") {
            type = RecordType::loo;
        } else if (fields[0] == "full") {
            type = RecordType::full;
        } else {
            throw ParseError("record_type must be 'loo' or 'full', got '" + fields[0] + "'",
                             line_no);
        }
        if (fields[1].empty()) throw ParseError("empty algorithm id", line_no);
        auto seed = parse_int(fields[2]);
        if (!seed) throw ParseError("malformed seed '" + fields[2] + "'", line_no);
        if (fields[3].empty()) throw ParseError("empty env_id", line_no);
        const double error = parse_error_rate(fields[4], line_no);

        if (!keys.emplace(fields[0], fields[1], static_cast<long>(*seed), fields[3]).second) {
            throw DuplicateRecord("duplicate record (" + fields[0] + ", " + fields[1] + ", " +
                                  fields[2] + ", " + fields[3] + ") at line " +
                                  std::to_string(line_no));
        }
        records.push_back({type, fields[1], static_cast<long>(*seed), fields[3], error});
    }
    return ErrorMatrix(std::move(records));
}

ErrorMatrix parse_error_csv(const std::filesystem::path& path) {
    return parse_error_csv_text(read_file(path));
}

std::string emit_error_csv(const ErrorMatrix& matrix) {
    std::vector<ErrorRecord> records = matrix.records();
    std::sort(records.begin(), records.end(), [](const ErrorRecord& a, const ErrorRecord& b) {
        return std::tie(a.type, a.algorithm, a.seed, a.env_id) <
               std::tie(b.type, b.algorithm, b.seed, b.env_id);
    });

    std::string out = kErrorCsvHeader;
    out += '\n';
    for (const ErrorRecord& rec : records) {
        out += to_string(rec.type);
        out += ',';
        out += rec.algorithm;
        out += ',';
        out += std::to_string(rec.seed);
        out += ',';
        out += rec.env_id;
        out += ',';
        out += format_sig6(rec.error);
        out += '\n';
    }
    return out;
}

EnvironmentSet parse_envs_csv_text(std::string_view text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0] != kEnvsCsvHeader) {
        throw ParseError(std::string("expected header '") + kEnvsCsvHeader + "'", 1);
    }

    std::map<std::string, double> e_by_id;
    std::vector<std::string> major_ids, minor_ids, all_only_ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) continue;
        const std::vector<std::string> fields = split(lines[i], ',');
        if (fields.size() != 3) {
            throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), line_no);
        }
        if (fields[0].empty()) throw ParseError("empty env_id", line_no);
        const double e = parse_error_rate(fields[1], line_no);
        if (!e_by_id.emplace(fields[0], e).second) {
            throw DuplicateRecord("duplicate env_id '" + fields[0] + "' at line " +
                                  std::to_string(line_no));
        }
        if (fields[2] == "major") {
            major_ids.push_back(fields[0]);
        } else if (fields[2] == "minor") {
            minor_ids.push_back(fields[0]);
        } else if (fields[2] == "all") {
            all_only_ids.push_back(fields[0]);
        } else {
            throw ParseError("group must be 'major', 'minor' or 'all', got '" + fields[2] + "'",
                             line_no);
        }
    }

    // Without explicit `all` rows the complete set defaults to the
    // standard grid (plus the given envs).
    if (all_only_ids.empty()) {
        const EnvironmentSet grid = build_e_all(0.01);
        for (const Environment& env : grid.all_envs()) {
            e_by_id.emplace(env.id, env.e);
        }
    }

    std::vector<Environment> all;
    all.reserve(e_by_id.size());
    for (const auto& [id, e] : e_by_id) all.push_back({id, e});
    std::sort(all.begin(), all.end(), [](const Environment& a, const Environment& b) {
        return std::tie(a.e, a.id) < std::tie(b.e, b.id);
    });

    std::vector<std::string> given_ids;
    for (const auto& id : minor_ids) given_ids.push_back(id);
    for (const auto& id : major_ids) given_ids.push_back(id);
    std::sort(given_ids.begin(), given_ids.end(), [&](const std::string& a, const std::string& b) {
        return std::tie(e_by_id.at(a), a) < std::tie(e_by_id.at(b), b);
    });
    return EnvironmentSet::create(std::move(all), std::move(given_ids), std::move(major_ids),
                                  std::move(minor_ids));
}

EnvironmentSet parse_envs_csv(const std::filesystem::path& path) {
    return parse_envs_csv_text(read_file(path));
}

std::string emit_envs_csv(const EnvironmentSet& set, bool include_all) {
    const std::set<std::string> minor(set.minor_ids().begin(), set.minor_ids().end());
    const std::set<std::string> given(set.given_ids().begin(), set.given_ids().end());

    std::string out = kEnvsCsvHeader;
    out += '\n';
    auto emit_row = [&](const Environment& env, const char* group) {
        out += env.id;
        out += ',';
        out += format_sig6(env.e);
        out += ',';
        out += group;
        out += '\n';
    };

    // An unpartitioned given set serializes as all-major; the schema has
    // no dedicated group for it.
    for (const Environment& env : set.given_envs()) {
        emit_row(env, minor.contains(env.id) ? "minor" : "major");
    }
    if (include_all) {
        for (const Environment& env : set.all_envs()) {
            if (!given.contains(env.id)) emit_row(env, "all");
        }
    }
    return out;
}

std::string emit_report(const MeasureReport& report, ReportFormat format) {
    std::vector<MeasureRow> rows = report.rows;
    std::sort(rows.begin(), rows.end(), [](const MeasureRow& a, const MeasureRow& b) {
        return std::tie(a.algorithm, a.seed) < std::tie(b.algorithm, b.seed);
    });

    if (format == ReportFormat::csv) {
        std::string out = "algorithm,seed,average,worst_gap,worst_only,gap_only,ideal\n";
        for (const MeasureRow& row : rows) {
            out += row.algorithm;
            out += ',';
            out += std::to_string(row.seed);
            out += ',';
            out += format_sig6(row.average);
            out += ',';
            out += format_sig6(row.worst_gap);
            out += ',';
            out += format_sig6(row.worst_only);
            out += ',';
            out += format_sig6(row.gap_only);
            out += ',';
            if (row.ideal) out += format_sig6(*row.ideal);
            out += '\n';
        }
        return out;
    }

    ordered_json doc = ordered_json::array();
    for (const MeasureRow& row : rows) {
        ordered_json item;
        item["algorithm"] = row.algorithm;
        item["seed"] = row.seed;
        item["average"] = round_sig6(row.average);
        item["worst_gap"] = round_sig6(row.worst_gap);
        item["worst_only"] = round_sig6(row.worst_only);
        item["gap_only"] = round_sig6(row.gap_only);
        if (row.ideal) {
            item["ideal"] = round_sig6(*row.ideal);
        } else {
            item["ideal"] = nullptr;
        }
        doc.push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

std::string emit_report(const StudyResult& result, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::string out = "measure,rho_mean,rho_std,tau_mean,tau_std,n_seeds,excluded_seeds\n";
        for (const CorrelationSummary& summary : result.correlations) {
            out += to_string(summary.measure);
            out += ',';
            if (summary.n_seeds > 0) out += format_sig6(summary.rho_mean);
            out += ',';
            if (summary.n_seeds > 0) out += format_sig6(summary.rho_std);
            out += ',';
            if (summary.n_seeds > 0) out += format_sig6(summary.tau_mean);
            out += ',';
            if (summary.n_seeds > 0) out += format_sig6(summary.tau_std);
            out += ',';
            out += std::to_string(summary.n_seeds);
            out += ',';
            out += std::to_string(summary.excluded_seeds);
            out += '\n';
        }
        return out;
    }

    ordered_json doc;
    doc["mode"] = result.mode == CorrelationMode::per_seed ? "per_seed" : "pooled";
    doc["measures"] = ordered_json::array();
    for (const CorrelationSummary& summary : result.correlations) {
        ordered_json item;
        item["measure"] = to_string(summary.measure);
        if (summary.n_seeds > 0) {
            item["rho_mean"] = round_sig6(summary.rho_mean);
            item["rho_std"] = round_sig6(summary.rho_std);
            item["tau_mean"] = round_sig6(summary.tau_mean);
            item["tau_std"] = round_sig6(summary.tau_std);
        } else {
            item["rho_mean"] = nullptr;
            item["rho_std"] = nullptr;
            item["tau_mean"] = nullptr;
            item["tau_std"] = nullptr;
        }
        item["n_seeds"] = summary.n_seeds;
        item["excluded_seeds"] = summary.excluded_seeds;
        doc["measures"].push_back(std::move(item));
    }

    if (!result.selections.empty()) {
        ordered_json per_seed = ordered_json::array();
        for (std::size_t si = 0; si < result.seeds.size(); ++si) {
            ordered_json entry;
            entry["seed"] = result.seeds[si];
            entry["ideal_best"] = result.selections.front().per_seed[si].ideal_best;
            ordered_json by_measure;
            for (const SelectionSummary& selection : result.selections) {
                const SelectionRow& row = selection.per_seed[si];
                by_measure[to_string(selection.measure)] = {
                    {"selected", row.selected}, {"degradation", round_sig6(row.degradation)}};
            }
            entry["by_measure"] = std::move(by_measure);
            per_seed.push_back(std::move(entry));
        }

        ordered_json seed_mean;
        seed_mean["ideal_best"] = result.selections.front().mean_ideal_best;
        ordered_json by_measure;
        for (const SelectionSummary& selection : result.selections) {
            by_measure[to_string(selection.measure)] = {
                {"selected", selection.mean_selected},
                {"degradation", round_sig6(selection.mean_degradation)}};
        }
        seed_mean["by_measure"] = std::move(by_measure);

        doc["selection"] = {{"per_seed", std::move(per_seed)},
                            {"seed_mean", std::move(seed_mean)}};
    }
    return doc.dump(2) + "\n";
}

namespace {

std::pair<int, int> parse_ratio(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() == 2) {
        auto major = parse_int(parts[0]);
        auto minor = parse_int(parts[1]);
        if (major && minor && *major >= 0 && *minor >= 0) {
            return {static_cast<int>(*major), static_cast<int>(*minor)};
        }
    }
    throw InvalidInput("ratio must look like MAJOR:MINOR, got '" + text + "'");
}

std::vector<long> parse_seed_spec(const std::string& text) {
    std::vector<long> seeds;
    for (const std::string& token : split(text, ',')) {
        const std::size_t dash = token.find('-', 1);  // allow a leading minus
        if (dash == std::string::npos) {
            auto value = parse_int(token);
            if (!value) throw InvalidInput("malformed seed '" + token + "'");
            seeds.push_back(static_cast<long>(*value));
            continue;
        }
        auto lo = parse_int(token.substr(0, dash));
        auto hi = parse_int(token.substr(dash + 1));
        if (!lo || !hi || *hi < *lo) throw InvalidInput("malformed seed range '" + token + "'");
        for (long long s = *lo; s <= *hi; ++s) seeds.push_back(static_cast<long>(s));
    }
    if (seeds.empty()) throw InvalidInput("no seeds given");
    return seeds;
}

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> lambdas;
    for (const std::string& token : split(text, ',')) {
        auto value = parse_real(token);
        if (!value || *value < 0.0 || *value > 1.0) {
            throw InvalidInput("lambda values must be in [0,1], got '" + token + "'");
        }
        lambdas.push_back(*value);
    }
    if (lambdas.empty()) throw InvalidInput("no lambda values given");
    return lambdas;
}

// CLI11 validator adapter: exercise the parser so malformed values fail at
// usage time (exit 2) instead of surfacing later as validation errors.
template <class Parser>
CLI::Validator make_validator(Parser parser, const std::string& name) {
    return CLI::Validator(
        [parser](std::string& input) -> std::string {
            try {
                parser(input);
                return {};
            } catch (const Error& e) {
                return e.what();
            }
        },
        name);
}

std::string produce_output(const RunConfig& cfg) {
    switch (cfg.mode) {
        case RunMode::envs: {
            const EnvironmentSet set =
                build_given_srcmnist(ScaleRatio(cfg.scale, cfg.ratio_major, cfg.ratio_minor));
            return emit_envs_csv(set, cfg.include_all);
        }
        case RunMode::measure: {
            if (!cfg.input_path) throw InvalidInput("measure: --input required");
            const MeasureReport report = compute_report(parse_error_csv(*cfg.input_path));
            return emit_report(report, cfg.format);
        }
        case RunMode::correlate: {
            if (!cfg.input_path) throw InvalidInput("correlate: --input required");
            const MeasureReport report = compute_report(parse_error_csv(*cfg.input_path));
            const StudyResult result = correlation_study(
                report, cfg.pooled ? CorrelationMode::pooled : CorrelationMode::per_seed);
            return emit_report(result, cfg.format);
        }
        case RunMode::simulate_lemma: {
            const UniformErrorModel model(cfg.model_a, cfg.model_b);
            std::string out = "k,closed_mean,closed_variance,mc_mean,mc_variance,trials,seed\n";
            for (int k : cfg.k_values) {
                const MaxOrderStats closed = lemma_closed_form(model, k);
                const MaxOrderStats mc = lemma_monte_carlo(model, k, cfg.trials, cfg.seed);
                out += std::to_string(k) + ',' + format_sig6(closed.mean) + ',' +
                       format_sig6(closed.variance) + ',' + format_sig6(mc.mean) + ',' +
                       format_sig6(mc.variance) + ',' + std::to_string(cfg.trials) + ',' +
                       std::to_string(cfg.seed) + '\n';
            }
            return out;
        }
        case RunMode::simulate_theorem1: {
            const UniformErrorModel model(cfg.model_a, cfg.model_b);
            const std::vector<ResidualPoint> residuals =
                theorem1_residual(model, cfg.n_grid, cfg.trials, cfg.seed);
            std::string out = "n,mean_abs_residual,coverage,delta\n";
            for (const ResidualPoint& point : residuals) {
                const double coverage = chebyshev_coverage(
                    ChebyshevTrialConfig(point.n, cfg.delta, cfg.trials, cfg.seed), model);
                out += std::to_string(point.n) + ',' + format_sig6(point.mean_abs_residual) +
                       ',' + format_sig6(coverage) + ',' + format_sig6(cfg.delta) + '\n';
            }
            return out;
        }
        case RunMode::simulate_theorem2: {
            const DecreasingRangeConfig config(
                cfg.n_envs, UniformErrorModel(cfg.model_a, cfg.model_b), cfg.trials, cfg.seed);
            const BoundCheckResult result = theorem2_bound_check(config);
            std::string out = "n,a,b,trials,violations\n";
            out += std::to_string(cfg.n_envs) + ',' + format_sig6(cfg.model_a) + ',' +
                   format_sig6(cfg.model_b) + ',' + std::to_string(result.trials) + ',' +
                   std::to_string(result.violations) + '\n';
            return out;
        }
        case RunMode::bench: {
            const EnvironmentSet set =
                cfg.envs_file
                    ? parse_envs_csv(*cfg.envs_file)
                    : build_given_srcmnist(ScaleRatio(cfg.scale, cfg.ratio_major,
                                                      cfg.ratio_minor));
            std::vector<std::pair<std::string, AlgorithmOracle>> algorithms;
            algorithms.reserve(cfg.lambdas.size());
            for (double lambda : cfg.lambdas) {
                algorithms.emplace_back("lam_" + format_sig6(lambda),
                                        AlgorithmOracle::mixture(lambda, cfg.noise));
            }
            const ErrorMatrix matrix = evaluate_oracles(set, algorithms, cfg.seeds);
            const StudyResult result = correlation_study(
                compute_report(matrix),
                cfg.pooled ? CorrelationMode::pooled : CorrelationMode::per_seed);
            return emit_report(result, cfg.format);
        }
    }
    throw InvalidInput("unknown run mode");
}

}  // namespace

int run_config(const RunConfig& cfg, std::ostream& out) {
    const std::string bytes = produce_output(cfg);
    if (cfg.output_path) {
        std::ofstream file(*cfg.output_path, std::ios::binary);
        if (!file) throw IoError("cannot open '" + *cfg.output_path + "' for writing");
        file << bytes;
        if (!file) throw IoError("failed writing '" + *cfg.output_path + "'");
    } else {
        out << bytes;
    }
    return 0;
}

int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string ratio_text = "5:1";
    std::string seeds_text = "0,1,2";
    std::string lambdas_text = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    std::string format_text = "csv";
    std::string input_text, output_text, envs_file_text;

    CLI::App app{"evaluation measures for domain generalization", "dg_gauge"};
    app.require_subcommand(1);

    const auto ratio_validator = make_validator(parse_ratio, "RATIO");
    const auto seeds_validator = make_validator(parse_seed_spec, "SEEDS");
    const auto lambdas_validator = make_validator(parse_lambda_list, "LAMBDAS");
    const auto format_validator = CLI::IsMember({"csv", "json"});

    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("-o,--output", output_text, "write to this file instead of stdout");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("-f,--format", format_text, "output format")
            ->check(format_validator)
            ->capture_default_str();
    };

    CLI::App* envs_cmd = app.add_subcommand("envs", "print a synthetic given-environment set");
    envs_cmd->add_option("--scale", cfg.scale, "scale factor of the given set")->required();
    envs_cmd->add_option("--ratio", ratio_text, "majority:minority ratio, e.g. 4:1")
        ->required()
        ->check(ratio_validator);
    envs_cmd->add_flag("--all", cfg.include_all, "also list the full environment grid");
    add_output(envs_cmd);

    CLI::App* measure_cmd =
        app.add_subcommand("measure", "compute evaluation measures from an error-matrix CSV");
    measure_cmd->add_option("-i,--input", input_text, "errors.csv path")->required();
    add_format(measure_cmd);
    add_output(measure_cmd);

    CLI::App* correlate_cmd = app.add_subcommand(
        "correlate", "correlate practical measures with the ideal measure across algorithms");
    correlate_cmd->add_option("-i,--input", input_text, "errors.csv path")->required();
    correlate_cmd->add_flag("--pooled", cfg.pooled,
                            "pool all (algorithm, seed) pairs into one sample");
    add_format(correlate_cmd);
    add_output(correlate_cmd);

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo checks of the order-statistics results");
    simulate_cmd->require_subcommand(1);

    CLI::App* lemma_cmd =
        simulate_cmd->add_subcommand("lemma", "closed form vs Monte Carlo max-of-uniforms");
    lemma_cmd->add_option("--a", cfg.model_a, "lower endpoint")->capture_default_str();
    lemma_cmd->add_option("--b", cfg.model_b, "upper endpoint")->capture_default_str();
    cfg.k_values = {1, 2, 5, 10, 50};
    lemma_cmd->add_option("--k", cfg.k_values, "sample counts")
        ->delimiter(',')
        ->capture_default_str();
    cfg.trials = 1000000;
    lemma_cmd->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
    lemma_cmd->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    add_output(lemma_cmd);

    CLI::App* theorem1_cmd = simulate_cmd->add_subcommand(
        "theorem1", "residual decay and Chebyshev coverage of the scaled worst error");
    theorem1_cmd->add_option("--a", cfg.model_a, "lower endpoint")->capture_default_str();
    theorem1_cmd->add_option("--b", cfg.model_b, "upper endpoint")->capture_default_str();
    cfg.n_grid = {5, 10, 20, 40};
    theorem1_cmd->add_option("--n-grid", cfg.n_grid, "environment counts")
        ->delimiter(',')
        ->capture_default_str();
    theorem1_cmd->add_option("--delta", cfg.delta, "confidence parameter in (0,1)")
        ->capture_default_str();
    theorem1_cmd->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
    theorem1_cmd->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    add_output(theorem1_cmd);

    CLI::App* theorem2_cmd = simulate_cmd->add_subcommand(
        "theorem2", "violation count of the worst+gap upper bound under the range assumption");
    theorem2_cmd->add_option("--n", cfg.n_envs, "given-environment count (>= 3)")
        ->capture_default_str();
    theorem2_cmd->add_option("--a", cfg.model_a, "lower endpoint")->capture_default_str();
    theorem2_cmd->add_option("--b", cfg.model_b, "upper endpoint")->capture_default_str();
    theorem2_cmd->add_option("--trials", cfg.trials, "accepted tuples to check")
        ->capture_default_str();
    theorem2_cmd->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    add_output(theorem2_cmd);

    CLI::App* bench_cmd = app.add_subcommand(
        "bench", "synthetic correlation study with a mixture-oracle family");
    bench_cmd->add_option("--scale", cfg.scale, "scale factor")->capture_default_str();
    bench_cmd->add_option("--ratio", ratio_text, "majority:minority ratio")
        ->check(ratio_validator)
        ->capture_default_str();
    bench_cmd->add_option("--lambdas", lambdas_text, "mixture weights, comma separated")
        ->check(lambdas_validator)
        ->capture_default_str();
    bench_cmd->add_option("--noise", cfg.noise, "oracle noise std")->capture_default_str();
    bench_cmd->add_option("--seeds", seeds_text, "seed list, e.g. 0,1,2 or 0-99")
        ->check(seeds_validator)
        ->capture_default_str();
    bench_cmd->add_option("--envs-file", envs_file_text,
                          "envs.csv describing the given environments (overrides scale/ratio)");
    bench_cmd->add_flag("--pooled", cfg.pooled,
                        "pool all (algorithm, seed) pairs into one sample");
    add_format(bench_cmd);
    add_output(bench_cmd);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(envs_cmd)) {
            cfg.mode = RunMode::envs;
        } else if (app.got_subcommand(measure_cmd)) {
            cfg.mode = RunMode::measure;
        } else if (app.got_subcommand(correlate_cmd)) {
            cfg.mode = RunMode::correlate;
        } else if (app.got_subcommand(simulate_cmd)) {
            if (simulate_cmd->got_subcommand(lemma_cmd)) {
                cfg.mode = RunMode::simulate_lemma;
            } else if (simulate_cmd->got_subcommand(theorem1_cmd)) {
                cfg.mode = RunMode::simulate_theorem1;
            } else {
                cfg.mode = RunMode::simulate_theorem2;
            }
        } else {
            cfg.mode = RunMode::bench;
        }

        std::tie(cfg.ratio_major, cfg.ratio_minor) = parse_ratio(ratio_text);
        cfg.seeds = parse_seed_spec(seeds_text);
        cfg.lambdas = parse_lambda_list(lambdas_text);
        cfg.format = format_text == "json" ? ReportFormat::json : ReportFormat::csv;
        if (!input_text.empty()) cfg.input_path = input_text;
        if (!output_text.empty()) cfg.output_path = output_text;
        if (!envs_file_text.empty()) cfg.envs_file = envs_file_text;

        return run_config(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace dgg
