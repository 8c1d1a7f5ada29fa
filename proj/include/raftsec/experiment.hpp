// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "raftsec/auth.hpp"
#include "raftsec/channel.hpp"

namespace raftsec::experiment {

inline constexpr int kSchemaVersion = 1;

enum class Scenario { coverage_vs_beta, coverage_vs_jam_area, coverage_vs_jam_distance, auth_errors_vs_lq, roc };
enum class OutputFormat { csv, json };

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view name);
/// The only sweep variable each scenario accepts.
std::string_view sweep_variable_for(Scenario s);

struct Sweep {
    std::string variable;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    /// start, start + step, ... up to stop (inclusive, with a 1e-9 step slack).
    std::vector<double> values() const;
};

struct AuthSettings {
    std::size_t followers = 5;
    std::size_t eves = 5;
    double lq_db = 10.0;
    double p_fa_target = 0.1;
    /// Fixed threshold; when absent it follows p_fa_target at each sigma.
    std::optional<double> epsilon_db;
    auth::EvePrior eve_prior;
    std::uint64_t realization_seed = auth::kDefaultRealizationSeed;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::coverage_vs_beta;
    channel::NetworkParams params = channel::reference_params();
    Sweep sweep;
    /// z2 - z1 held fixed by coverage_vs_jam_distance.
    double annulus_width = 50.0;
    AuthSettings auth;
    std::size_t n_trials = 100000;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    std::string output_path;
    OutputFormat output_format = OutputFormat::csv;
};

/// Invalid configuration; `diagnostics` holds one "line N: message" entry per problem.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

/// A sweep point could not be evaluated.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Command-line values that replace the file's.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> output_path;
    std::optional<std::string> format;
    std::optional<std::string> scenario;
    std::optional<unsigned> threads;
};

ExperimentConfig parse_config(std::string_view json_text, const Overrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

using Cell = std::variant<std::string, double>;

struct Table {
    Scenario scenario = Scenario::coverage_vs_beta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

/// Column names per scenario family.
const std::vector<std::string>& coverage_columns();
const std::vector<std::string>& auth_columns();
const std::vector<std::string>& roc_columns();

/// Evaluates every sweep point (concurrently when threads > 1). Rows come
/// back in sweep order.
Table run_table(const ExperimentConfig& config);

void write_table(const Table& table, OutputFormat format, std::ostream& out);

/// run_table + write_table to config.output_path.
Table run(const ExperimentConfig& config);

/// Short human-readable digest of a table.
std::string summarize(const Table& table);

}  // namespace raftsec::experiment
