// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "raftsec/consensus_sim.hpp"
#include "raftsec/coverage.hpp"
#include "raftsec/rng.hpp"

namespace raftsec::experiment {
namespace {

using json = nlohmann::json;

constexpr std::size_t kMaxSweepPoints = 100000;

struct ScenarioInfo {
    Scenario scenario;
    std::string_view name;
    std::string_view variable;
};

constexpr ScenarioInfo kScenarios[] = {
    {Scenario::coverage_vs_beta, "coverage_vs_beta", "beta_db"},
    {Scenario::coverage_vs_jam_area, "coverage_vs_jam_area", "z2"},
    {Scenario::coverage_vs_jam_distance, "coverage_vs_jam_distance", "z1"},
    {Scenario::auth_errors_vs_lq, "auth_errors_vs_lq", "lq_db"},
    {Scenario::roc, "roc", "p_fa"},
};

const ScenarioInfo& info(Scenario s) {
    for (const auto& i : kScenarios) {
        if (i.scenario == s) {
            return i;
        }
    }
    throw std::logic_error("unknown scenario");
}

bool is_coverage(Scenario s) {
    return s == Scenario::coverage_vs_beta || s == Scenario::coverage_vs_jam_area ||
           s == Scenario::coverage_vs_jam_distance;
}

// Validates a parsed document against the schema, collecting every problem
// with the line of the offending key.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    void error(std::initializer_list<std::string_view> path, const std::string& message) {
        diagnostics_.push_back(fmt::format("line {}: {}", line_of(path), message));
    }
    void error_at(std::size_t line, const std::string& message) {
        diagnostics_.push_back(fmt::format("line {}: {}", line, message));
    }

    std::size_t line_of(std::initializer_list<std::string_view> path) const {
        std::size_t pos = 0;
        std::size_t found = std::string_view::npos;
        for (auto key : path) {
            if (key.empty()) {
                continue;
            }
            const auto at = text_.find(fmt::format("\"{}\"", key), pos);
            if (at == std::string_view::npos) {
                break;
            }
            found = at;
            pos = at + 1;
        }
        if (found == std::string_view::npos) {
            return 1;
        }
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + found, '\n'));
    }

    void check_keys(const json& obj, std::string_view parent, std::initializer_list<std::string_view> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
                if (parent.empty()) {
                    error({it.key()}, fmt::format("unknown key \"{}\"", it.key()));
                } else {
                    error({parent, it.key()}, fmt::format("unknown key \"{}\" in \"{}\"", it.key(), parent));
                }
            }
        }
    }

    std::optional<double> number(const json& obj, std::string_view parent, std::string_view key) {
        const auto it = obj.find(std::string(key));
        if (it == obj.end() || it->is_null()) {
            return std::nullopt;
        }
        if (!it->is_number()) {
            error({parent, key}, fmt::format("\"{}\" must be a number", key));
            return std::nullopt;
        }
        const double v = it->get<double>();
        if (!std::isfinite(v)) {
            error({parent, key}, fmt::format("\"{}\" must be finite", key));
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::uint64_t> unsigned_integer(const json& obj, std::string_view parent, std::string_view key) {
        const auto it = obj.find(std::string(key));
        if (it == obj.end() || it->is_null()) {
            return std::nullopt;
        }
        if (!it->is_number_unsigned()) {
            error({parent, key}, fmt::format("\"{}\" must be a non-negative integer", key));
            return std::nullopt;
        }
        return it->get<std::uint64_t>();
    }

    std::optional<std::string> string(const json& obj, std::string_view parent, std::string_view key) {
        const auto it = obj.find(std::string(key));
        if (it == obj.end() || it->is_null()) {
            return std::nullopt;
        }
        if (!it->is_string()) {
            error({parent, key}, fmt::format("\"{}\" must be a string", key));
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    const json& object(const json& root, std::string_view key) {
        static const json empty = json::object();
        const auto it = root.find(std::string(key));
        if (it == root.end() || it->is_null()) {
            return empty;
        }
        if (!it->is_object()) {
            error({key}, fmt::format("\"{}\" must be an object", key));
            return empty;
        }
        return *it;
    }

    bool ok() const { return diagnostics_.empty(); }
    std::vector<std::string> take() { return std::move(diagnostics_); }

private:
    std::string_view text_;
    std::vector<std::string> diagnostics_;
};

void parse_network(Reader& rd, const json& net, ExperimentConfig& cfg) {
    rd.check_keys(net, "network",
                  {"p_leader_dbm", "p_follower_dbm", "p_jammer_dbm", "alpha", "beta_dl_db", "beta_ul_db",
                   "disk_radius_m", "mean_followers_in_disk", "rho_t", "rho_j_over_rho_t", "rho_j", "z1_m",
                   "z2_m"});
    auto& p = cfg.params;
    p.p_leader_dbm = rd.number(net, "network", "p_leader_dbm").value_or(p.p_leader_dbm);
    p.p_follower_dbm = rd.number(net, "network", "p_follower_dbm").value_or(p.p_follower_dbm);
    p.p_jammer_dbm = rd.number(net, "network", "p_jammer_dbm").value_or(p.p_jammer_dbm);
    p.alpha = rd.number(net, "network", "alpha").value_or(p.alpha);
    p.beta_dl_db = rd.number(net, "network", "beta_dl_db").value_or(p.beta_dl_db);
    p.beta_ul_db = rd.number(net, "network", "beta_ul_db").value_or(p.beta_ul_db);
    if (!(p.alpha > 2.0)) {
        rd.error({"network", "alpha"}, fmt::format("alpha = {} is invalid: the pathloss exponent must exceed 2", p.alpha));
    }

    const double radius = rd.number(net, "network", "disk_radius_m").value_or(p.follower_disk.radius());
    if (radius > 0.0) {
        p.follower_disk = geometry::DiskRegion(radius);
    } else {
        rd.error({"network", "disk_radius_m"}, "disk_radius_m must be positive");
    }

    const auto mean_followers = rd.number(net, "network", "mean_followers_in_disk");
    const auto rho_t = rd.number(net, "network", "rho_t");
    if (mean_followers && rho_t) {
        rd.error({"network", "rho_t"}, "give either rho_t or mean_followers_in_disk, not both");
    } else if (rho_t) {
        p.rho_t = *rho_t;
    } else if (mean_followers) {
        p.rho_t = *mean_followers / (std::numbers::pi * radius * radius);
    }
    if (!(p.rho_t > 0.0)) {
        rd.error({"network", rho_t ? "rho_t" : "mean_followers_in_disk"}, "follower intensity must be positive");
    }

    const auto ratio = rd.number(net, "network", "rho_j_over_rho_t");
    const auto rho_j = rd.number(net, "network", "rho_j");
    if (ratio && rho_j) {
        rd.error({"network", "rho_j"}, "give either rho_j or rho_j_over_rho_t, not both");
    } else if (rho_j) {
        p.rho_j = *rho_j;
    } else {
        p.rho_j = ratio.value_or(1.0) * p.rho_t;
    }
    if (!(p.rho_j >= 0.0)) {
        rd.error({"network", rho_j ? "rho_j" : "rho_j_over_rho_t"}, "jammer intensity must be non-negative");
    }

    const double z1 = rd.number(net, "network", "z1_m").value_or(p.jam_annulus.inner());
    const double z2 = rd.number(net, "network", "z2_m").value_or(p.jam_annulus.outer());
    if (!(z1 >= 0.0) || !(z1 < z2)) {
        rd.error({"network", "z1_m"}, fmt::format("jamming annulus needs 0 <= z1_m < z2_m (got z1_m = {}, z2_m = {})", z1, z2));
    } else {
        p.jam_annulus = geometry::AnnulusRegion(z1, z2);
    }
}

void parse_auth(Reader& rd, const json& a, ExperimentConfig& cfg) {
    rd.check_keys(a, "auth",
                  {"followers", "eves", "lq_db", "p_fa_target", "epsilon_db", "psi_min_db", "psi_max_db",
                   "realization_seed"});
    auto& s = cfg.auth;
    s.followers = rd.unsigned_integer(a, "auth", "followers").value_or(s.followers);
    s.eves = rd.unsigned_integer(a, "auth", "eves").value_or(s.eves);
    if (s.followers < 1 || s.eves < 1) {
        rd.error({"auth", s.followers < 1 ? "followers" : "eves"}, "followers and eves must be at least 1");
    }
    s.lq_db = rd.number(a, "auth", "lq_db").value_or(s.lq_db);
    s.p_fa_target = rd.number(a, "auth", "p_fa_target").value_or(s.p_fa_target);
    if (!(s.p_fa_target > 0.0 && s.p_fa_target < 1.0)) {
        rd.error({"auth", "p_fa_target"}, "p_fa_target must lie in (0, 1)");
    }
    s.epsilon_db = rd.number(a, "auth", "epsilon_db");
    if (s.epsilon_db && *s.epsilon_db < 0.0) {
        rd.error({"auth", "epsilon_db"}, "epsilon_db must be non-negative");
    }
    const auto fallback = auth::default_eve_prior(cfg.params.alpha > 2.0 ? cfg.params.alpha : 3.0,
                                                  cfg.params.follower_disk.radius());
    s.eve_prior.psi_min_db = rd.number(a, "auth", "psi_min_db").value_or(fallback.psi_min_db);
    s.eve_prior.psi_max_db = rd.number(a, "auth", "psi_max_db").value_or(fallback.psi_max_db);
    if (!(s.eve_prior.width() > 0.0)) {
        rd.error({"auth", "psi_max_db"}, "psi_min_db must be below psi_max_db");
    }
    s.realization_seed = rd.unsigned_integer(a, "auth", "realization_seed").value_or(s.realization_seed);
}

void parse_sweep(Reader& rd, const json& root, ExperimentConfig& cfg) {
    if (!root.contains("sweep")) {
        rd.error_at(1, "missing required object \"sweep\"");
        return;
    }
    const json& sw = rd.object(root, "sweep");
    rd.check_keys(sw, "sweep", {"variable", "start", "stop", "step", "annulus_width_m"});
    const auto expected = sweep_variable_for(cfg.scenario);
    cfg.sweep.variable = rd.string(sw, "sweep", "variable").value_or(std::string(expected));
    if (cfg.sweep.variable != expected) {
        rd.error({"sweep", "variable"},
                 fmt::format("scenario {} sweeps \"{}\", not \"{}\"", to_string(cfg.scenario), expected,
                             cfg.sweep.variable));
    }
    const auto start = rd.number(sw, "sweep", "start");
    const auto stop = rd.number(sw, "sweep", "stop");
    const auto step = rd.number(sw, "sweep", "step");
    if (!start || !stop || !step) {
        rd.error({"sweep"}, "sweep needs numeric start, stop and step");
        return;
    }
    cfg.sweep.start = *start;
    cfg.sweep.stop = *stop;
    cfg.sweep.step = *step;
    if (!(*step > 0.0)) {
        rd.error({"sweep", "step"}, "sweep step must be positive");
        return;
    }
    if (*start > *stop) {
        rd.error({"sweep", "start"}, "sweep start must not exceed stop");
        return;
    }
    if ((*stop - *start) / *step > static_cast<double>(kMaxSweepPoints)) {
        rd.error({"sweep", "step"}, "sweep has too many points");
        return;
    }
    cfg.annulus_width = rd.number(sw, "sweep", "annulus_width_m").value_or(cfg.annulus_width);
    if (!(cfg.annulus_width > 0.0)) {
        rd.error({"sweep", "annulus_width_m"}, "annulus_width_m must be positive");
    }

    const double z1 = cfg.params.jam_annulus.inner();
    switch (cfg.scenario) {
        case Scenario::roc:
            if (!(*start > 0.0 && *stop < 1.0)) {
                rd.error({"sweep", "start"}, "roc sweeps p_fa inside (0, 1)");
            }
            break;
        case Scenario::coverage_vs_jam_area:
            if (*start < z1) {
                rd.error({"sweep", "start"}, fmt::format("z2 sweep must start at or above z1_m = {} (annulus)", z1));
            }
            break;
        case Scenario::coverage_vs_jam_distance:
            if (*start < 0.0) {
                rd.error({"sweep", "start"}, "z1 sweep must be non-negative (annulus)");
            }
            break;
        default:
            break;
    }
}

Scenario parse_scenario(Reader& rd, const json& root, const Overrides& ov) {
    std::optional<std::string> name = ov.scenario;
    if (!name) {
        name = rd.string(root, "", "scenario");
    }
    if (!name) {
        rd.error_at(1, "missing required key \"scenario\"");
        return Scenario::coverage_vs_beta;
    }
    const auto s = scenario_from_string(*name);
    if (!s) {
        rd.error({"scenario"}, fmt::format("unknown scenario \"{}\"", *name));
        return Scenario::coverage_vs_beta;
    }
    return *s;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    return fmt::format("{:.12g}", v);
}

// ---- sweep evaluation -------------------------------------------------------

std::vector<Cell> coverage_row(const ExperimentConfig& cfg, double value, std::uint64_t seed, unsigned threads) {
    channel::NetworkParams p = cfg.params;
    switch (cfg.scenario) {
        case Scenario::coverage_vs_beta:
            p.beta_dl_db = value;
            p.beta_ul_db = value;
            break;
        case Scenario::coverage_vs_jam_area:
            if (value <= p.jam_annulus.inner()) {
                // Zero-area annulus: no jammers.
                p.rho_j = 0.0;
            } else {
                p.jam_annulus = geometry::AnnulusRegion(p.jam_annulus.inner(), value);
            }
            break;
        case Scenario::coverage_vs_jam_distance:
            p.jam_annulus = geometry::AnnulusRegion(value, value + cfg.annulus_width);
            break;
        default:
            throw std::logic_error("coverage_row: not a coverage scenario");
    }
    const auto analytic = coverage::coverage_joint(p);
    sim::TrialConfig trials{cfg.n_trials, seed, p, threads};
    const auto mc = sim::estimate_coverage(trials);
    const double gap = std::max({std::abs(analytic.p_dl - mc.p_dl), std::abs(analytic.p_ul - mc.p_ul),
                                 std::abs(analytic.p_joint - mc.p_joint)});
    const double ci = std::max({mc.ci_dl, mc.ci_ul, mc.ci_joint});
    return {std::string(info(cfg.scenario).variable), value, analytic.p_dl, analytic.p_ul, analytic.p_joint,
            mc.p_dl, mc.p_ul, mc.p_joint, ci, gap};
}

struct AuthContext {
    auth::Realization realization;
};

AuthContext make_auth_context(const ExperimentConfig& cfg) {
    return {auth::make_realization(cfg.auth.followers, cfg.auth.eves, cfg.params.follower_disk, cfg.params.alpha,
                                   cfg.auth.realization_seed)};
}

std::vector<Cell> auth_row(const ExperimentConfig& cfg, const AuthContext& ctx, double lq_db, std::uint64_t seed,
                           unsigned threads) {
    const double sigma = auth::lq_db_to_sigma(lq_db);
    const double eps = cfg.auth.epsilon_db ? *cfg.auth.epsilon_db : auth::threshold_for_pfa(cfg.auth.p_fa_target, sigma);
    const auto profile = auth::AuthProfile::equal_priors(ctx.realization.follower_pathloss_db, sigma, eps,
                                                         cfg.auth.eve_prior, cfg.auth.eves);
    const auto& eves = ctx.realization.eve_pathloss_db;
    const double p_fa_cf = auth::p_fa_closed_form(eps, sigma);
    const double p_md_cf = auth::p_md_closed_form(profile, eves).value;
    const double p_mc_cf = auth::p_mc_closed_form(profile);
    const double p_md_exp_cf = auth::p_md_expected(profile).value;

    const auto legit = sim::simulate_auth(profile, sim::AuthScenario::legit, cfg.n_trials, mix_seed(seed, 1), {}, threads);
    const auto eve = sim::simulate_auth(profile, sim::AuthScenario::eve, cfg.n_trials, mix_seed(seed, 2), eves, threads);
    const auto eve_uniform =
        sim::simulate_auth(profile, sim::AuthScenario::eve, cfg.n_trials, mix_seed(seed, 3), {}, threads);
    return {lq_db, eps, p_fa_cf, legit.p_fa, p_md_cf, eve.p_md, p_mc_cf, legit.p_mc, p_md_exp_cf, eve_uniform.p_md};
}

std::vector<Cell> roc_row(const ExperimentConfig& cfg, const AuthContext& ctx, double p_fa, std::uint64_t seed,
                          unsigned threads) {
    const double sigma = auth::lq_db_to_sigma(cfg.auth.lq_db);
    const auto base = auth::AuthProfile::equal_priors(ctx.realization.follower_pathloss_db, sigma, 0.0,
                                                      cfg.auth.eve_prior, cfg.auth.eves);
    const double grid[] = {p_fa};
    const auto point = auth::roc_curve(base, grid).front();
    const auto eve = sim::simulate_auth(base.with_epsilon(point.epsilon), sim::AuthScenario::eve, cfg.n_trials,
                                        mix_seed(seed, 3), {}, threads);
    return {p_fa, point.epsilon, point.p_d, 1.0 - eve.p_md};
}

}  // namespace

// ---- public API ----------------------------------------------------------------

std::string_view to_string(Scenario s) { return info(s).name; }

std::optional<Scenario> scenario_from_string(std::string_view name) {
    for (const auto& i : kScenarios) {
        if (i.name == name) {
            return i.scenario;
        }
    }
    return std::nullopt;
}

std::string_view sweep_variable_for(Scenario s) { return info(s).variable; }

std::vector<double> Sweep::values() const {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(start + static_cast<double>(k) * step);
    }
    return out;
}

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
          std::string s = "invalid configuration";
          for (const auto& d : diagnostics) {
              s += "\n  " + d;
          }
          return s;
      }()),
      diagnostics_(std::move(diagnostics)) {}

ExperimentConfig parse_config(std::string_view json_text, const Overrides& ov) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, json_text.size());
        const auto line = 1 + std::count(json_text.begin(), json_text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError({fmt::format("line {}: malformed JSON ({})", line, e.what())});
    }
    Reader rd(json_text);
    if (!root.is_object()) {
        throw ConfigError({"line 1: configuration must be a JSON object"});
    }
    rd.check_keys(root, "",
                  {"schema_version", "scenario", "network", "sweep", "auth", "n_trials", "master_seed", "threads",
                   "output"});
    if (const auto v = rd.unsigned_integer(root, "", "schema_version"); v && *v != kSchemaVersion) {
        rd.error({"schema_version"}, fmt::format("unsupported schema_version {} (expected {})", *v, kSchemaVersion));
    }

    ExperimentConfig cfg;
    cfg.scenario = parse_scenario(rd, root, ov);
    parse_network(rd, rd.object(root, "network"), cfg);
    parse_auth(rd, rd.object(root, "auth"), cfg);
    parse_sweep(rd, root, cfg);

    cfg.n_trials = rd.unsigned_integer(root, "", "n_trials").value_or(cfg.n_trials);
    cfg.master_seed = rd.unsigned_integer(root, "", "master_seed").value_or(cfg.master_seed);
    cfg.threads = static_cast<unsigned>(rd.unsigned_integer(root, "", "threads").value_or(cfg.threads));
    if (ov.trials) {
        cfg.n_trials = *ov.trials;
    }
    if (ov.seed) {
        cfg.master_seed = *ov.seed;
    }
    if (ov.threads) {
        cfg.threads = *ov.threads;
    }
    if (cfg.n_trials < 1) {
        rd.error({"n_trials"}, "n_trials must be at least 1");
    }

    const json& out = rd.object(root, "output");
    rd.check_keys(out, "output", {"path", "format"});
    cfg.output_path = ov.output_path ? *ov.output_path : rd.string(out, "output", "path").value_or("");
    const std::string format = ov.format ? *ov.format : rd.string(out, "output", "format").value_or("csv");
    if (format == "csv") {
        cfg.output_format = OutputFormat::csv;
    } else if (format == "json") {
        cfg.output_format = OutputFormat::json;
    } else {
        rd.error({"output", "format"}, fmt::format("unknown output format \"{}\" (csv or json)", format));
    }

    if (!rd.ok()) {
        throw ConfigError(rd.take());
    }
    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError({fmt::format("line {}: {}", rd.line_of({"network"}), e.what())});
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError({fmt::format("line 0: cannot open {}", path.string())});
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

const std::vector<std::string>& coverage_columns() {
    static const std::vector<std::string> cols{"sweep_var",     "sweep_value", "p_dl_analytic", "p_ul_analytic",
                                               "p_joint_analytic", "p_dl_mc",  "p_ul_mc",       "p_joint_mc",
                                               "ci_halfwidth",  "abs_gap"};
    return cols;
}

const std::vector<std::string>& auth_columns() {
    static const std::vector<std::string> cols{"lq_db",   "epsilon", "p_fa_cf", "p_fa_mc",        "p_md_cf",
                                               "p_md_mc", "p_mc_cf", "p_mc_mc", "p_md_exp_cf", "p_md_exp_mc"};
    return cols;
}

const std::vector<std::string>& roc_columns() {
    static const std::vector<std::string> cols{"p_fa", "epsilon", "p_d_cf", "p_d_mc"};
    return cols;
}

std::size_t Table::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::out_of_range(fmt::format("no column {}", name));
    }
    return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, std::string_view name) const {
    return std::get<double>(rows.at(row).at(column(name)));
}

Table run_table(const ExperimentConfig& cfg) {
    Table table;
    table.scenario = cfg.scenario;
    if (is_coverage(cfg.scenario)) {
        table.columns = coverage_columns();
    } else if (cfg.scenario == Scenario::auth_errors_vs_lq) {
        table.columns = auth_columns();
    } else {
        table.columns = roc_columns();
    }

    const auto values = cfg.sweep.values();
    std::optional<AuthContext> ctx;
    if (!is_coverage(cfg.scenario)) {
        ctx = make_auth_context(cfg);
    }
    const unsigned requested = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(requested, values.size()));
    // A single point gets the threads for its trials instead.
    const unsigned trial_threads = values.size() == 1 ? requested : 1;

    table.rows.resize(values.size());
    std::vector<std::exception_ptr> failures(values.size());
    auto evaluate = [&](std::size_t k) {
        const std::uint64_t seed = mix_seed(cfg.master_seed, k);
        try {
            if (is_coverage(cfg.scenario)) {
                table.rows[k] = coverage_row(cfg, values[k], seed, trial_threads);
            } else if (cfg.scenario == Scenario::auth_errors_vs_lq) {
                table.rows[k] = auth_row(cfg, *ctx, values[k], seed, trial_threads);
            } else {
                table.rows[k] = roc_row(cfg, *ctx, values[k], seed, trial_threads);
            }
        } catch (...) {
            failures[k] = std::current_exception();
        }
    };

    if (workers <= 1) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            evaluate(k);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < values.size(); k = next++) {
                    evaluate(k);
                }
            });
        }
    }

    for (std::size_t k = 0; k < values.size(); ++k) {
        if (failures[k]) {
            try {
                std::rethrow_exception(failures[k]);
            } catch (const std::exception& e) {
                throw NumericFailure(fmt::format("{} {} = {} (row {}): {}", to_string(cfg.scenario),
                                                 cfg.sweep.variable, format_number(values[k]), k, e.what()));
            }
        }
    }
    return table;
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << table.columns[c];
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "");
                std::visit(
                    [&](const auto& v) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>) {
                            out << v;
                        } else {
                            out << format_number(v);
                        }
                    },
                    row[c]);
            }
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["scenario"] = std::string(to_string(table.scenario));
    doc["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::visit([&](const auto& v) { obj[table.columns[c]] = v; }, row[c]);
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

Table run(const ExperimentConfig& cfg) {
    if (cfg.output_path.empty()) {
        throw ConfigError({"line 0: no output path (set output.path or pass --out)"});
    }
    auto table = run_table(cfg);
    std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError({fmt::format("line 0: cannot write {}", cfg.output_path)});
    }
    write_table(table, cfg.output_format, out);
    return table;
}

std::string summarize(const Table& table) {
    std::string s = fmt::format("{}: {} rows", to_string(table.scenario), table.rows.size());
    if (table.rows.empty()) {
        return s;
    }
    if (is_coverage(table.scenario)) {
        double gap = 0.0;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            gap = std::max(gap, table.number(r, "abs_gap"));
        }
        s += fmt::format(", p_joint_analytic {:.6f} .. {:.6f}, max |analytic - mc| = {:.4g}",
                         table.number(0, "p_joint_analytic"), table.number(table.rows.size() - 1, "p_joint_analytic"),
                         gap);
    } else if (table.scenario == Scenario::auth_errors_vs_lq) {
        const auto last = table.rows.size() - 1;
        s += fmt::format(", at lq_db = {}: p_fa {:.4g}, p_md {:.4g}, p_mc {:.4g}", table.number(last, "lq_db"),
                         table.number(last, "p_fa_cf"), table.number(last, "p_md_cf"), table.number(last, "p_mc_cf"));
    } else {
        s += fmt::format(", p_d_cf {:.4f} .. {:.4f}", table.number(0, "p_d_cf"),
                         table.number(table.rows.size() - 1, "p_d_cf"));
    }
    return s;
}

}  // namespace raftsec::experiment
