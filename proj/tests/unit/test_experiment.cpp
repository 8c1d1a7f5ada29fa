// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "raftsec/experiment.hpp"

using namespace raftsec::experiment;

namespace {

const std::string kConfigDir = RAFTSEC_CONFIG_DIR;

std::string diagnostics_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        std::string all;
        for (const auto& d : e.diagnostics()) {
            all += d + "\n";
        }
        return all;
    }
    return {};
}

std::string render(const Table& t, OutputFormat f) {
    std::ostringstream out;
    write_table(t, f, out);
    return out.str();
}

}  // namespace

TEST(Config, ShippedDefaults) {
    const auto cfg = load_config(kConfigDir + "/reference_defaults.json");
    EXPECT_EQ(cfg.scenario, Scenario::coverage_vs_beta);
    EXPECT_EQ(cfg.sweep.values().size(), 16u);
    EXPECT_EQ(cfg.params.alpha, 3.0);
    EXPECT_NEAR(cfg.params.rho_t * 3.141592653589793 * 250000.0, 15.0, 1e-12);
    EXPECT_EQ(cfg.params.rho_j, cfg.params.rho_t);
    EXPECT_EQ(cfg.params.jam_annulus.outer(), 300.0);
}

TEST(Config, AllShippedFilesValidate) {
    for (const char* f : {"jam_area.json", "jam_distance_beta_m30.json", "jam_distance_beta_m20.json",
                          "jam_distance_beta_m10.json", "jam_distance_beta_0.json", "auth_vs_lq.json",
                          "roc_lq10.json"}) {
        EXPECT_NO_THROW(load_config(kConfigDir + "/" + f)) << f;
    }
}

TEST(Config, RejectsInvertedAnnulus) {
    const auto d = diagnostics_of(R"({
  "scenario": "coverage_vs_beta",
  "network": { "z1_m": 200, "z2_m": 100 },
  "sweep": { "start": -30, "stop": 0, "step": 2 }
})");
    EXPECT_NE(d.find("annulus"), std::string::npos) << d;
    EXPECT_NE(d.find("line 3"), std::string::npos) << d;
}

TEST(Config, RejectsAlphaTwo) {
    const auto d = diagnostics_of(R"({
  "scenario": "coverage_vs_beta",
  "network": {
    "alpha": 2
  },
  "sweep": { "start": -30, "stop": 0, "step": 2 }
})");
    EXPECT_NE(d.find("line 4"), std::string::npos) << d;
    EXPECT_NE(d.find("alpha"), std::string::npos) << d;
}

TEST(Config, CollectsEveryProblem) {
    const auto d = diagnostics_of(R"({
  "scenario": "roc",
  "sweep": { "variable": "beta_db", "start": 0.1, "stop": 0.9, "step": 0.1 },
  "threads": -1,
  "colour": "blue"
})");
    EXPECT_NE(d.find("line 3"), std::string::npos) << d;
    EXPECT_NE(d.find("line 4"), std::string::npos) << d;
    EXPECT_NE(d.find("line 5: unknown key \"colour\""), std::string::npos) << d;
}

TEST(Config, SweepBounds) {
    EXPECT_NE(diagnostics_of(R"({"scenario": "coverage_vs_beta", "sweep": {"start": 0, "stop": -1, "step": 1}})"), "");
    EXPECT_NE(diagnostics_of(R"({"scenario": "coverage_vs_beta", "sweep": {"start": 0, "stop": 1, "step": 0}})"), "");
    EXPECT_NE(diagnostics_of(R"({"scenario": "roc", "sweep": {"start": 0, "stop": 0.5, "step": 0.1}})"), "");
    EXPECT_NE(diagnostics_of(R"({"scenario": "coverage_vs_beta"})"), "");
    EXPECT_NE(diagnostics_of(R"({"scenario": "nope", "sweep": {"start": 0, "stop": 1, "step": 1}})"), "");
    EXPECT_EQ(diagnostics_of(R"({"scenario": "coverage_vs_beta", "sweep": {"start": 0, "stop": 1, "step": 1}})"), "");
}

TEST(Config, MalformedJsonHasLine) {
    const auto d = diagnostics_of("{\n  \"scenario\": \"roc\",\n  \"sweep\": {\n}");
    EXPECT_NE(d.find("line 4"), std::string::npos) << d;
}

TEST(Config, Overrides) {
    Overrides ov;
    ov.seed = 99;
    ov.trials = 123;
    ov.format = "json";
    ov.output_path = "/tmp/x.json";
    const auto cfg = load_config(kConfigDir + "/reference_defaults.json", ov);
    EXPECT_EQ(cfg.master_seed, 99u);
    EXPECT_EQ(cfg.n_trials, 123u);
    EXPECT_EQ(cfg.output_format, OutputFormat::json);
    EXPECT_EQ(cfg.output_path, "/tmp/x.json");
}

TEST(Sweep, InclusiveStop) {
    EXPECT_EQ((Sweep{"beta_db", -30.0, 0.0, 2.0}.values().size()), 16u);
    EXPECT_EQ((Sweep{"z2", 0.0, 300.0, 20.0}.values().size()), 16u);
    EXPECT_EQ((Sweep{"p_fa", 0.01, 0.99, 0.01}.values().size()), 99u);
}

TEST(Run, NoJammersGivesUnitAnalytics) {
    auto cfg = parse_config(R"({
  "scenario": "coverage_vs_beta",
  "network": { "rho_j": 0 },
  "sweep": { "start": -30, "stop": 0, "step": 10 },
  "n_trials": 200
})");
    const auto t = run_table(cfg);
    ASSERT_EQ(t.rows.size(), 4u);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        EXPECT_NEAR(t.number(r, "p_dl_analytic"), 1.0, 1e-8);
        EXPECT_NEAR(t.number(r, "p_ul_analytic"), 1.0, 1e-8);
        EXPECT_NEAR(t.number(r, "p_joint_analytic"), 1.0, 1e-8);
        EXPECT_EQ(t.number(r, "p_joint_mc"), 1.0);
    }
}

TEST(Run, CsvSchema) {
    auto cfg = parse_config(R"({"scenario": "coverage_vs_jam_area", "sweep": {"start": 0, "stop": 40, "step": 20},
                                "n_trials": 500})");
    const auto csv = render(run_table(cfg), OutputFormat::csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "sweep_var,sweep_value,p_dl_analytic,p_ul_analytic,p_joint_analytic,p_dl_mc,p_ul_mc,p_joint_mc,"
              "ci_halfwidth,abs_gap");
    EXPECT_NE(csv.find("\nz2,0,1,1,1,1,1,1,0,"), std::string::npos) << csv;

    cfg = parse_config(R"({"scenario": "auth_errors_vs_lq", "sweep": {"start": 10, "stop": 10, "step": 1},
                           "n_trials": 500})");
    const auto auth_csv = render(run_table(cfg), OutputFormat::csv);
    EXPECT_EQ(auth_csv.substr(0, auth_csv.find('\n')),
              "lq_db,epsilon,p_fa_cf,p_fa_mc,p_md_cf,p_md_mc,p_mc_cf,p_mc_mc,p_md_exp_cf,p_md_exp_mc");

    cfg = parse_config(R"({"scenario": "roc", "sweep": {"start": 0.1, "stop": 0.2, "step": 0.1}, "n_trials": 500})");
    const auto roc_csv = render(run_table(cfg), OutputFormat::csv);
    EXPECT_EQ(roc_csv.substr(0, roc_csv.find('\n')), "p_fa,epsilon,p_d_cf,p_d_mc");
}

TEST(Run, JsonCarriesSchemaVersion) {
    auto cfg = parse_config(R"({"scenario": "roc", "sweep": {"start": 0.1, "stop": 0.3, "step": 0.1}, "n_trials": 300})");
    const auto json = render(run_table(cfg), OutputFormat::json);
    EXPECT_NE(json.find("\"schema_version\": 1"), std::string::npos);
    EXPECT_NE(json.find("\"scenario\": \"roc\""), std::string::npos);
}

TEST(Run, ByteIdenticalAcrossThreads) {
    auto cfg = parse_config(R"({"scenario": "coverage_vs_jam_distance",
                                "network": {"beta_dl_db": -10, "beta_ul_db": -10},
                                "sweep": {"start": 0, "stop": 100, "step": 20}, "n_trials": 2000})");
    const auto one = render(run_table(cfg), OutputFormat::csv);
    cfg.threads = 4;
    EXPECT_EQ(render(run_table(cfg), OutputFormat::csv), one);
    cfg.threads = 1;
    cfg.master_seed = 2;
    EXPECT_NE(render(run_table(cfg), OutputFormat::csv), one);
}

TEST(Run, NeedsOutputPath) {
    auto cfg = parse_config(R"({"scenario": "roc", "sweep": {"start": 0.1, "stop": 0.1, "step": 0.1}})");
    EXPECT_THROW(run(cfg), ConfigError);
}
