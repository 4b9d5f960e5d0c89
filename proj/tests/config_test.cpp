// Copyright 2026 The qseal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qseal/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qseal/error.hpp"

namespace qseal::node {
namespace {

using nlohmann::json;

json minimal() {
    return json{{"decision", {{"epsilon", 0.62}}}};
}

TEST(Scenario, Authentic) {
    const auto s = scenario_from_json(json{{"type", "authentic"}, {"phase", 2.5}});
    ASSERT_TRUE(std::holds_alternative<attack::Authentic>(s));
    EXPECT_EQ(std::get<attack::Authentic>(s).phase, 2.5);
    EXPECT_EQ(std::get<attack::Authentic>(scenario_from_json(json{{"type", "authentic"}})).phase, photonics::kPi);
}

TEST(Scenario, InterceptResendEncodings) {
    const auto bell = scenario_from_json(json::parse(R"({"type": "intercept_resend", "bell": "psi_plus"})"));
    EXPECT_NEAR(photonics::correlation(std::get<attack::InterceptResend>(bell).state), 1.0, 1e-15);

    const auto sep = scenario_from_json(
        json::parse(R"({"type": "intercept_resend", "separable": {"alpha": 0.7853981633974483, "beta": 0.7853981633974483}})"));
    EXPECT_NEAR(photonics::correlation(std::get<attack::InterceptResend>(sep).state), 0.5, 1e-12);

    const auto raw = scenario_from_json(
        json::parse(R"({"type": "intercept_resend", "state": {"b": [0.7071067811865476, 0], "c": 0.7071067811865476}})"));
    const auto& st = std::get<attack::InterceptResend>(raw).state;
    EXPECT_NEAR(st.b().real(), std::sqrt(0.5), 1e-15);
    EXPECT_EQ(st.a(), photonics::Complex{});
}

TEST(Scenario, RedirectionByDelayOrLength) {
    const auto d = scenario_from_json(json{{"type", "redirection"}, {"t_d", 5e-12}});
    EXPECT_EQ(std::get<attack::Redirection>(d).t_d, 5e-12);
    const auto l = scenario_from_json(json{{"type", "redirection"}, {"length_m", 0.002}});
    EXPECT_NEAR(std::get<attack::Redirection>(l).t_d, photonics::delay_from_length(0.002), 1e-25);
}

TEST(Scenario, ShortTimeInjection) {
    const auto s = scenario_from_json(json::parse(
        R"({"type": "short_time_injection", "duration": 4, "phase": 2.5, "inner": {"type": "blackout"}})"));
    const auto& inj = std::get<attack::ShortTimeInjection>(s);
    EXPECT_EQ(inj.duration, 4.0);
    EXPECT_EQ(inj.phase, 2.5);
    EXPECT_TRUE(std::holds_alternative<attack::Blackout>(inj.inner));
}

TEST(Scenario, Rejections) {
    const char* bad[] = {
        R"({"type": "teleport"})",
        R"({"type": "authentic", "phse": 1})",
        R"({"type": "intercept_resend"})",
        R"({"type": "intercept_resend", "bell": "psi_zero"})",
        R"({"type": "redirection"})",
        R"({"type": "short_time_injection", "duration": 1})",
        R"({"type": "short_time_injection", "duration": -1, "inner": {"type": "blackout"}})",
        R"({"type": "short_time_injection", "duration": 1, "inner": {"type": "short_time_injection", "duration": 1, "inner": {"type": "blackout"}}})",
        R"([1, 2])",
    };
    for (const char* text : bad) {
        EXPECT_THROW(scenario_from_json(json::parse(text)), ValidationError) << text;
    }
}

TEST(Scenario, JsonRoundTrip) {
    const attack::TamperScenario scenarios[] = {
        attack::Authentic{2.0},
        attack::InterceptResend{photonics::separable_state(0.3, 1.1, 0.2, -0.4)},
        attack::Redirection{3e-12},
        attack::Blackout{},
        attack::ShortTimeInjection{attack::Redirection{1e-12}, 2.5, 2.9},
    };
    for (const auto& s : scenarios) {
        const auto j = scenario_to_json(s);
        EXPECT_EQ(scenario_to_json(scenario_from_json(j)), j) << j.dump();
        EXPECT_EQ(scenario_name(s), j.at("type").get<std::string>());
    }
    EXPECT_EQ(scenario_name(attack::Blackout{}), "blackout");
}

TEST(RunConfig, Defaults) {
    const auto cfg = parse_run_config(minimal());
    EXPECT_EQ(cfg.wire.port, 47474);
    EXPECT_EQ(cfg.source.duration, cfg.wire.window_seconds);
    EXPECT_TRUE(std::holds_alternative<attack::Authentic>(cfg.scenario));
    EXPECT_NEAR(cfg.decision.min_coincidences, 0.1 * expected_coincidences(cfg.source), 1e-9);
}

TEST(RunConfig, ExpectedCoincidencesAtDeskScale) {
    sim::SourceConfig s;
    s.pair_rate = 8000.0;
    s.pathway_efficiency = sim::SourceConfig::uniform_efficiency(0.005);
    s.duration = 10.0;
    // At phase pi every pair lands in h2v3 or v2h3.
    EXPECT_NEAR(expected_coincidences(s), 8000.0 * 0.005 * 10.0, 1e-9);
    EXPECT_GT(expected_coincidences(s, photonics::kPi - std::acos(0.8)), 300.0);
}

TEST(RunConfig, SectionsAndSchedule) {
    const auto cfg = parse_run_config(json::parse(R"({
        "source": {"pair_rate": 1000, "pathway_efficiency": {"h2v3": 0.5, "v2h3": 0.25}, "seed": 3},
        "scenario": {"type": "authentic", "phase": 2.4},
        "schedule": [
            {"start_window": 2, "scenario": {"type": "blackout"}},
            {"start_window": 4, "scenario": {"type": "redirection", "t_d": 1e-12}}
        ],
        "temporal": {"t_d": 1e-12, "delta_t": 1e-11},
        "wire": {"port": 9000, "window_seconds": 2.5, "windows": 6, "coincidence_window_ticks": 3},
        "decision": {"target_far": 1e-9, "min_coincidences": 5},
        "output": {"alarm_log": "a.jsonl", "source_log": "s.jsonl"}
    })"));
    EXPECT_EQ(cfg.source.pair_rate, 1000.0);
    EXPECT_EQ(cfg.source.efficiency(photonics::Pathway::H2V3), 0.5);
    EXPECT_EQ(cfg.source.efficiency(photonics::Pathway::V2H3), 0.25);
    EXPECT_EQ(cfg.source.seed, 3u);
    EXPECT_EQ(cfg.source.duration, 2.5);
    EXPECT_EQ(cfg.temporal.delta_t(), 1e-11);
    EXPECT_EQ(cfg.wire.port, 9000);
    EXPECT_EQ(cfg.wire.windows, 6u);
    EXPECT_EQ(cfg.wire.coincidence.window_ticks, 3u);
    EXPECT_NEAR(cfg.decision.epsilon, 0.62006578954976939, 1e-14);
    EXPECT_EQ(cfg.decision.min_coincidences, 5.0);
    EXPECT_EQ(cfg.output.alarm_log, "a.jsonl");

    EXPECT_TRUE(std::holds_alternative<attack::Authentic>(cfg.scenario_for(0)));
    EXPECT_TRUE(std::holds_alternative<attack::Authentic>(cfg.scenario_for(1)));
    EXPECT_TRUE(std::holds_alternative<attack::Blackout>(cfg.scenario_for(2)));
    EXPECT_TRUE(std::holds_alternative<attack::Blackout>(cfg.scenario_for(3)));
    EXPECT_TRUE(std::holds_alternative<attack::Redirection>(cfg.scenario_for(4)));
    EXPECT_TRUE(std::holds_alternative<attack::Redirection>(cfg.scenario_for(100)));
}

TEST(RunConfig, Rejections) {
    const char* bad[] = {
        R"({"decision": {"epsilon": 0.62}, "sorce": {}})",
        R"({"decision": {"epsilon": 0.62}, "wire": {"prot": 1}})",
        R"({"decision": {"epsilon": 0.62, "target_far": 1e-9}})",
        R"({"decision": {"epsilon": 0.9}})",
        R"({"decision": {"epsilon": 0.62}, "wire": {"window_seconds": 0}})",
        R"({"decision": {"epsilon": 0.62}, "wire": {"port": 70000}})",
        R"({"decision": {"epsilon": 0.62}, "wire": {"port": -1}})",
        R"({"decision": {"epsilon": 0.62}, "wire": {"windows": 2.5}})",
        R"({"decision": {"epsilon": 0.62}, "source": {"seed": -4}})",
        R"({"decision": {"epsilon": 0.62}, "wire": {"max_attempts": 0}})",
        R"({"decision": {"epsilon": 0.62}, "source": {"pathway_efficiency": {"h9v9": 0.1}}})",
        R"({"decision": {"epsilon": 0.62}, "source": {"pathway_efficiency": 0}})",
        R"({"decision": {"epsilon": 0.62}, "source": {"pair_rate": "fast"}})",
        R"({"decision": {"epsilon": 0.62}, "schedule": [{"start_window": 3, "scenario": {"type": "blackout"}},
                                                       {"start_window": 3, "scenario": {"type": "blackout"}}]})",
        R"({"decision": {"epsilon": 0.62}, "schedule": {"start_window": 3}})",
        R"([])",
    };
    for (const char* text : bad) {
        EXPECT_THROW(parse_run_config(json::parse(text)), ValidationError) << text;
    }
}

TEST(RunConfig, LoadFromFile) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto good = dir / "qseal_config_test.json";
    std::ofstream(good) << minimal().dump();
    EXPECT_EQ(load_run_config(good).decision.epsilon, 0.62);

    const auto broken = dir / "qseal_config_test_broken.json";
    std::ofstream(broken) << "{\"decision\": ";
    EXPECT_THROW(load_run_config(broken), ValidationError);
    EXPECT_THROW(load_run_config(dir / "qseal_no_such_file.json"), IoError);
    std::filesystem::remove(good);
    std::filesystem::remove(broken);
}

TEST(RunConfig, ShippedDeskConfig) {
    const auto cfg = load_run_config(std::filesystem::path(QSEAL_SOURCE_DIR) / "configs" / "desk.json");
    EXPECT_EQ(cfg.wire.windows, 8u);
    EXPECT_NEAR(photonics::multimode_probabilities(std::get<attack::Authentic>(cfg.scenario).phase, cfg.temporal)
                    .correlation(),
                0.8, 1e-12);
    ASSERT_EQ(cfg.schedule.size(), 1u);
    EXPECT_EQ(cfg.schedule[0].start_window, 5u);
    const auto n = expected_coincidences(cfg.source, std::get<attack::Authentic>(cfg.scenario).phase);
    EXPECT_GT(n, 350.0);
    EXPECT_LT(n, 450.0);
}

}  // namespace
}  // namespace qseal::node
