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

// JSON run configuration shared by the detector node and the monitor.
// The schema is documented in docs/config.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qseal/attack.hpp"
#include "qseal/coincidence.hpp"
#include "qseal/decision.hpp"
#include "qseal/event_sim.hpp"
#include "qseal/photonics.hpp"

namespace qseal::node {

struct ScheduleEntry {
    std::uint32_t start_window = 0;
    attack::TamperScenario scenario;
};

struct WireConfig {
    std::string host = "127.0.0.1";
    std::uint16_t port = 47474;
    /// Estimation window T, seconds.
    double window_seconds = 10.0;
    /// Windows emitted by the source and reported by the monitor per run.
    std::uint32_t windows = 3;
    /// Pace the source at one window per window_seconds of wall time.
    bool realtime = false;
    std::uint8_t node_id = 1;
    /// Pause between datagrams, microseconds.
    std::uint32_t packet_gap_us = 50;
    int max_attempts = 5;
    double retry_backoff_seconds = 0.05;
    wire::CoincidenceConfig coincidence;
};

struct OutputConfig {
    std::string alarm_log = "alarms.jsonl";
    /// Source per-window log; "-" is standard output.
    std::string source_log = "-";
};

struct RunConfig {
    sim::SourceConfig source;
    attack::TamperScenario scenario = attack::Authentic{};
    std::vector<ScheduleEntry> schedule;
    photonics::TemporalModel temporal = photonics::TemporalModel::ideal();
    WireConfig wire;
    decision::DecisionConfig decision;
    OutputConfig output;

    /// Scenario in force for `window_id` (latest schedule entry that has
    /// started, else the base scenario).
    const attack::TamperScenario& scenario_for(std::uint32_t window_id) const;

    void validate() const;
};

attack::TamperScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const attack::TamperScenario& s);
std::string scenario_name(const attack::TamperScenario& s);

/// Missing keys take the defaults above; unknown keys are rejected. If the
/// decision section omits min_coincidences it is set to 10% of the expected
/// authentic per-window coincidence count. Throws ValidationError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// Mean monitored coincidences per window for an authentic source at `phase`.
double expected_coincidences(const sim::SourceConfig& source, double phase = photonics::kPi);

}  // namespace qseal::node
