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

// Detector node (packet source) and monitor processes.

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"
#include "qseal/coincidence.hpp"
#include "qseal/config.hpp"
#include "qseal/decision.hpp"
#include "qseal/estimator.hpp"
#include "qseal/packet.hpp"
#include "qseal/udp.hpp"

namespace qseal::node {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitTransport = 2;

struct WindowResult {
    std::uint32_t window_id = 0;
    std::size_t events = 0;
    wire::RawCounts raw;
    wire::PathwayCounts corrected{};
    wire::KappaTotals kappa;
    estimation::Estimate estimate;
    decision::Verdict verdict;
};

/// Coincidences, correction, reduction, estimate and decision for one
/// window of sorted events.
WindowResult process_window(std::span<const sim::DetectionEvent> events, std::uint32_t window_id,
                            const RunConfig& cfg);

/// Events of window `window_id` as emitted by the source of `cfg`.
std::vector<sim::DetectionEvent> simulate_run_window(const RunConfig& cfg, std::uint32_t window_id);

/// Alarm log record for one window.
nlohmann::json verdict_record(const WindowResult& r);

/// The whole run without any transport.
std::vector<WindowResult> run_in_process(const RunConfig& cfg);

/// Simulates and transmits cfg.wire.windows windows, writing one JSONL line
/// per window to `log`. Returns kExitTransport if the monitor stays
/// unreachable after cfg.wire.max_attempts attempts.
int run_source(const RunConfig& cfg, std::ostream& log);

struct MonitorSummary {
    std::size_t windows = 0;
    std::size_t datagrams = 0;
    std::size_t malformed = 0;
    std::size_t foreign = 0;
    std::size_t timeouts = 0;
    std::size_t authentic = 0;
    std::size_t tamper_alarms = 0;
    std::size_t blackout_alarms = 0;
    wire::WindowReassembler::Stats wire;

    nlohmann::json to_json() const;
};

class Monitor {
public:
    /// Binds cfg.wire.host:cfg.wire.port immediately (port 0 = ephemeral).
    explicit Monitor(RunConfig cfg);

    std::uint16_t port() const { return port_; }

    /// Reports windows 0 .. cfg.wire.windows-1 in order, appending each to
    /// the alarm log (if non-empty) and passing it to `on_window`.
    MonitorSummary run(const std::function<void(const WindowResult&)>& on_window = {});

    /// Ends run() early from another thread.
    void stop() { stop_ = true; }

private:
    RunConfig cfg_;
    net::UdpSocket socket_;
    std::uint16_t port_ = 0;
    std::atomic<bool> stop_{false};
};

}  // namespace qseal::node
