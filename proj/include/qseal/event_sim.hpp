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

// Monte-Carlo detector node: timestamped clicks for one estimation window.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qseal/attack.hpp"
#include "qseal/photonics.hpp"

namespace qseal::sim {

using photonics::kPathwayCount;
using photonics::Pathway;

/// Physical detector channels. Port-2 polarization outputs are split by a
/// beamsplitter onto an a/b pair; port 3 has one detector per polarization.
/// Ids 6 and 7 are reserved inputs of the time tagger.
enum class Channel : std::uint8_t { H2a = 0, H2b = 1, V2a = 2, V2b = 3, H3 = 4, V3 = 5 };

inline constexpr std::uint8_t kChannelCount = 8;
inline constexpr std::uint8_t kActiveChannelCount = 6;

/// Label for ids 0-5, nullopt for reserved or out-of-range ids.
std::optional<std::string_view> channel_label(std::uint8_t id);
std::optional<std::uint8_t> channel_from_label(std::string_view label);

struct DetectionEvent {
    std::uint8_t channel = 0;
    std::uint64_t tick = 0;

    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

/// Orders by tick, then channel.
bool event_less(const DetectionEvent& x, const DetectionEvent& y);

struct SourceConfig {
    /// Emitted pairs per second.
    double pair_rate = 1e4;
    /// Joint survival probability per pathway, indexed like kAllPathways.
    std::array<double, kPathwayCount> pathway_efficiency = uniform_efficiency(5.5e-3);
    /// Dark counts per second per active channel.
    double dark_rate = 100.0;
    /// Extra uncorrelated singles per second per active channel, standing in
    /// for photons of pairs lost on the other arm.
    double background_rate = 0.0;
    /// Gaussian timing jitter per click, seconds.
    double jitter_sigma = 0.0;
    double clock_tick = 10e-9;
    /// Window length, seconds.
    double duration = 10.0;
    std::uint64_t seed = 1;

    static std::array<double, kPathwayCount> uniform_efficiency(double eta);

    double efficiency(Pathway p) const { return pathway_efficiency[static_cast<std::size_t>(p)]; }

    /// Throws ValidationError on negative rates, efficiencies outside (0,1],
    /// or non-positive tick/duration.
    void validate() const;

    std::uint64_t ticks_per_window() const;
};

/// Events of one window, sorted by (tick, channel). `start_tick` offsets
/// every timestamp so consecutive windows share one monotone clock.
std::vector<DetectionEvent> simulate_window(const attack::TamperScenario& scenario, const SourceConfig& source,
                                            const photonics::TemporalModel& temporal, std::uint64_t start_tick = 0);

/// Seed for window `window_id` of a run seeded with `run_seed`.
std::uint64_t window_seed(std::uint64_t run_seed, std::uint64_t window_id);

}  // namespace qseal::sim
