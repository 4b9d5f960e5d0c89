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

// Monitor-side reduction of a window's clicks to coincidence-type totals.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "qseal/event_sim.hpp"
#include "qseal/photonics.hpp"

namespace qseal::wire {

using photonics::Pathway;
using sim::DetectionEvent;

/// The eight pathways the analyzer records (port-3 same-polarization
/// pathways are invisible to it).
inline constexpr std::size_t kMonitoredCount = 8;
inline constexpr std::array<Pathway, kMonitoredCount> kMonitoredPathways = {
    Pathway::H2H3, Pathway::V2V3, Pathway::H2H2, Pathway::V2V2,
    Pathway::H2V2, Pathway::H3V3, Pathway::H2V3, Pathway::V2H3,
};

using PathwayCounts = std::array<double, kMonitoredCount>;

std::size_t monitored_index(Pathway p);

/// Pathway recorded when channels `x` and `y` (distinct) fire together, or
/// nullopt for reserved channels or identical channels.
std::optional<Pathway> classify(std::uint8_t x, std::uint8_t y);

struct RawCounts {
    std::array<std::uint64_t, kMonitoredCount> c{};
    /// Delayed-window estimate of accidental coincidences.
    PathwayCounts c_acc{};

    std::uint64_t count(Pathway p) const { return c[monitored_index(p)]; }
    double accidentals(Pathway p) const { return c_acc[monitored_index(p)]; }
};

struct CoincidenceConfig {
    /// Maximum |tick difference| of a coincidence.
    std::uint64_t window_ticks = 2;
    /// Shift applied to one side when estimating accidentals.
    std::uint64_t acc_offset = 10000;
};

/// Greedy earliest-first pairing: each click pairs with the first later
/// unpaired click on a different channel within the window and is used at
/// most once. Events must be sorted by tick (ValidationError otherwise).
RawCounts find_coincidences(std::span<const DetectionEvent> events, const CoincidenceConfig& cfg = {});

/// Efficiency-normalized, accidental-subtracted counts
/// (eta_min / eta_i) (c_i - c_acc,i). May be negative.
PathwayCounts correct_counts(const RawCounts& raw, const PathwayCounts& eta);

/// Efficiencies of the monitored pathways picked out of a full table.
PathwayCounts monitored_efficiency(const std::array<double, photonics::kPathwayCount>& all);

struct KappaTotals {
    double k_sd = 0.0;
    double k_ss = 0.0;
    double k_ds = 0.0;
    double k_dd = 0.0;

    double total() const { return k_sd + k_ss + k_ds + k_dd; }

    friend bool operator==(const KappaTotals&, const KappaTotals&) = default;
};

/// Sums corrected counts per coincidence type; negative counts clamp to 0.
KappaTotals reduce_to_kappa(const PathwayCounts& corrected);

}  // namespace qseal::wire
