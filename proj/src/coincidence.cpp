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

#include "qseal/coincidence.hpp"

#include <algorithm>
#include <vector>

#include "qseal/error.hpp"

namespace qseal::wire {

namespace {

using sim::Channel;

enum class Pol { H, V };

struct ChannelInfo {
    Pol pol;
    int port;
};

std::optional<ChannelInfo> info(std::uint8_t ch) {
    switch (ch) {
        case static_cast<std::uint8_t>(Channel::H2a):
        case static_cast<std::uint8_t>(Channel::H2b): return ChannelInfo{Pol::H, 2};
        case static_cast<std::uint8_t>(Channel::V2a):
        case static_cast<std::uint8_t>(Channel::V2b): return ChannelInfo{Pol::V, 2};
        case static_cast<std::uint8_t>(Channel::H3): return ChannelInfo{Pol::H, 3};
        case static_cast<std::uint8_t>(Channel::V3): return ChannelInfo{Pol::V, 3};
        default: return std::nullopt;
    }
}

using ChannelMask = std::uint8_t;

constexpr ChannelMask bit(Channel c) { return static_cast<ChannelMask>(1u << static_cast<unsigned>(c)); }

struct GroupPair {
    ChannelMask x;
    ChannelMask y;
};

// Channel groups whose cross pairs make up each monitored pathway, indexed
// like kMonitoredPathways.
constexpr std::array<GroupPair, kMonitoredCount> kGroups = {{
    {bit(Channel::H2a) | bit(Channel::H2b), bit(Channel::H3)},
    {bit(Channel::V2a) | bit(Channel::V2b), bit(Channel::V3)},
    {bit(Channel::H2a), bit(Channel::H2b)},
    {bit(Channel::V2a), bit(Channel::V2b)},
    {bit(Channel::H2a) | bit(Channel::H2b), bit(Channel::V2a) | bit(Channel::V2b)},
    {bit(Channel::H3), bit(Channel::V3)},
    {bit(Channel::H2a) | bit(Channel::H2b), bit(Channel::V3)},
    {bit(Channel::V2a) | bit(Channel::V2b), bit(Channel::H3)},
}};

bool in(ChannelMask m, std::uint8_t ch) { return ch < 8 && (m & (1u << ch)) != 0; }

// Greedy earliest-first pairing; calls on_pair(i, j) for each pair formed.
template <class CanPair, class OnPair>
void pair_greedy(std::span<const DetectionEvent> ev, std::uint64_t w, CanPair can_pair, OnPair on_pair) {
    std::vector<bool> used(ev.size(), false);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (used[i]) {
            continue;
        }
        for (std::size_t j = i + 1; j < ev.size() && ev[j].tick - ev[i].tick <= w; ++j) {
            if (used[j] || ev[j].channel == ev[i].channel || !can_pair(ev[i], ev[j])) {
                continue;
            }
            used[i] = used[j] = true;
            on_pair(ev[i], ev[j]);
            break;
        }
    }
}

}  // namespace

std::size_t monitored_index(Pathway p) {
    for (std::size_t i = 0; i < kMonitoredCount; ++i) {
        if (kMonitoredPathways[i] == p) {
            return i;
        }
    }
    throw ValidationError("pathway is not monitored");
}

std::optional<Pathway> classify(std::uint8_t x, std::uint8_t y) {
    const auto a = info(x);
    const auto b = info(y);
    if (!a || !b || x == y) {
        return std::nullopt;
    }
    if (a->port == b->port) {
        if (a->pol == b->pol) {
            return a->pol == Pol::H ? Pathway::H2H2 : Pathway::V2V2;  // only port 2 has split detectors
        }
        return a->port == 2 ? Pathway::H2V2 : Pathway::H3V3;
    }
    const auto& p2 = a->port == 2 ? *a : *b;
    const auto& p3 = a->port == 2 ? *b : *a;
    if (p2.pol == p3.pol) {
        return p2.pol == Pol::H ? Pathway::H2H3 : Pathway::V2V3;
    }
    return p2.pol == Pol::H ? Pathway::H2V3 : Pathway::V2H3;
}

RawCounts find_coincidences(std::span<const DetectionEvent> events, const CoincidenceConfig& cfg) {
    if (cfg.window_ticks < 1) {
        throw ValidationError("coincidence window must be at least one tick");
    }
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].tick < events[i - 1].tick) {
            throw ValidationError("events must be sorted by tick");
        }
    }

    RawCounts out;
    pair_greedy(
        events, cfg.window_ticks, [](const DetectionEvent&, const DetectionEvent&) { return true; },
        [&](const DetectionEvent& a, const DetectionEvent& b) {
            if (auto p = classify(a.channel, b.channel)) {
                ++out.c[monitored_index(*p)];
            }
        });

    // Delayed-window accidentals: re-pair with the y group shifted so that
    // no true coincidence can survive.
    std::vector<DetectionEvent> xs, ys, merged;
    for (std::size_t k = 0; k < kMonitoredCount; ++k) {
        const auto [xm, ym] = kGroups[k];
        xs.clear();
        ys.clear();
        for (const auto& e : events) {
            if (in(xm, e.channel)) {
                xs.push_back(e);
            } else if (in(ym, e.channel)) {
                ys.push_back({e.channel, e.tick + cfg.acc_offset});
            }
        }
        merged.resize(xs.size() + ys.size());
        std::merge(xs.begin(), xs.end(), ys.begin(), ys.end(), merged.begin(), sim::event_less);
        std::uint64_t n = 0;
        pair_greedy(
            merged, cfg.window_ticks,
            [&](const DetectionEvent& a, const DetectionEvent& b) { return in(xm, a.channel) != in(xm, b.channel); },
            [&](const DetectionEvent&, const DetectionEvent&) { ++n; });
        out.c_acc[k] = static_cast<double>(n);
    }
    return out;
}

PathwayCounts monitored_efficiency(const std::array<double, photonics::kPathwayCount>& all) {
    PathwayCounts eta{};
    for (std::size_t i = 0; i < kMonitoredCount; ++i) {
        eta[i] = all[static_cast<std::size_t>(kMonitoredPathways[i])];
    }
    return eta;
}

PathwayCounts correct_counts(const RawCounts& raw, const PathwayCounts& eta) {
    for (double e : eta) {
        if (!(e > 0.0 && e <= 1.0)) {
            throw ValidationError("pathway efficiencies must lie in (0,1]");
        }
    }
    const double eta_min = *std::min_element(eta.begin(), eta.end());
    PathwayCounts out{};
    for (std::size_t i = 0; i < kMonitoredCount; ++i) {
        out[i] = (eta_min / eta[i]) * (static_cast<double>(raw.c[i]) - raw.c_acc[i]);
    }
    return out;
}

KappaTotals reduce_to_kappa(const PathwayCounts& corrected) {
    const auto c = [&](Pathway p) { return std::max(0.0, corrected[monitored_index(p)]); };
    KappaTotals k;
    k.k_sd = c(Pathway::H2H3) + c(Pathway::V2V3);
    k.k_ss = c(Pathway::H2H2) + c(Pathway::V2V2);
    k.k_ds = c(Pathway::H2V2) + c(Pathway::H3V3);
    k.k_dd = c(Pathway::H2V3) + c(Pathway::V2H3);
    return k;
}

}  // namespace qseal::wire
