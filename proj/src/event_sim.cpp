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

#include "qseal/event_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qseal/error.hpp"

namespace qseal::sim {

namespace {

constexpr std::array<std::string_view, kActiveChannelCount> kLabels = {"h2a", "h2b", "v2a", "v2b", "h3", "v3"};

enum class Pol { H, V };

struct Photon {
    int port;  // 2 or 3
    Pol pol;
};

std::pair<Photon, Photon> photons_of(Pathway p) {
    switch (p) {
        case Pathway::H2H3: return {{2, Pol::H}, {3, Pol::H}};
        case Pathway::V2V3: return {{2, Pol::V}, {3, Pol::V}};
        case Pathway::H2H2: return {{2, Pol::H}, {2, Pol::H}};
        case Pathway::H3H3: return {{3, Pol::H}, {3, Pol::H}};
        case Pathway::V2V2: return {{2, Pol::V}, {2, Pol::V}};
        case Pathway::V3V3: return {{3, Pol::V}, {3, Pol::V}};
        case Pathway::H2V2: return {{2, Pol::H}, {2, Pol::V}};
        case Pathway::H3V3: return {{3, Pol::H}, {3, Pol::V}};
        case Pathway::H2V3: return {{2, Pol::H}, {3, Pol::V}};
        case Pathway::V2H3: return {{2, Pol::V}, {3, Pol::H}};
    }
    return {{2, Pol::H}, {3, Pol::H}};
}

template <class Rng>
Channel route(const Photon& ph, Rng& rng) {
    if (ph.port == 3) {
        return ph.pol == Pol::H ? Channel::H3 : Channel::V3;
    }
    const bool second = std::bernoulli_distribution(0.5)(rng);
    if (ph.pol == Pol::H) {
        return second ? Channel::H2b : Channel::H2a;
    }
    return second ? Channel::V2b : Channel::V2a;
}

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::optional<std::string_view> channel_label(std::uint8_t id) {
    if (id < kActiveChannelCount) {
        return kLabels[id];
    }
    return std::nullopt;
}

std::optional<std::uint8_t> channel_from_label(std::string_view label) {
    for (std::uint8_t i = 0; i < kActiveChannelCount; ++i) {
        if (kLabels[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

bool event_less(const DetectionEvent& x, const DetectionEvent& y) {
    return x.tick != y.tick ? x.tick < y.tick : x.channel < y.channel;
}

std::array<double, kPathwayCount> SourceConfig::uniform_efficiency(double eta) {
    std::array<double, kPathwayCount> e{};
    e.fill(eta);
    return e;
}

void SourceConfig::validate() const {
    if (!(pair_rate >= 0.0) || !std::isfinite(pair_rate)) {
        throw ValidationError("pair_rate must be non-negative");
    }
    for (double eta : pathway_efficiency) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw ValidationError("pathway efficiencies must lie in (0,1]");
        }
    }
    if (!(dark_rate >= 0.0) || !(background_rate >= 0.0)) {
        throw ValidationError("dark and background rates must be non-negative");
    }
    if (!(jitter_sigma >= 0.0)) {
        throw ValidationError("jitter_sigma must be non-negative");
    }
    if (!(clock_tick > 0.0) || !std::isfinite(clock_tick)) {
        throw ValidationError("clock_tick must be positive");
    }
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw ValidationError("window duration must be positive");
    }
}

std::uint64_t SourceConfig::ticks_per_window() const {
    return static_cast<std::uint64_t>(std::llround(duration / clock_tick));
}

std::uint64_t window_seed(std::uint64_t run_seed, std::uint64_t window_id) {
    return mix64(mix64(run_seed) ^ (window_id + 1));
}

std::vector<DetectionEvent> simulate_window(const attack::TamperScenario& scenario, const SourceConfig& source,
                                            const photonics::TemporalModel& temporal, std::uint64_t start_tick) {
    source.validate();
    const auto stats = attack::effective_statistics(scenario, temporal, source.duration);

    std::mt19937_64 rng(source.seed);
    std::vector<DetectionEvent> events;

    const double jitter = source.jitter_sigma;
    std::normal_distribution<double> jitter_dist(0.0, jitter > 0.0 ? jitter : 1.0);
    const auto emit = [&](Channel ch, double t) {
        if (jitter > 0.0) {
            t += jitter_dist(rng);
        }
        const double rel = std::floor(t / source.clock_tick);
        const auto offset = rel > 0.0 ? static_cast<std::uint64_t>(rel) : 0;
        events.push_back({static_cast<std::uint8_t>(ch), start_tick + offset});
    };

    // Surviving pairs: Poisson thinning of the emitted pair stream.
    std::array<double, kPathwayCount> weights{};
    double detected_rate = 0.0;
    for (std::size_t i = 0; i < kPathwayCount; ++i) {
        weights[i] = stats.probs.pathways()[i] * source.pathway_efficiency[i];
        detected_rate += weights[i];
    }
    detected_rate *= source.pair_rate * stats.pair_rate_scale;

    double t_d = temporal.t_d();
    if (const auto* r = std::get_if<attack::Redirection>(&scenario)) {
        t_d = r->t_d;
    }
    const double delay_ticks = std::round(std::abs(t_d) / source.clock_tick);
    const double delay = delay_ticks * source.clock_tick;

    if (detected_rate > 0.0) {
        std::exponential_distribution<double> gap(detected_rate);
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        for (double t = gap(rng); t < source.duration; t += gap(rng)) {
            const Pathway p = photonics::kAllPathways[pick(rng)];
            const auto [first, second] = photons_of(p);
            const Channel c1 = route(first, rng);
            const Channel c2 = route(second, rng);
            const bool active_is_second = std::bernoulli_distribution(0.5)(rng);
            const double t1 = active_is_second ? t : t + delay;
            const double t2 = active_is_second ? t + delay : t;
            if (c1 == c2) {
                // Non-number-resolving detector: two photons, one click.
                emit(c1, std::min(t1, t2));
            } else {
                emit(c1, t1);
                emit(c2, t2);
            }
        }
    }

    const double noise_rate = source.dark_rate + source.background_rate;
    if (noise_rate > 0.0) {
        std::exponential_distribution<double> gap(noise_rate);
        for (std::uint8_t ch = 0; ch < kActiveChannelCount; ++ch) {
            for (double t = gap(rng); t < source.duration; t += gap(rng)) {
                emit(static_cast<Channel>(ch), t);
            }
        }
    }

    std::sort(events.begin(), events.end(), event_less);
    return events;
}

}  // namespace qseal::sim
