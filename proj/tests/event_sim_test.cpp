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

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <vector>

#include "qseal/coincidence.hpp"
#include "qseal/error.hpp"

namespace qseal::sim {
namespace {

using attack::Authentic;
using attack::Blackout;
using attack::InterceptResend;
using attack::Redirection;
using attack::ShortTimeInjection;
using photonics::kPi;
using photonics::TemporalModel;

const TemporalModel kIdeal = TemporalModel::ideal();

SourceConfig quiet_source(double pair_rate, double eta, double duration, std::uint64_t seed) {
    SourceConfig s;
    s.pair_rate = pair_rate;
    s.pathway_efficiency = SourceConfig::uniform_efficiency(eta);
    s.dark_rate = 0.0;
    s.duration = duration;
    s.seed = seed;
    return s;
}

TEST(SimulateWindow, BlackoutWithoutDarkCountsIsEmpty) {
    EXPECT_TRUE(simulate_window(Blackout{}, quiet_source(1e4, 0.01, 10.0, 1), kIdeal).empty());
}

TEST(SimulateWindow, DeterministicForSeed) {
    SourceConfig s;
    s.jitter_sigma = 3e-9;
    const auto a = simulate_window(Authentic{}, s, kIdeal, 500);
    const auto b = simulate_window(Authentic{}, s, kIdeal, 500);
    EXPECT_EQ(a, b);
    s.seed = 2;
    EXPECT_NE(a, simulate_window(Authentic{}, s, kIdeal, 500));
}

TEST(SimulateWindow, SortedAndOffset) {
    SourceConfig s;
    const std::uint64_t start = 123456789;
    const auto ev = simulate_window(Authentic{}, s, kIdeal, start);
    ASSERT_FALSE(ev.empty());
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end(), event_less));
    EXPECT_GE(ev.front().tick, start);
    EXPECT_LT(ev.back().tick, start + s.ticks_per_window());
    for (const auto& e : ev) {
        ASSERT_LT(e.channel, kActiveChannelCount);
    }
}

TEST(SimulateWindow, RejectsInvalidSource) {
    SourceConfig s;
    s.pathway_efficiency[3] = 0.0;
    EXPECT_THROW(simulate_window(Authentic{}, s, kIdeal), ValidationError);
    s = SourceConfig{};
    s.clock_tick = 0.0;
    EXPECT_THROW(simulate_window(Authentic{}, s, kIdeal), ValidationError);
}

TEST(SimulateWindow, AuthenticPsiPlusHasNoDoubleSingle) {
    // 1e5 detected pairs.
    const auto ev = simulate_window(Authentic{kPi}, quiet_source(1e6, 0.01, 10.0, 5), kIdeal);
    const auto kappa = wire::reduce_to_kappa(
        wire::correct_counts(wire::find_coincidences(ev), wire::PathwayCounts{0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01}));
    EXPECT_GT(kappa.k_dd, 9e4);
    EXPECT_LT(kappa.k_ds / kappa.k_dd, 0.01);
}

TEST(SimulateWindow, InterceptResendCorrelationNearHalf) {
    const double rate = 1e6, eta = 0.01, T = 10.0;
    const auto ev = simulate_window(InterceptResend{photonics::separable_state(kPi / 4, kPi / 4, 0, 0)},
                                    quiet_source(rate, eta, T, 6), kIdeal);
    const auto raw = wire::find_coincidences(ev);
    const double dd = static_cast<double>(raw.count(Pathway::H2V3) + raw.count(Pathway::V2H3));
    const double ds = static_cast<double>(raw.count(Pathway::H2V2) + raw.count(Pathway::H3V3));
    const double n = rate * eta * T;
    // Thinned pathway counts are independent Poisson variables.
    const double e = (dd - ds) / n;
    const double sigma = std::sqrt(dd + ds) / n;
    EXPECT_NEAR(e, 0.5, 3.0 * sigma);
}

// Expected clicks per second on each channel.
std::array<double, kActiveChannelCount> expected_singles(const attack::TamperScenario& sc, const SourceConfig& s) {
    const auto st = attack::effective_statistics(sc, kIdeal, s.duration);
    std::array<double, kActiveChannelCount> r{};
    const auto add = [&](Pathway p, Channel ch, double f) {
        r[static_cast<std::size_t>(ch)] +=
            s.pair_rate * st.pair_rate_scale * st.probs.pathway(p) * s.efficiency(p) * f;
    };
    add(Pathway::H2H3, Channel::H2a, 0.5), add(Pathway::H2H3, Channel::H2b, 0.5), add(Pathway::H2H3, Channel::H3, 1);
    add(Pathway::V2V3, Channel::V2a, 0.5), add(Pathway::V2V3, Channel::V2b, 0.5), add(Pathway::V2V3, Channel::V3, 1);
    add(Pathway::H2H2, Channel::H2a, 0.75), add(Pathway::H2H2, Channel::H2b, 0.75);
    add(Pathway::V2V2, Channel::V2a, 0.75), add(Pathway::V2V2, Channel::V2b, 0.75);
    add(Pathway::H3H3, Channel::H3, 1), add(Pathway::V3V3, Channel::V3, 1);
    add(Pathway::H2V2, Channel::H2a, 0.5), add(Pathway::H2V2, Channel::H2b, 0.5);
    add(Pathway::H2V2, Channel::V2a, 0.5), add(Pathway::H2V2, Channel::V2b, 0.5);
    add(Pathway::H3V3, Channel::H3, 1), add(Pathway::H3V3, Channel::V3, 1);
    add(Pathway::H2V3, Channel::H2a, 0.5), add(Pathway::H2V3, Channel::H2b, 0.5), add(Pathway::H2V3, Channel::V3, 1);
    add(Pathway::V2H3, Channel::V2a, 0.5), add(Pathway::V2H3, Channel::V2b, 0.5), add(Pathway::V2H3, Channel::H3, 1);
    for (double& v : r) {
        v += s.dark_rate + s.background_rate;
    }
    return r;
}

TEST(SimulateWindow, SinglesRatesWithinFiveSigma) {
    SourceConfig s;
    s.pair_rate = 2e5;
    s.dark_rate = 150;
    s.background_rate = 50;
    s.seed = 9;
    const std::vector<attack::TamperScenario> scenarios = {
        Authentic{kPi},
        Authentic{1.0},
        InterceptResend{photonics::TwoPhotonState::normalized({0.3, 0.1}, {0.5, -0.2}, {0.1, 0.4}, {0.6, 0.0})},
        ShortTimeInjection{InterceptResend{photonics::separable_state(kPi / 4, kPi / 4, 0, 0)}, 4.0},
        Blackout{},
    };
    for (const auto& sc : scenarios) {
        const auto ev = simulate_window(sc, s, kIdeal);
        std::array<double, kActiveChannelCount> n{};
        for (const auto& e : ev) {
            n[e.channel] += 1.0;
        }
        const auto rate = expected_singles(sc, s);
        for (std::size_t ch = 0; ch < kActiveChannelCount; ++ch) {
            const double mu = rate[ch] * s.duration;
            // Pair clicks on one channel are Poisson; the tolerance is 5 sigma.
            EXPECT_NEAR(n[ch], mu, 5.0 * std::sqrt(mu)) << "channel " << ch;
        }
    }
}

// Probability that a surviving pair of pathway p is recorded as a
// coincidence of that pathway.
double observed_fraction(Pathway p) {
    switch (p) {
        case Pathway::H2H2:
        case Pathway::V2V2: return 0.5;
        case Pathway::H3H3:
        case Pathway::V3V3: return 0.0;
        default: return 1.0;
    }
}

TEST(SimulateWindow, CoincidenceFrequenciesMatchProbabilities) {
    const std::vector<attack::TamperScenario> scenarios = {
        Authentic{2.0},
        InterceptResend{photonics::separable_state(0.4, 1.1, 0.3, -0.2)},
        InterceptResend{photonics::TwoPhotonState::normalized({0.5, 0.0}, {0.3, 0.3}, {0.1, -0.6}, {0.2, 0.1})},
        Redirection{1.5e-12},
        ShortTimeInjection{InterceptResend{photonics::separable_state(kPi / 4, kPi / 4, 0, 0)}, 3.0, 2.3},
    };
    for (std::size_t si = 0; si < scenarios.size(); ++si) {
        const auto& sc = scenarios[si];
        auto src = quiet_source(2e4, 0.0, 10.0, 0);
        for (std::size_t i = 0; i < photonics::kPathwayCount; ++i) {
            src.pathway_efficiency[i] = 0.004 + 0.0005 * static_cast<double>(i);
        }
        const auto st = attack::effective_statistics(sc, kIdeal, src.duration);

        std::vector<double> q;
        double qsum = 0.0;
        for (auto p : wire::kMonitoredPathways) {
            q.push_back(st.probs.pathway(p) * src.efficiency(p) * observed_fraction(p));
            qsum += q.back();
        }

        int failures = 0;
        for (int run = 0; run < 30; ++run) {
            src.seed = 1000 * si + run;
            const auto raw = wire::find_coincidences(simulate_window(sc, src, kIdeal));
            double n = 0.0;
            for (auto c : raw.c) n += static_cast<double>(c);
            double chi2 = 0.0;
            int dof = -1;
            for (std::size_t i = 0; i < wire::kMonitoredCount; ++i) {
                const double expect = n * q[i] / qsum;
                if (expect < 1e-9) {
                    ASSERT_EQ(raw.c[i], 0u) << "impossible pathway observed";
                    continue;
                }
                const double d = static_cast<double>(raw.c[i]) - expect;
                chi2 += d * d / expect;
                ++dof;
            }
            if (dof < 1) continue;
            const double p_value = boost::math::cdf(complement(boost::math::chi_squared(dof), chi2));
            failures += p_value < 1e-3;
        }
        EXPECT_LE(failures, 1) << "scenario " << si;
    }
}

TEST(SimulateWindow, SamePortPairsLoseHalfTheCoincidences) {
    auto src = quiet_source(1e5, 0.1, 10.0, 21);
    src.pathway_efficiency[static_cast<std::size_t>(Pathway::H3H3)] = 1e-12;
    const auto ev = simulate_window(InterceptResend{photonics::TwoPhotonState(1.0, 0.0, 0.0, 0.0)}, src, kIdeal);
    const auto raw = wire::find_coincidences(ev);
    const double coincidences = static_cast<double>(raw.count(Pathway::H2H2));
    const double pairs = static_cast<double>(ev.size()) - coincidences;  // two clicks or one per pair
    EXPECT_NEAR(coincidences / pairs, 0.5, 3.0 * std::sqrt(0.25 / pairs));
}

TEST(SimulateWindow, DelayShiftsOnePhotonByWholeTicks) {
    auto src = quiet_source(1e3, 1.0, 1.0, 4);
    const auto ev = simulate_window(Redirection{30e-9}, src, kIdeal);
    // 3 ticks apart: outside the default 2-tick window.
    const auto raw = wire::find_coincidences(ev);
    double n = 0.0;
    for (auto c : raw.c) n += static_cast<double>(c);
    EXPECT_LT(n, 0.01 * static_cast<double>(ev.size()));
    wire::CoincidenceConfig wide;
    wide.window_ticks = 4;
    double m = 0.0;
    for (auto c : wire::find_coincidences(ev, wide).c) m += static_cast<double>(c);
    EXPECT_GT(m, 0.3 * static_cast<double>(ev.size()));
}

TEST(WindowSeed, DistinctPerWindow) {
    EXPECT_NE(window_seed(1, 0), window_seed(1, 1));
    EXPECT_NE(window_seed(1, 0), window_seed(2, 0));
    EXPECT_EQ(window_seed(7, 3), window_seed(7, 3));
}

TEST(ChannelLabels, RoundTrip) {
    for (std::uint8_t c = 0; c < kActiveChannelCount; ++c) {
        EXPECT_EQ(channel_from_label(*channel_label(c)), c);
    }
    EXPECT_FALSE(channel_label(6).has_value());
    EXPECT_FALSE(channel_from_label("x").has_value());
}

}  // namespace
}  // namespace qseal::sim
