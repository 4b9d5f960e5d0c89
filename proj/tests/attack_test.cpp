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

#include "qseal/attack.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qseal/error.hpp"

namespace qseal::attack {
namespace {

using photonics::kPi;
using photonics::separable_state;

const TemporalModel kIdeal = TemporalModel::ideal();

double total(const CoincidenceProbabilities& p) {
    double s = 0.0;
    for (double v : p.pathways()) s += v;
    return s;
}

TEST(EffectiveStatistics, Examples) {
    const auto auth = effective_statistics(Authentic{kPi}, kIdeal, 10.0);
    EXPECT_NEAR(auth.probs.p_dd(), 1.0, 1e-15);
    EXPECT_EQ(auth.pair_rate_scale, 1.0);

    const auto ir = effective_statistics(InterceptResend{separable_state(kPi / 4, kPi / 4, 0, 0)}, kIdeal, 10.0);
    EXPECT_NEAR(ir.probs.correlation(), 0.5, 1e-15);

    const auto red = effective_statistics(Redirection{4e-12}, kIdeal, 10.0);
    EXPECT_NEAR(red.probs.correlation(), 0.0, 1e-15);

    const auto black = effective_statistics(Blackout{}, kIdeal, 10.0);
    EXPECT_EQ(black.pair_rate_scale, 0.0);
}

TEST(EffectiveStatistics, Normalized) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (int i = 0; i < 2000; ++i) {
        const BaseScenario inner = InterceptResend{separable_state(u(rng), u(rng), u(rng), u(rng))};
        const std::vector<TamperScenario> scenarios = {
            Authentic{u(rng)},
            to_scenario(inner),
            Redirection{(u(rng) - kPi) * 2e-12},
            ShortTimeInjection{inner, u(rng) / (2 * kPi) * 10.0, u(rng)},
        };
        for (const auto& s : scenarios) {
            ASSERT_NEAR(total(effective_statistics(s, kIdeal, 10.0).probs), 1.0, 1e-12);
        }
    }
}

TEST(EffectiveStatistics, InterceptResendBound) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (int i = 0; i < 20000; ++i) {
        const auto e = effective_statistics(InterceptResend{separable_state(u(rng), u(rng), u(rng), u(rng))}, kIdeal, 10.0);
        ASSERT_LE(std::abs(e.probs.correlation()), 0.5 + 1e-12);
    }
}

TEST(EffectiveStatistics, InjectionMixesCorrelations) {
    const double e1_phase = kPi - std::acos(0.8);
    const BaseScenario inner = InterceptResend{separable_state(kPi / 4, kPi / 4, 0, 0)};
    for (double t = 0.0; t <= 10.0; t += 0.5) {
        const auto e = effective_statistics(ShortTimeInjection{inner, t, e1_phase}, kIdeal, 10.0);
        EXPECT_NEAR(e.probs.correlation(), mixed_correlation(t, 10.0, 0.5, 0.8), 1e-12) << t;
        EXPECT_NEAR(e.pair_rate_scale, 1.0, 1e-15);
    }
    EXPECT_THROW(effective_statistics(ShortTimeInjection{inner, 11.0}, kIdeal, 10.0), ValidationError);
    EXPECT_THROW(effective_statistics(ShortTimeInjection{inner, 1.0}, kIdeal, 0.0), ValidationError);
}

TEST(EffectiveStatistics, BlackoutInjectionIsRateWeighted) {
    const auto e = effective_statistics(ShortTimeInjection{Blackout{}, 4.0}, kIdeal, 10.0);
    EXPECT_NEAR(e.pair_rate_scale, 0.6, 1e-15);
    EXPECT_NEAR(e.probs.correlation(), 1.0, 1e-15);
    EXPECT_EQ(effective_statistics(ShortTimeInjection{Blackout{}, 10.0}, kIdeal, 10.0).pair_rate_scale, 0.0);
}

TEST(EffectiveStatistics, RedirectionEvenAndNonIncreasing) {
    double prev = 2.0;
    for (double td = 0.0; td <= 6e-12; td += 0.1e-12) {
        const double e = effective_statistics(Redirection{td}, kIdeal, 10.0).probs.correlation();
        const double m = effective_statistics(Redirection{-td}, kIdeal, 10.0).probs.correlation();
        EXPECT_EQ(e, m);
        EXPECT_LE(e, prev);
        prev = e;
    }
}

TEST(MixedCorrelation, Examples) {
    EXPECT_EQ(mixed_correlation(0.0, 10.0, 0.5, 0.8), 0.8);
    EXPECT_EQ(mixed_correlation(10.0, 10.0, 0.5, 0.8), 0.5);
    EXPECT_NEAR(mixed_correlation(5.0, 10.0, 0.5, 0.8), 0.65, 1e-15);
    EXPECT_THROW(mixed_correlation(-1.0, 10.0, 0.5, 0.8), ValidationError);
    EXPECT_THROW(mixed_correlation(11.0, 10.0, 0.5, 0.8), ValidationError);
}

TEST(MinSpoofDuration, Examples) {
    EXPECT_NEAR(min_spoof_duration(0.8, 0.5, 0.62, 10.0), 6.0, 1e-12);
    EXPECT_NEAR(min_spoof_duration(0.8, 0.5, 0.8 - 1e-9, 10.0), 0.0, 1e-6);
    EXPECT_NEAR(min_spoof_duration(0.8, 0.5, 0.5, 10.0), 10.0, 1e-12);
    EXPECT_THROW(min_spoof_duration(0.8, 0.5, 0.8, 10.0), DomainError);
    EXPECT_THROW(min_spoof_duration(0.5, 0.5, 0.5, 10.0), DomainError);
}

TEST(ThermalDrift, Examples) {
    EXPECT_NEAR(thermal_drift(1000.0, 10.0, 1e-6), 0.01, 1e-15);
    EXPECT_NEAR(2.0 * thermal_drift(1000.0, -10.0), -0.02, 1e-15);
    EXPECT_EQ(thermal_drift(1000.0, 0.0), 0.0);
    EXPECT_EQ(thermal_drift(0.0, 10.0), 0.0);
}

}  // namespace
}  // namespace qseal::attack
