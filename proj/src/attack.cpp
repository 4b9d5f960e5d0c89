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

#include <cmath>

#include "qseal/error.hpp"

namespace qseal::attack {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

EffectiveStatistics base_statistics(const BaseScenario& s, const TemporalModel& temporal) {
    return std::visit(
        overloaded{
            [&](const Authentic& a) {
                return EffectiveStatistics{photonics::multimode_probabilities(a.phase, temporal.with_delay(0.0)), 1.0};
            },
            [](const InterceptResend& r) { return EffectiveStatistics{photonics::bsa_probabilities(r.state), 1.0}; },
            [&](const Redirection& r) {
                return EffectiveStatistics{
                    photonics::multimode_probabilities(photonics::kPi, temporal.with_delay(r.t_d)), 1.0};
            },
            [](const Blackout&) {
                // Probabilities are irrelevant at zero rate; keep them valid.
                return EffectiveStatistics{CoincidenceProbabilities::from_types(0.0, 0.0, 0.0, 1.0), 0.0};
            },
        },
        s);
}

}  // namespace

TamperScenario to_scenario(const BaseScenario& base) {
    return std::visit([](const auto& s) -> TamperScenario { return s; }, base);
}

EffectiveStatistics effective_statistics(const TamperScenario& scenario, const TemporalModel& temporal,
                                         double window) {
    return std::visit(
        overloaded{
            [&](const ShortTimeInjection& inj) {
                if (!(window > 0.0)) {
                    throw ValidationError("injection requires a positive window duration");
                }
                if (!(inj.duration >= 0.0 && inj.duration <= window)) {
                    throw ValidationError("injection duration must lie in [0, T]");
                }
                const auto inner = base_statistics(inj.inner, temporal);
                const auto authentic = base_statistics(Authentic{inj.phase}, temporal);
                const double w_in = inj.duration / window;
                const double r_in = w_in * inner.pair_rate_scale;
                const double r_auth = (1.0 - w_in) * authentic.pair_rate_scale;
                const double rate = r_in + r_auth;
                if (rate <= 0.0) {
                    return EffectiveStatistics{authentic.probs, 0.0};
                }
                return EffectiveStatistics{CoincidenceProbabilities::mix(r_in / rate, inner.probs, authentic.probs),
                                           rate};
            },
            [&](const auto& s) { return base_statistics(BaseScenario{s}, temporal); },
        },
        scenario);
}

double mixed_correlation(double t, double window, double e0, double e1) {
    if (!(window > 0.0)) {
        throw ValidationError("window duration must be positive");
    }
    if (!(t >= 0.0 && t <= window)) {
        throw ValidationError("injection duration must lie in [0, T]");
    }
    return (t / window) * e0 + ((window - t) / window) * e1;
}

double min_spoof_duration(double e1, double e0, double epsilon, double window) {
    if (!(e1 > e0)) {
        throw DomainError("min_spoof_duration requires e1 > e0");
    }
    if (!(epsilon >= e0 && epsilon < e1)) {
        throw DomainError("min_spoof_duration requires e0 <= epsilon < e1");
    }
    return (e1 - epsilon) / (e1 - e0) * window;
}

double thermal_drift(double length_m, double delta_temp_c, double alpha) {
    if (!(length_m >= 0.0)) {
        throw ValidationError("fibre length must be non-negative");
    }
    return alpha * length_m * delta_temp_c;
}

}  // namespace qseal::attack
