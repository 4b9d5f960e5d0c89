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

// Channel conditions seen by the analyzer: the authentic seal and the
// tampering scenarios that can replace or disturb it.

#pragma once

#include <variant>

#include "qseal/photonics.hpp"

namespace qseal::attack {

using photonics::CoincidenceProbabilities;
using photonics::TemporalModel;
using photonics::TwoPhotonState;

/// Authentic Psi-like pair with relative phase `phase` (pi -> Psi+).
struct Authentic {
    double phase = photonics::kPi;
};

/// The active photon is measured and a replica pair state is injected.
struct InterceptResend {
    TwoPhotonState state;
};

/// The active photon is rerouted, adding a relative delay t_d (seconds).
struct Redirection {
    double t_d = 0.0;
};

/// Optical continuity is lost: no pairs reach the analyzer.
struct Blackout {};

/// Scenarios that may be injected for part of a window.
using BaseScenario = std::variant<Authentic, InterceptResend, Redirection, Blackout>;

/// `inner` replaces the authentic signal for `duration` seconds of each
/// window; the remainder is authentic with the given phase.
struct ShortTimeInjection {
    BaseScenario inner;
    double duration = 0.0;
    double phase = photonics::kPi;
};

using TamperScenario = std::variant<Authentic, InterceptResend, Redirection, ShortTimeInjection, Blackout>;

TamperScenario to_scenario(const BaseScenario& base);

struct EffectiveStatistics {
    CoincidenceProbabilities probs;
    /// Fraction of the nominal pair rate reaching the analyzer.
    double pair_rate_scale = 1.0;
};

/// Source statistics under `scenario`. `window` is the estimation window T
/// in seconds; it only matters for ShortTimeInjection, whose duration must
/// lie in [0, window].
EffectiveStatistics effective_statistics(const TamperScenario& scenario, const TemporalModel& temporal,
                                         double window);

/// (t/T) e0 + ((T-t)/T) e1.
double mixed_correlation(double t, double window, double e0, double e1);

/// Injection duration above which the window mean drops below epsilon.
double min_spoof_duration(double e1, double e0, double epsilon, double window);

/// One-way length change alpha * L0 * dT of a fibre.
double thermal_drift(double length_m, double delta_temp_c, double alpha = 1e-6);

}  // namespace qseal::attack
