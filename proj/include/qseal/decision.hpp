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

// Binary tamper decision on a window estimate.
//
// Under tampering the estimate is modelled as N(e0, sigma^2) with |e0| <= 1/2;
// authentic operation gives N(e1, sigma^2). An alarm is raised when the
// estimate falls to or below the threshold epsilon.

#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

#include "qseal/estimator.hpp"

namespace qseal::decision {

/// Inverse complementary error function on (0, 2). DomainError outside.
double erfc_inv(double y);

struct OperatingModel {
    double e0 = 0.5;
    double e1 = 0.8;
    double sigma = 0.03;

    /// sigma > 0, e0 and e1 in [-1, 1] (ValidationError).
    void validate() const;
};

struct DecisionConfig {
    double epsilon = 0.62;
    OperatingModel model;
    /// Windows with fewer total corrected coincidences raise BlackoutAlarm.
    double min_coincidences = 0.0;

    /// e0 <= epsilon < e1 <= 1, |e0| <= 1/2, sigma > 0 (ValidationError).
    void validate() const;
};

enum class Outcome { Authentic, TamperAlarm, BlackoutAlarm };

std::string_view to_string(Outcome o);

struct Verdict {
    std::uint32_t window_id = 0;
    double e_kappa = 0.0;
    double sigma_kappa = 0.0;
    Outcome outcome = Outcome::Authentic;
    double threshold_used = 0.0;
};

/// Blackout (count starvation) is checked before the threshold.
Verdict decide(const estimation::Estimate& est, const DecisionConfig& cfg);

struct DetectionStats {
    double p_d = 0.0;
    double p_far = 0.0;
    /// 1 - p_d
    double p_spoof = 0.0;
};

DetectionStats detection_stats(const OperatingModel& model, double epsilon);

/// Threshold whose false-alarm probability equals target_far, which must lie
/// in (0, 0.5] (DomainError otherwise).
double threshold_for_far(double e1, double sigma, double target_far);

struct RocPoint {
    double epsilon;
    double p_far;
    double p_d;
};

/// Sweep of epsilon over [e0 - 6 sigma, e1 + 6 sigma], ascending.
/// ValidationError if n_points < 2.
std::vector<RocPoint> roc_curve(const OperatingModel& model, std::size_t n_points);

/// Header `epsilon,p_far,p_d` then one row per point at 17 significant digits.
void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& curve);

}  // namespace qseal::decision
