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

#include "qseal/decision.hpp"

#include <cmath>
#include <iomanip>

#include "qseal/error.hpp"

namespace qseal::decision {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrtPi = 1.77245385090551602730;

// Starting point for the Newton refinement: Giles' single-precision erfinv
// approximation, good to ~1e-7 relative.
double erfinv_guess(double x) {
    double w = -std::log((1.0 - x) * (1.0 + x));
    double p;
    if (w < 5.0) {
        w -= 2.5;
        p = 2.81022636e-08;
        p = 3.43273939e-07 + p * w;
        p = -3.5233877e-06 + p * w;
        p = -4.39150654e-06 + p * w;
        p = 0.00021858087 + p * w;
        p = -0.00125372503 + p * w;
        p = -0.00417768164 + p * w;
        p = 0.246640727 + p * w;
        p = 1.50140941 + p * w;
    } else {
        w = std::sqrt(w) - 3.0;
        p = -0.000200214257;
        p = 0.000100950558 + p * w;
        p = 0.00134934322 + p * w;
        p = -0.00367342844 + p * w;
        p = 0.00573950773 + p * w;
        p = -0.0076224613 + p * w;
        p = 0.00943887047 + p * w;
        p = 1.00167406 + p * w;
        p = 2.83297682 + p * w;
    }
    return p * x;
}

}  // namespace

double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0)) {
        throw DomainError("erfc_inv: argument must lie in (0, 2)");
    }
    if (y == 1.0) {
        return 0.0;
    }
    // Work on the tail side where erfc is small and well conditioned.
    const bool upper = y > 1.0;
    const double q = upper ? 2.0 - y : y;

    double x;
    if (q > 1e-7) {
        x = erfinv_guess(1.0 - q);
    } else {
        // Asymptotic start for the far tail.
        const double l = -std::log(q * kSqrtPi);
        x = std::sqrt(l - 0.5 * std::log(l));
    }
    // Halley iterations on f(x) = erfc(x) - q, computed in relative form so
    // that tiny q keep full precision.
    for (int i = 0; i < 60; ++i) {
        const double fx = std::erfc(x);
        const double deriv = -2.0 / kSqrtPi * std::exp(-x * x);
        const double step = (fx - q) / deriv;
        const double dx = step / (1.0 + x * step);
        x -= dx;
        if (std::abs(dx) <= 1e-16 * std::abs(x)) {
            break;
        }
    }
    return upper ? -x : x;
}

void OperatingModel::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be positive");
    }
    if (!(std::abs(e0) <= 1.0) || !(std::abs(e1) <= 1.0)) {
        throw ValidationError("e0 and e1 must lie in [-1, 1]");
    }
}

void DecisionConfig::validate() const {
    model.validate();
    if (!(std::abs(model.e0) <= 0.5)) {
        throw ValidationError("tampered mean e0 must satisfy |e0| <= 1/2");
    }
    if (!(model.e0 <= epsilon && epsilon < model.e1 && model.e1 <= 1.0)) {
        throw ValidationError("decision config requires e0 <= epsilon < e1 <= 1");
    }
    if (!(min_coincidences >= 0.0)) {
        throw ValidationError("min_coincidences must be non-negative");
    }
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Authentic: return "Authentic";
        case Outcome::TamperAlarm: return "TamperAlarm";
        case Outcome::BlackoutAlarm: return "BlackoutAlarm";
    }
    return "?";
}

Verdict decide(const estimation::Estimate& est, const DecisionConfig& cfg) {
    Verdict v;
    v.window_id = est.window_id;
    v.e_kappa = est.e_kappa;
    v.sigma_kappa = est.sigma_kappa;
    v.threshold_used = cfg.epsilon;
    if (est.n <= 0.0 || est.n < cfg.min_coincidences) {
        v.outcome = Outcome::BlackoutAlarm;
    } else if (est.e_kappa <= cfg.epsilon) {
        v.outcome = Outcome::TamperAlarm;
    } else {
        v.outcome = Outcome::Authentic;
    }
    return v;
}

DetectionStats detection_stats(const OperatingModel& model, double epsilon) {
    model.validate();
    const double scale = kSqrt2 * model.sigma;
    DetectionStats s;
    s.p_d = 0.5 * std::erfc((model.e0 - epsilon) / scale);
    s.p_far = 0.5 * std::erfc((model.e1 - epsilon) / scale);
    s.p_spoof = 0.5 * std::erfc((epsilon - model.e0) / scale);  // 1 - p_d without cancellation
    return s;
}

double threshold_for_far(double e1, double sigma, double target_far) {
    if (!(target_far > 0.0 && target_far <= 0.5)) {
        throw DomainError("target false-alarm probability must lie in (0, 0.5]");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("sigma must be positive");
    }
    return e1 - kSqrt2 * sigma * erfc_inv(2.0 * target_far);
}

std::vector<RocPoint> roc_curve(const OperatingModel& model, std::size_t n_points) {
    if (n_points < 2) {
        throw ValidationError("roc_curve needs at least two points");
    }
    model.validate();
    const double lo = std::min(model.e0, model.e1) - 6.0 * model.sigma;
    const double hi = std::max(model.e0, model.e1) + 6.0 * model.sigma;
    std::vector<RocPoint> out;
    out.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double eps = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const auto s = detection_stats(model, eps);
        out.push_back({eps, s.p_far, s.p_d});
    }
    return out;
}

void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& curve) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << "epsilon,p_far,p_d\n" << std::setprecision(17);
    for (const auto& p : curve) {
        out << p.epsilon << ',' << p.p_far << ',' << p.p_d << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

}  // namespace qseal::decision
