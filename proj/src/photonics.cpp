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

#include "qseal/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qseal/error.hpp"

namespace qseal::photonics {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::size_t idx(Pathway p) { return static_cast<std::size_t>(p); }

}  // namespace

TwoPhotonState::TwoPhotonState(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
    if (!finite(a) || !finite(b) || !finite(c) || !finite(d)) {
        throw ValidationError("two-photon state has non-finite amplitude");
    }
    const double n = norm_squared();
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw ValidationError("two-photon state is not normalized (norm^2 = " + std::to_string(n) + ")");
    }
}

TwoPhotonState TwoPhotonState::normalized(Complex a, Complex b, Complex c, Complex d) {
    const double n = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("cannot normalize a zero or non-finite amplitude vector");
    }
    const double s = 1.0 / std::sqrt(n);
    return TwoPhotonState(a * s, b * s, c * s, d * s);
}

double TwoPhotonState::norm_squared() const {
    return std::norm(a_) + std::norm(b_) + std::norm(c_) + std::norm(d_);
}

TwoPhotonState to_state(BellState bell) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (bell) {
        case BellState::PsiPlus:
            return TwoPhotonState(0.0, r, r, 0.0);
        case BellState::PsiMinus:
            return TwoPhotonState(0.0, r, -r, 0.0);
        case BellState::PhiPlus:
            return TwoPhotonState(r, 0.0, 0.0, r);
        case BellState::PhiMinus:
            return TwoPhotonState(r, 0.0, 0.0, -r);
    }
    throw ValidationError("unknown Bell state");
}

std::string_view pathway_name(Pathway p) {
    switch (p) {
        case Pathway::H2H3: return "h2h3";
        case Pathway::V2V3: return "v2v3";
        case Pathway::H2H2: return "h2h2";
        case Pathway::H3H3: return "h3h3";
        case Pathway::V2V2: return "v2v2";
        case Pathway::V3V3: return "v3v3";
        case Pathway::H2V2: return "h2v2";
        case Pathway::H3V3: return "h3v3";
        case Pathway::H2V3: return "h2v3";
        case Pathway::V2H3: return "v2h3";
    }
    return "?";
}

CoincidenceType type_of(Pathway p) {
    switch (p) {
        case Pathway::H2H3:
        case Pathway::V2V3:
            return CoincidenceType::SD;
        case Pathway::H2H2:
        case Pathway::H3H3:
        case Pathway::V2V2:
        case Pathway::V3V3:
            return CoincidenceType::SS;
        case Pathway::H2V2:
        case Pathway::H3V3:
            return CoincidenceType::DS;
        case Pathway::H2V3:
        case Pathway::V2H3:
            return CoincidenceType::DD;
    }
    throw ValidationError("unknown pathway");
}

CoincidenceProbabilities::CoincidenceProbabilities(const std::array<double, kPathwayCount>& pathway)
    : pathway_(pathway) {
    for (double p : pathway_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw ValidationError("pathway probability must be finite and non-negative");
        }
    }
    const double total = std::accumulate(pathway_.begin(), pathway_.end(), 0.0);
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw ValidationError("pathway probabilities do not sum to one");
    }
}

CoincidenceProbabilities CoincidenceProbabilities::from_types(double p_ss, double p_sd, double p_ds, double p_dd) {
    std::array<double, kPathwayCount> p{};
    p[idx(Pathway::H2H3)] = p[idx(Pathway::V2V3)] = p_sd / 2.0;
    p[idx(Pathway::H2H2)] = p[idx(Pathway::H3H3)] = p[idx(Pathway::V2V2)] = p[idx(Pathway::V3V3)] = p_ss / 4.0;
    p[idx(Pathway::H2V2)] = p[idx(Pathway::H3V3)] = p_ds / 2.0;
    p[idx(Pathway::H2V3)] = p[idx(Pathway::V2H3)] = p_dd / 2.0;
    return CoincidenceProbabilities(p);
}

double CoincidenceProbabilities::p_ss() const {
    return pathway(Pathway::H2H2) + pathway(Pathway::H3H3) + pathway(Pathway::V2V2) + pathway(Pathway::V3V3);
}

double CoincidenceProbabilities::p_sd() const { return pathway(Pathway::H2H3) + pathway(Pathway::V2V3); }

double CoincidenceProbabilities::p_ds() const { return pathway(Pathway::H2V2) + pathway(Pathway::H3V3); }

double CoincidenceProbabilities::p_dd() const { return pathway(Pathway::H2V3) + pathway(Pathway::V2H3); }

CoincidenceProbabilities CoincidenceProbabilities::mix(double w, const CoincidenceProbabilities& x,
                                                       const CoincidenceProbabilities& y) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw ValidationError("mixture weight must lie in [0,1]");
    }
    std::array<double, kPathwayCount> p{};
    for (std::size_t i = 0; i < kPathwayCount; ++i) {
        p[i] = w * x.pathway_[i] + (1.0 - w) * y.pathway_[i];
    }
    return CoincidenceProbabilities(p);
}

TemporalModel::TemporalModel(double t_d, double delta_t) : t_d_(t_d), delta_t_(delta_t) {
    if (!std::isfinite(t_d)) {
        throw ValidationError("delay must be finite");
    }
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
        throw ValidationError("walk-off window delta_t must be positive");
    }
}

double TemporalModel::envelope() const { return triangle(2.0 * t_d_ / delta_t_); }

CoincidenceProbabilities bsa_probabilities(const TwoPhotonState& state) {
    const double aa = std::norm(state.a());
    const double bb = std::norm(state.b());
    const double cc = std::norm(state.c());
    const double dd = std::norm(state.d());
    const double e = correlation(state);

    std::array<double, kPathwayCount> p{};
    p[idx(Pathway::H2H2)] = p[idx(Pathway::H3H3)] = aa / 2.0;
    p[idx(Pathway::V2V2)] = p[idx(Pathway::V3V3)] = dd / 2.0;
    // |b|^2+|c|^2 >= |b*c+bc*|; clamp rounding below zero.
    p[idx(Pathway::H2V3)] = p[idx(Pathway::V2H3)] = std::max(0.0, (bb + cc + e) / 4.0);
    p[idx(Pathway::H2V2)] = p[idx(Pathway::H3V3)] = std::max(0.0, (bb + cc - e) / 4.0);
    return CoincidenceProbabilities(p);
}

double correlation(const TwoPhotonState& state) {
    // b*c + bc* = 2 Re(b* c), taken relative to the norm so that rounding in
    // the amplitudes cancels (Bell states give exactly +-1).
    return 2.0 * (std::conj(state.b()) * state.c()).real() / state.norm_squared();
}

TwoPhotonState separable_state(double alpha, double beta, double phase_a, double phase_b) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(phase_a) || !std::isfinite(phase_b)) {
        throw ValidationError("separable_state angles must be finite");
    }
    alpha = std::remainder(alpha, 2.0 * kPi);
    beta = std::remainder(beta, 2.0 * kPi);
    const Complex ea = std::polar(1.0, phase_a);
    const Complex eb = std::polar(1.0, phase_b);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    return TwoPhotonState::normalized(ca * cb, eb * (ca * sb), ea * (sa * cb), ea * eb * (sa * sb));
}

double triangle(double x) {
    const double ax = std::abs(x);
    return ax <= 1.0 ? 1.0 - ax : 0.0;
}

double multimode_correlation(const TwoPhotonState& state, const TemporalModel& temporal) {
    return temporal.envelope() * correlation(state);
}

CoincidenceProbabilities multimode_probabilities(double phase, const TemporalModel& temporal) {
    // p_ds + p_dd = 1 for a Psi-like source, so no extra normalization is needed.
    const double e = temporal.envelope() * std::cos(phase + kPi);
    const double p_dd = std::clamp(0.5 * (1.0 + e), 0.0, 1.0);
    return CoincidenceProbabilities::from_types(0.0, 0.0, 1.0 - p_dd, p_dd);
}

std::pair<double, double> bell_overlap(const TwoPhotonState& state) {
    const auto p = bsa_probabilities(state);
    return {p.pathway(Pathway::H2V3) + p.pathway(Pathway::V2H3), p.pathway(Pathway::H2V2) + p.pathway(Pathway::H3V3)};
}

double delay_from_length(double length_m, double group_index) { return group_index * length_m / kSpeedOfLight; }

double length_from_delay(double t_d, double group_index) { return t_d * kSpeedOfLight / group_index; }

}  // namespace qseal::photonics
