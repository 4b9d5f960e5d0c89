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

#include "qseal/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qseal/error.hpp"

namespace qseal::estimation {

namespace {

constexpr double kRescaleAt = 1e280;
constexpr double kTolerance = 1e-17;
constexpr long kMaxTerms = 100'000'000;

}  // namespace

double ScaledValue::value() const {
    if (mantissa == 0.0) {
        return 0.0;
    }
    return std::copysign(std::exp(std::log(std::abs(mantissa)) + log_scale), mantissa);
}

double ScaledValue::log_abs() const {
    if (mantissa == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(std::abs(mantissa)) + log_scale;
}

ScaledValue hyp2f1_series(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z)) {
        throw DomainError("hyp2f1: non-finite argument");
    }
    if (!(c > 0.0)) {
        throw DomainError("hyp2f1: requires c > 0");
    }
    if (!(std::abs(z) <= 0.5)) {
        throw DomainError("hyp2f1: requires |z| <= 1/2");
    }

    double term = 1.0;
    double sum = 1.0;
    double log_scale = 0.0;
    const double log_rescale = std::log(kRescaleAt);
    for (long k = 0; k < kMaxTerms; ++k) {
        const double kd = static_cast<double>(k);
        const double ratio = (a + kd) * (b + kd) * z / ((c + kd) * (kd + 1.0));
        term *= ratio;
        sum += term;
        if (term == 0.0) {
            return {sum, log_scale};
        }
        if (std::abs(sum) > kRescaleAt || std::abs(term) > kRescaleAt) {
            sum /= kRescaleAt;
            term /= kRescaleAt;
            log_scale += log_rescale;
        }
        // For j >= k+1 (past any negative a, b) every later term ratio is
        // bounded by |z| max((a+j)/(j+1), 1) max((b+j)/(c+j), 1), which is
        // non-increasing in j, so the tail is dominated by a geometric series.
        const double j = kd + 1.0;
        if (j >= -a && j >= -b) {
            const double bound =
                std::abs(z) * std::max((a + j) / (j + 1.0), 1.0) * std::max((b + j) / (c + j), 1.0);
            if (bound < 1.0 && std::abs(term) * bound / (1.0 - bound) <= kTolerance * std::abs(sum)) {
                return {sum, log_scale};
            }
        }
    }
    throw DomainError("hyp2f1: series did not converge within the term budget");
}

double hyp2f1_regularized(double a, double b, double c, double z) {
    const auto s = hyp2f1_series(a, b, c, z);
    if (s.mantissa == 0.0) {
        return 0.0;
    }
    return std::copysign(std::exp(s.log_abs() - std::lgamma(c)), s.mantissa);
}

double log_hyp2f1_regularized(double a, double b, double c, double z) {
    const auto s = hyp2f1_series(a, b, c, z);
    if (!(s.mantissa > 0.0)) {
        throw DomainError("hyp2f1: value is not positive");
    }
    return s.log_abs() - std::lgamma(c);
}

double regularized_shift_ratio(double a, double b, double c, int shift, double z) {
    if (shift < 0) {
        throw DomainError("hyp2f1 ratio: shift must be non-negative");
    }
    const auto lo = hyp2f1_series(a, b, c, z);
    const auto hi = hyp2f1_series(a, b, c + shift, z);
    if (lo.mantissa == 0.0) {
        throw DomainError("hyp2f1 ratio: denominator vanishes");
    }
    double r = (hi.mantissa / lo.mantissa) * std::exp(hi.log_scale - lo.log_scale);
    // Gamma(c) / Gamma(c + shift) = 1 / (c (c+1) ... (c+shift-1))
    for (int i = 0; i < shift; ++i) {
        r /= c + i;
    }
    return r;
}

}  // namespace qseal::estimation
