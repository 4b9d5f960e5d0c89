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

#include "qseal/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qseal/error.hpp"
#include "qseal/hypergeometric.hpp"

namespace qseal::estimation {

namespace {

constexpr double kQuarter = 0.25;

void validate(const KappaTotals& k) {
    for (double v : {k.k_sd, k.k_ss, k.k_ds, k.k_dd}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("coincidence totals must be finite and non-negative");
        }
    }
}

// k * log(p) with 0^0 = 1.
double xlogy(double k, double p) {
    if (k == 0.0) {
        return 0.0;
    }
    return p > 0.0 ? k * std::log(p) : -std::numeric_limits<double>::infinity();
}

}  // namespace

TypeProbabilities type_probabilities(const photonics::CoincidenceProbabilities& p) {
    return {p.p_sd(), p.p_ss(), p.p_ds(), p.p_dd()};
}

double log_posterior_density(const TypeProbabilities& p, const KappaTotals& kappa) {
    validate(kappa);
    for (double v : {p.p_sd, p.p_ss, p.p_ds, p.p_dd}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("probabilities must be non-negative");
        }
    }
    if (std::abs(p.p_sd + p.p_ss + p.p_ds + p.p_dd - 1.0) > photonics::kNormTolerance) {
        throw ValidationError("probabilities are off the simplex");
    }
    const double x = p.p_ss / 4.0;
    return xlogy(kappa.k_sd, p.p_sd) + xlogy(kappa.k_ds, p.p_ds) + xlogy(kappa.k_dd, p.p_dd) +
           xlogy(kappa.k_ss, x) - (kappa.k_ss + 1.0) * std::log1p(-x);
}

double posterior_density(const TypeProbabilities& p, const KappaTotals& kappa) {
    return std::exp(log_posterior_density(p, kappa));
}

Estimate estimate_correlation(const KappaTotals& kappa, std::uint32_t window_id) {
    validate(kappa);
    const double n = kappa.total();
    const double a = 1.0 + kappa.k_ss;
    const double c = n + 4.0;
    const double diff = kappa.k_dd - kappa.k_ds;

    const double mean = diff * regularized_shift_ratio(a, a, c, 1, kQuarter);
    const double second =
        (diff * diff + kappa.k_dd + kappa.k_ds + 2.0) * regularized_shift_ratio(a, a, c, 2, kQuarter);

    Estimate est;
    est.e_kappa = std::clamp(mean, -1.0, 1.0);
    est.sigma_kappa = std::sqrt(std::max(0.0, second - mean * mean));
    est.n = n;
    est.window_id = window_id;
    return est;
}

GaussianModel::GaussianModel(double center, double sigma) : center_(center), sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(center)) {
        throw ValidationError("gaussian model needs a finite center and positive sigma");
    }
}

double GaussianModel::density(double x) const {
    const double z = (x - center_) / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * photonics::kPi));
}

double GaussianModel::cdf(double x) const { return 0.5 * std::erfc(-(x - center_) / (sigma_ * std::sqrt(2.0))); }

GaussianModel gaussian_model(double e_center, double sigma) { return GaussianModel(e_center, sigma); }

}  // namespace qseal::estimation
