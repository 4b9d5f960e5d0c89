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

// Bayesian estimate of the correlation E = p_dd - p_ds from coincidence-type
// totals.
//
// Under a uniform prior on the simplex {p_sd, p_ss, p_ds, p_dd} the
// posterior is
//
//   p_sd^k_sd p_ds^k_ds p_dd^k_dd (p_ss/4)^k_ss / (1 - p_ss/4)^(k_ss+1),
//
// where the last factor sums the unobserved same-port same-polarization
// events. Integrating p_ss out (Euler's integral) leaves regularized 2F1
// ratios at z = 1/4 with a = b = 1 + k_ss:
//
//   E_k      = (k_dd - k_ds)                           F~(n+5) / F~(n+4)
//   (E^2)_k  = ((k_dd - k_ds)^2 + k_dd + k_ds + 2)     F~(n+6) / F~(n+4)
//
// with n = k_sd + k_ss + k_ds + k_dd. Counts may be fractional.

#pragma once

#include <cstdint>

#include "qseal/coincidence.hpp"
#include "qseal/photonics.hpp"

namespace qseal::estimation {

using wire::KappaTotals;

struct Estimate {
    double e_kappa = 0.0;
    double sigma_kappa = 0.0;
    /// Total normalized coincidences.
    double n = 0.0;
    std::uint32_t window_id = 0;
};

struct TypeProbabilities {
    double p_sd = 0.0;
    double p_ss = 0.0;
    double p_ds = 0.0;
    double p_dd = 0.0;
};

TypeProbabilities type_probabilities(const photonics::CoincidenceProbabilities& p);

/// Unnormalized posterior density. ValidationError if p is off the simplex
/// (negative entries or sum differing from 1 by more than 1e-9) or kappa is
/// negative.
double posterior_density(const TypeProbabilities& p, const KappaTotals& kappa);
double log_posterior_density(const TypeProbabilities& p, const KappaTotals& kappa);

/// Closed-form posterior mean and standard deviation of p_dd - p_ds.
/// ValidationError for negative or non-finite kappa.
Estimate estimate_correlation(const KappaTotals& kappa, std::uint32_t window_id = 0);

struct OracleOptions {
    /// Absolute agreement required between successive refinement levels.
    double tolerance = 1e-10;
    /// Finest level: step 2^-max_level in the tanh-sinh variable.
    int max_level = 12;
};

/// Posterior mean and standard deviation by deterministic tanh-sinh
/// quadrature over the simplex, refined level by level until two levels
/// agree. Intended for n <= 1e4 (ValidationError above); ResolutionError if
/// the tolerance is not met by max_level.
Estimate oracle_estimate(const KappaTotals& kappa, const OracleOptions& options = {});

/// Normal approximation of the estimate's sampling distribution.
class GaussianModel {
public:
    /// sigma must be positive (ValidationError).
    GaussianModel(double center, double sigma);

    double density(double x) const;
    double cdf(double x) const;

    double center() const { return center_; }
    double sigma() const { return sigma_; }

private:
    double center_;
    double sigma_;
};

GaussianModel gaussian_model(double e_center, double sigma);

}  // namespace qseal::estimation
