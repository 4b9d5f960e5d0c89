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

#pragma once

namespace qseal::estimation {

/// mantissa * exp(log_scale); keeps very large or small series sums finite.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const;
    /// log|value|; -inf for zero.
    double log_abs() const;
};

/// Gauss series of 2F1(a,b;c;z), summed to ~1e-16 relative.
///
/// Requires c > 0 and |z| <= 1/2; throws DomainError otherwise or if the
/// series has not converged within the term budget.
ScaledValue hyp2f1_series(double a, double b, double c, double z);

/// 2F1(a,b;c;z) / Gamma(c). May underflow to 0 for very large c; use
/// log_hyp2f1_regularized for ratios.
double hyp2f1_regularized(double a, double b, double c, double z);

/// log of 2F1(a,b;c;z) / Gamma(c); DomainError if the value is not positive.
double log_hyp2f1_regularized(double a, double b, double c, double z);

/// 2F1~(a,b;c+shift;z) / 2F1~(a,b;c;z) for a non-negative integer shift,
/// without forming Gamma(c) separately.
double regularized_shift_ratio(double a, double b, double c, int shift, double z);

}  // namespace qseal::estimation
