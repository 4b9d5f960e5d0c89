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

// Two-photon polarization states and the detection statistics of a
// beamsplitter-based Bell-state analyzer (BSA).
//
// Spatial modes 0 and 1 enter the beamsplitter; modes 2 and 3 leave it and
// are each split by polarization (h/v). A coincidence is labelled by the two
// (polarization, port) outputs that fired.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>

namespace qseal::photonics {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Tolerance applied when validating that a state is normalized.
inline constexpr double kNormTolerance = 1e-9;

/// a|H0 H1> + b|H0 V1> + c|V0 H1> + d|V0 V1>, normalized.
///
/// States that differ by a global phase give identical results for every
/// operation in this module.
class TwoPhotonState {
public:
    /// Throws ValidationError unless |a|^2+|b|^2+|c|^2+|d|^2 = 1 within
    /// kNormTolerance.
    TwoPhotonState(Complex a, Complex b, Complex c, Complex d);

    /// Rescales the given amplitudes to unit norm. Throws ValidationError
    /// for the zero vector or non-finite input.
    static TwoPhotonState normalized(Complex a, Complex b, Complex c, Complex d);

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }

    double norm_squared() const;

private:
    Complex a_, b_, c_, d_;
};

enum class BellState { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

TwoPhotonState to_state(BellState bell);

/// The ten coincidence pathways of the analyzer. Port-3 same-polarization
/// pathways (H3H3, V3V3) exist physically but are not monitored.
enum class Pathway : std::uint8_t {
    H2H3,
    V2V3,
    H2H2,
    H3H3,
    V2V2,
    V3V3,
    H2V2,
    H3V3,
    H2V3,
    V2H3,
};

inline constexpr std::size_t kPathwayCount = 10;

inline constexpr std::array<Pathway, kPathwayCount> kAllPathways = {
    Pathway::H2H3, Pathway::V2V3, Pathway::H2H2, Pathway::H3H3, Pathway::V2V2,
    Pathway::V3V3, Pathway::H2V2, Pathway::H3V3, Pathway::H2V3, Pathway::V2H3,
};

std::string_view pathway_name(Pathway p);

/// Coincidence type: (same|different polarization, same|different port).
enum class CoincidenceType { SS, SD, DS, DD };

CoincidenceType type_of(Pathway p);

/// Per-pathway probabilities; the four type probabilities are sums over them.
class CoincidenceProbabilities {
public:
    CoincidenceProbabilities() = default;

    /// Throws ValidationError for negative or non-finite entries, or if the
    /// total differs from 1 by more than kNormTolerance.
    explicit CoincidenceProbabilities(const std::array<double, kPathwayCount>& pathway);

    /// Spreads type probabilities over pathways using the analyzer symmetry:
    /// sd and ds/dd split in halves, ss in quarters.
    static CoincidenceProbabilities from_types(double p_ss, double p_sd, double p_ds, double p_dd);

    double pathway(Pathway p) const { return pathway_[static_cast<std::size_t>(p)]; }
    const std::array<double, kPathwayCount>& pathways() const { return pathway_; }

    double p_ss() const;
    double p_sd() const;
    double p_ds() const;
    double p_dd() const;

    /// p_dd - p_ds.
    double correlation() const { return p_dd() - p_ds(); }

    /// Convex combination w*x + (1-w)*y.
    static CoincidenceProbabilities mix(double w, const CoincidenceProbabilities& x,
                                        const CoincidenceProbabilities& y);

private:
    std::array<double, kPathwayCount> pathway_{};
};

/// Relative delay between active and reference photon and the crystal
/// walk-off time that sets the width of the two-photon interference dip.
class TemporalModel {
public:
    /// delta_t must be positive and finite; t_d finite.
    TemporalModel(double t_d, double delta_t);

    static TemporalModel ideal() { return TemporalModel(0.0, 8e-12); }

    double t_d() const { return t_d_; }
    double delta_t() const { return delta_t_; }

    /// Triangle visibility envelope at this delay.
    double envelope() const;

    TemporalModel with_delay(double t_d) const { return TemporalModel(t_d, delta_t_); }

private:
    double t_d_;
    double delta_t_;
};

CoincidenceProbabilities bsa_probabilities(const TwoPhotonState& state);

/// b*c + b c*, equal to p_dd - p_ds of bsa_probabilities.
double correlation(const TwoPhotonState& state);

/// (cos a|H> + e^{iA} sin a|V>) (cos b|H> + e^{iB} sin b|V>).
TwoPhotonState separable_state(double alpha, double beta, double phase_a, double phase_b);

/// 1-|x| on [-1,1], zero elsewhere.
double triangle(double x);

/// Triangle envelope times the monochromatic correlation.
double multimode_correlation(const TwoPhotonState& state, const TemporalModel& temporal);

/// Statistics of a Psi-like source whose relative phase is `phase`
/// (phase = pi gives Psi+, phase = 0 gives Psi-) with partial temporal
/// distinguishability.
CoincidenceProbabilities multimode_probabilities(double phase, const TemporalModel& temporal);

/// (|<state|Psi+>|^2, |<state|Psi->|^2).
std::pair<double, double> bell_overlap(const TwoPhotonState& state);

/// Delay introduced by a one-way path length change in fibre of the given
/// group index.
double delay_from_length(double length_m, double group_index = 1.47);
double length_from_delay(double t_d, double group_index = 1.47);

}  // namespace qseal::photonics
