// Copyright 2026 The mpdsim Authors
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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mpdsim/constants.hpp"
#include "mpdsim/lct.hpp"

namespace mpd {

enum class SourceKind { gaussian, hermite_gaussian };

/// `width` is sigma_0 for a Gaussian source and the waist W_0 for an HG one.
struct Source {
    SourceKind kind = SourceKind::gaussian;
    double width = 0;
    int order = 0;
};

/// Gaussian amplitude mask exp(-(x - center)^2 / (2 width^2)).
struct Slit {
    double center = 0;
    double width = 0;
};

struct DiffractionPlane {
    std::vector<Slit> slits;
};

namespace element {
struct FreeSpace {
    double length;
};
struct Lens {
    double focal;
};
/// Rotation angle alpha = order * pi / 2, so order 1 is the Fourier transform.
struct Frft {
    double order;
};
struct Scale {
    double a;
};
struct Chirp {
    double c;
};
struct Abcd {
    double a, b, c, d;
};
struct HarmonicOscillator {
    double duration;
};
}  // namespace element

using OpticsElement = std::variant<element::FreeSpace, element::Lens, element::Frft, element::Scale, element::Chirp,
                                   element::Abcd, element::HarmonicOscillator>;

/// Elements in order of application (first element acts first).
struct OpticsSegment {
    std::vector<OpticsElement> elements;
};

/// A segment made of a single harmonic-oscillator element runs through the
/// oscillator-specific recursion; every other segment is reduced to its matrix.
bool is_harmonic_segment(const OpticsSegment &segment);
double harmonic_duration(const OpticsSegment &segment);

LctMatrixd element_matrix(const OpticsElement &e, const PhotonConstantsd &consts);
LctMatrixd segment_matrix(const OpticsSegment &segment, const PhotonConstantsd &consts);

/// Intensity is sampled at x = k * ts for k in [k_min, k_max].
struct Sensor {
    double ts = 0;
    std::int64_t k_min = 0;
    std::int64_t k_max = 0;
};

inline constexpr std::uint64_t default_path_cap = std::uint64_t(1) << 24;

struct SetupConfig {
    double wavelength = 0;
    Source source;
    std::vector<DiffractionPlane> planes;
    std::vector<OpticsSegment> optics;
    Sensor sensor;
    std::uint64_t path_cap = default_path_cap;

    PhotonConstantsd constants() const {
        return PhotonConstantsd::from_wavelength(wavelength);
    }
    /// Number of planes including source and sensor.
    int plane_count() const {
        return static_cast<int>(planes.size()) + 1;
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const {
        return violations.empty();
    }
};

/// Sorts slit centers ascending (stable, so equal centers keep file order).
void canonicalize(SetupConfig &config);

ValidationReport validate(const SetupConfig &config);

/// Product of slit counts. Saturates at UINT64_MAX on overflow.
std::uint64_t path_count(const SetupConfig &config);

/// Mixed-radix digits of path n, plane 1 most significant. Indices are 0-based.
std::vector<int> path_slits(const SetupConfig &config, std::uint64_t n);
std::uint64_t path_index(const SetupConfig &config, const std::vector<int> &slits);

/// Segment matrices for the whole setup, validated for unit determinant.
std::vector<LctMatrixd> segment_matrices(const SetupConfig &config);

/// Concentric mixture sum_i a_i exp(-x^2 / (2 beta_i^2)).
struct GaussianMixtureMask {
    std::vector<double> amplitudes;
    std::vector<double> widths;
    double residual_rms = 0;

    double operator()(double x) const;
};

/// Least-squares fit of a K-term mixture to (x, value) samples. Amplitudes
/// come from a linear solve given the widths; widths from Levenberg-Marquardt
/// over log-width, restarted from several log-spaced seeds.
GaussianMixtureMask fit_gaussian_mixture(const std::vector<double> &x, const std::vector<double> &value, int terms);

}  // namespace mpd
