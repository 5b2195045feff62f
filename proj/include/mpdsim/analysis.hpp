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

#include <complex>
#include <cstdint>
#include <vector>

#include "mpdsim/path_engine.hpp"

namespace mpd {

/// Complex amplitude on the uniform grid x_i = x0 + i dx.
struct SampledField {
    double x0 = 0;
    double dx = 0;
    std::vector<std::complex<double>> psi;
    /// max(|psi| at either edge) / max |psi|.
    double edge_ratio = 0;
    /// Fraction of spectral energy in the upper half of the band, which the
    /// discrete Wigner transform cannot represent.
    double spectral_tail = 0;
    bool clipped = false;

    double x(std::size_t i) const {
        return x0 + static_cast<double>(i) * dx;
    }
    std::size_t size() const {
        return psi.size();
    }
};

struct GridPolicy {
    std::size_t min_points = 4096;
    std::size_t max_points = std::size_t(1) << 16;
    double edge_tolerance = 1e-8;
    double tail_tolerance = 1e-12;
};

/// Samples the coherent sum of `states`, growing extent and density until the
/// edge and aliasing monitors pass or the point cap is reached (then `clipped`).
SampledField sample_states(const std::vector<PathState> &states, int threads, const GridPolicy &policy = {});

/// Samples over an explicit grid.
SampledField sample_states_on(const std::vector<PathState> &states, double x0, double dx, std::size_t n,
                              int threads);

/// Phi(p_j) = (2 pi hbar)^{-1/2} sum_i psi_i e^{-i p_j x_i / hbar} dx on
/// p_j = j * 2 pi hbar / (n dx), j in [-n/2, n/2). Unitary.
struct MomentumField {
    double p0 = 0;
    double dp = 0;
    std::vector<std::complex<double>> phi;
    bool clipped = false;
};
MomentumField momentum_transform(const SampledField &field);

/// Discrete Wigner function on the field grid, reduced to statistics plus a
/// decimated copy for output.
struct WignerGrid {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> w;  // row-major, x outer
    double integral = 0;
    double abs_integral = 0;
    double min_value = 0;
    /// L1 relative error of the p-marginal against |psi|^2.
    double marginal_error = 0;
    bool clipped = false;

    double at(std::size_t ix, std::size_t ip) const {
        return w[ix * p.size() + ip];
    }
};
WignerGrid wigner(const SampledField &field, int threads, std::size_t max_output = 1024);

/// (integral |W| / integral W - 1) / 2, i.e. after normalizing W to unit mass.
double negative_volume(const WignerGrid &w);

/// Trapezoid integral of |psi|^2.
double detection_probability(const SampledField &field);

/// Exact integral of |sum_n psi_n|^2 from pairwise closed-form overlaps.
double detection_probability(const std::vector<PathState> &states, int threads);

/// Exact per-path integrals of |psi_n|^2.
std::vector<double> path_magnitudes(const std::vector<PathState> &states, int threads);

/// Closed-form overlap integral of conj(psi_a) psi_b over the real line.
std::complex<double> overlap(const PathState &a, const PathState &b);

}  // namespace mpd
