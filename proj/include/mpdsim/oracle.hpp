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
#include <optional>
#include <vector>

#include "mpdsim/analysis.hpp"
#include "mpdsim/setup.hpp"

namespace mpd {

/// K(x1, x0) = amp exp(i (q1 x1^2 + q10 x1 x0 + q0 x0^2)), built directly from
/// each kernel's physical form rather than from the path engine.
struct OracleKernel {
    std::complex<double> amp;
    double q1 = 0, q10 = 0, q0 = 0;

    std::complex<double> operator()(double x1, double x0) const;
    /// Largest |d phase / d x0| over the box [x1lo, x1hi] x [x0lo, x0hi].
    double phase_rate(double x1lo, double x1hi, double x0lo, double x0hi) const;

    static OracleKernel lct(double a, double b, double c, double d);
    static OracleKernel free_space(double length, double wavelength);
    static OracleKernel harmonic(double duration, double wavelength);
    static OracleKernel massive(double mass, double duration);
};

/// Uniform sample positions x0 + i dx.
struct OracleGrid {
    double x0 = 0;
    double dx = 0;
    std::size_t n = 0;

    static OracleGrid spanning(double lo, double hi, std::size_t n);
    std::vector<double> points() const;
};

struct Propagation {
    SampledField field;
    double norm_in = 0;
    double norm_out = 0;
};

/// Trapezoid quadrature of the kernel integral onto `out`. Throws GridError
/// when the integrand's phase advances by pi/2 or more between input samples.
Propagation quadrature_propagate(const SampledField &in, const OracleKernel &kernel, const OracleGrid &out,
                                 int threads);

/// Same integral at arbitrary output points.
std::vector<std::complex<double>> quadrature_at(const SampledField &in, const OracleKernel &kernel,
                                                const std::vector<double> &xs, int threads);

/// Multiplies by one slit's mask, or by the sum of all masks when `slit` is empty.
SampledField apply_slit_plane(const SampledField &field, const DiffractionPlane &plane, std::optional<int> slit);

struct Comparison {
    double linf_abs = 0, linf_rel = 0;
    double l2_abs = 0, l2_rel = 0;
};

/// Errors of `a` against reference `b`; relative figures are scaled by the
/// reference's max and norm. With `align`, `a` is first rotated onto `b` at
/// the reference's largest sample.
Comparison compare(const std::vector<std::complex<double>> &a, const std::vector<std::complex<double>> &b,
                   bool align);
Comparison compare(const SampledField &a, const SampledField &b, bool align);

/// Kernel for one optics segment: the free-space or harmonic form for a lone
/// element, the composed LCT otherwise. Throws DomainError when b = 0.
OracleKernel segment_kernel(const OpticsSegment &segment, double wavelength);

struct OraclePolicy {
    std::size_t points = 8192;
    std::size_t max_points = std::size_t(1) << 17;
};

/// Brute-force field at the sensor positions `xs`, through one path (`slits`)
/// or through every slit of every plane (`slits` empty).
std::vector<std::complex<double>> oracle_sensor_field(const SetupConfig &config, const std::vector<int> &slits,
                                                      const std::vector<double> &xs, int threads,
                                                      const OraclePolicy &policy = {});

/// Brute-force field arriving at plane j (before its mask), on `out`.
SampledField oracle_plane_field(const SetupConfig &config, int plane, const std::vector<int> &slits,
                                const OracleGrid &out, int threads, const OraclePolicy &policy = {});

}  // namespace mpd
