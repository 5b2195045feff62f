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

#include <Eigen/Dense>

#include "mpdsim/setup.hpp"

namespace mpd {

inline constexpr std::uint64_t theta_term_cap = std::uint64_t(1) << 24;
inline constexpr int theta_max_dimension = 12;

/// sum over a in [-M, M]^n of exp(-pi a^T G a + 2 pi y^T a), lexicographic
/// order, compensated. Parallel over blocks of the leading index.
std::complex<double> theta_partial_sum(const Eigen::MatrixXcd &gamma, const Eigen::VectorXcd &y, int m,
                                       int threads = 1);

/// Finite-band NLSE data.
struct RiemannSpectrum {
    Eigen::MatrixXd Y;
    Eigen::VectorXd k, omega;
    Eigen::VectorXd delta_minus, delta_plus;
    double k0 = 0, omega0 = 0;
    std::complex<double> q0 = 1;
};

/// Throws ValidationError when Y is not symmetric positive-definite or the
/// vector sizes disagree.
void validate_spectrum(const RiemannSpectrum &s);

struct NlseValue {
    std::complex<double> q;
    /// |q_M - q_{M+1}| / |q_{M+1}|.
    double truncation_delta = 0;
};

/// q(x, t) = q0 e^{i k0 x - i w0 t} Theta(Y, z-) / Theta(Y, z+) with
/// z+- = i (pi/2) (k x + w t + delta+-), Theta as in theta_partial_sum.
/// Throws SingularError on a pole.
NlseValue nlse_field(const RiemannSpectrum &s, double x, double t, int m, int threads = 1);

/// Sensor intensity of a Gaussian source through uniform slit lattices,
/// expressed as e^{2 A x^2} |Upsilon|^2 |Theta_M(G, y(x))|^2.
struct ThetaMapping {
    int m = 0;
    Eigen::MatrixXcd gamma;   // -D H D / pi
    Eigen::VectorXd spacing;  // diagonal of D
    Eigen::VectorXd c, d;     // h = c + i d
    double A = 0;
    std::complex<double> log_upsilon;

    Eigen::VectorXcd argument(double x) const;
    double prefactor(double x) const;
    double intensity(double x, int threads = 1) const;
    /// Smallest eigenvalue of the symmetrized real part of gamma.
    double min_real_eigenvalue() const;
};

/// Needs a Gaussian source and every plane to hold K = 2M+1 slits of one
/// width at a * dx_j, a in [-M, M]. Throws DomainError naming the plane.
ThetaMapping map_uniform_setup(const SetupConfig &config, int m);

}  // namespace mpd
