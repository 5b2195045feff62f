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

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mpdsim/errors.hpp"

namespace mpd {

inline constexpr int max_hermite_order = 30;

/// Physicists' Hermite polynomial H_l(z) by the three-term recurrence.
template <typename T>
T hermite(int order, const T &z) {
    if (order < 0 || order > max_hermite_order) {
        throw DomainError("Hermite order must lie in [0, 30]");
    }
    T h0 = T(1);
    if (order == 0) {
        return h0;
    }
    T h1 = T(2) * z;
    for (int k = 1; k < order; k++) {
        T h2 = T(2) * z * h1 - T(2 * k) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

/// H_0(z) .. H_order(z).
template <typename T>
std::vector<T> hermite_all(int order, const T &z) {
    std::vector<T> out(order + 1);
    out[0] = T(1);
    if (order >= 1) {
        out[1] = T(2) * z;
    }
    for (int k = 1; k < order; k++) {
        out[k + 1] = T(2) * z * out[k] - T(2 * k) * out[k - 1];
    }
    return out;
}

/// Closed form of  int exp(-(x - y)^2 / 2) H_l(a x / sqrt 2) dx  for |a| < 1:
/// sqrt(2 pi) (1 - a^2)^{l/2} H_l(a y / sqrt(2 (1 - a^2))).
inline double hermite_gaussian_integral(int order, double a, double y) {
    if (!(std::abs(a) < 1)) {
        throw DomainError("Hermite-Gaussian integral needs |a| < 1");
    }
    double s = 1 - a * a;
    return std::sqrt(2 * M_PI) * std::pow(s, order / 2.0) * hermite(order, a * y / std::sqrt(2 * s));
}

/// Gauss-Hermite rule for weight exp(-t^2), via the Golub-Welsch eigenproblem.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussHermiteRule gauss_hermite_rule(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; k++) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussHermiteRule rule;
    for (int k = 0; k < n; k++) {
        double v0 = solver.eigenvectors()(0, k);
        rule.nodes.push_back(solver.eigenvalues()(k));
        rule.weights.push_back(std::sqrt(M_PI) * v0 * v0);
    }
    return rule;
}

}  // namespace mpd
