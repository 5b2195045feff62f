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
#include <vector>

#include <Eigen/Dense>

#include "mpdsim/path_engine.hpp"
#include "mpdsim/setup.hpp"

namespace mpd {

/// Sensor amplitude of one Gaussian path regrouped as
///   Upsilon exp(x^T H x) exp((A + iB) x_N^2) exp((h^T x) x_N),
/// where x holds the slit centres the path passes through. H is lower
/// triangular by construction.
struct QuadraticForm {
    std::complex<double> log_upsilon;
    double A = 0;
    double B = 0;
    Eigen::MatrixXcd H;
    Eigen::VectorXcd h;

    std::complex<double> upsilon() const {
        return std::exp(log_upsilon);
    }
    std::complex<double> operator()(const Eigen::VectorXd &x, double x_n) const;
};

/// Same regrouping for a Hermite-Gaussian path:
///   Upsilon exp(x^T H x + u x_N^2 + (gamma^T x) x_N) H_l(g x_N + eta^T x).
/// H is upper triangular by construction.
struct HgQuadraticForm {
    std::complex<double> log_upsilon;
    std::complex<double> u;
    std::complex<double> g;
    int order = 0;
    Eigen::MatrixXcd H;
    Eigen::VectorXcd gamma;
    Eigen::VectorXcd eta;

    std::complex<double> upsilon() const {
        return std::exp(log_upsilon);
    }
    std::complex<double> operator()(const Eigen::VectorXd &x, double x_n) const;
};

/// Slit centres along a path, x_k = X_{k, s_k}.
Eigen::VectorXd path_positions(const SetupConfig &config, const std::vector<int> &slits);

QuadraticForm build_gaussian_form(const SetupConfig &config, const std::vector<int> &slits);
HgQuadraticForm build_hg_form(const SetupConfig &config, const std::vector<int> &slits);

/// Result of summing the uniform-width closed form with the binomial
/// expansion H_l(a + b) = sum_k C(l, k) H_k(a) (2 b)^{l - k}.
struct UniformHgReport {
    std::vector<double> x;
    std::vector<std::complex<double>> closed_form;
    std::vector<std::complex<double>> superposed;
    double max_relative_error = 0;
    /// Largest deviation of any path's (H, gamma, eta, u, g, Upsilon) from path 0.
    double path_dependence = 0;
};

/// Needs every plane to have one common slit width. Compares at `x` (or at
/// the configured sensor samples when empty).
UniformHgReport uniform_hg_form(const SetupConfig &config, const std::vector<double> &x, int threads);

/// Parameters of the three-section, two-plane Gaussian setup.
struct Table2Inputs {
    double beta1, beta2, sigma0;
    double a01, b01, d01;
    double a12, b12, d12;
    double a23, b23, d23;
};

struct Table2Result {
    Eigen::Matrix2cd H;
    Eigen::Vector2cd h;
    std::complex<double> upsilon;
    std::complex<double> alpha;  // A_2 + i B_2
    std::vector<std::complex<double>> q;    // q_1 .. q_30 at index 1..30
    std::vector<std::complex<double>> pol;  // pol_1 .. pol_14 at index 1..14
};

/// Evaluates the closed rational polynomials for N = 3. Throws SingularError
/// when one of the denominators pol_2, pol_6, pol_11, pol_13 vanishes.
Table2Result evaluate_table2(const Table2Inputs &in);

}  // namespace mpd
