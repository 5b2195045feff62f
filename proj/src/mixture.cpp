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

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mpdsim/setup.hpp"

namespace mpd {

namespace {

struct Projection {
    Eigen::VectorXd amplitudes;
    Eigen::VectorXd residual;
};

// For fixed widths the amplitudes enter linearly; eliminate them.
Projection project(const Eigen::VectorXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &log_width) {
    Eigen::MatrixXd basis(x.size(), log_width.size());
    for (Eigen::Index k = 0; k < log_width.size(); k++) {
        double w = std::exp(log_width[k]);
        basis.col(k) = (-(x.array().square()) / (2 * w * w)).exp();
    }
    Projection p;
    p.amplitudes = basis.completeOrthogonalDecomposition().solve(y);
    p.residual = basis * p.amplitudes - y;
    return p;
}

double rms(const Eigen::VectorXd &r) {
    return std::sqrt(r.squaredNorm() / std::max<Eigen::Index>(r.size(), 1));
}

// Levenberg-Marquardt on the projected residual, finite-difference Jacobian.
Eigen::VectorXd refine(const Eigen::VectorXd &x, const Eigen::VectorXd &y, Eigen::VectorXd theta) {
    double damping = 1e-3;
    Projection cur = project(x, y, theta);
    double cost = cur.residual.squaredNorm();
    for (int iter = 0; iter < 300 && cost > 0; iter++) {
        Eigen::MatrixXd jac(x.size(), theta.size());
        for (Eigen::Index k = 0; k < theta.size(); k++) {
            Eigen::VectorXd t = theta;
            double h = 1e-7 * std::max(1.0, std::abs(theta[k]));
            t[k] += h;
            jac.col(k) = (project(x, y, t).residual - cur.residual) / h;
        }
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * cur.residual;
        bool improved = false;
        for (int tries = 0; tries < 20; tries++) {
            Eigen::MatrixXd lhs = jtj;
            lhs.diagonal() += damping * (jtj.diagonal().array() + 1e-30).matrix();
            Eigen::VectorXd step = lhs.ldlt().solve(-g);
            if (!step.allFinite()) {
                damping *= 10;
                continue;
            }
            Eigen::VectorXd trial = theta + step;
            Projection p = project(x, y, trial);
            double c = p.residual.squaredNorm();
            if (std::isfinite(c) && c < cost) {
                double gain = cost - c;
                theta = trial;
                cur = p;
                cost = c;
                damping = std::max(damping / 3, 1e-12);
                improved = true;
                if (gain < 1e-28 + 1e-15 * cost && step.norm() < 1e-12) {
                    return theta;
                }
                break;
            }
            damping *= 10;
        }
        if (!improved) {
            break;
        }
    }
    return theta;
}

GaussianMixtureMask finish(const Eigen::VectorXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &theta) {
    Projection p = project(x, y, theta);
    GaussianMixtureMask out;
    std::vector<std::size_t> order(theta.size());
    for (std::size_t k = 0; k < order.size(); k++) {
        order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return theta[l] < theta[r]; });
    for (std::size_t k : order) {
        out.amplitudes.push_back(p.amplitudes[k]);
        out.widths.push_back(std::exp(theta[k]));
    }
    out.residual_rms = rms(p.residual);
    return out;
}

}  // namespace

double GaussianMixtureMask::operator()(double x) const {
    double s = 0;
    for (std::size_t i = 0; i < widths.size(); i++) {
        s += amplitudes[i] * std::exp(-x * x / (2 * widths[i] * widths[i]));
    }
    return s;
}

GaussianMixtureMask fit_gaussian_mixture(const std::vector<double> &xs, const std::vector<double> &values, int terms) {
    if (terms < 1) {
        throw DomainError("mixture needs at least one term");
    }
    if (xs.size() != values.size() || xs.size() < static_cast<std::size_t>(2 * terms)) {
        throw DomainError("mixture fit needs matching samples, at least two per term");
    }
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size());
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());

    double span = x.cwiseAbs().maxCoeff();
    double spacing = span;
    for (Eigen::Index i = 1; i < x.size(); i++) {
        double d = std::abs(x[i] - x[i - 1]);
        if (d > 0) {
            spacing = std::min(spacing, d);
        }
    }
    if (!(span > 0)) {
        throw DomainError("mixture fit samples must cover a non-zero range");
    }

    // Seeds carried over from the (terms - 1) fit guarantee the residual
    // never grows with the term count.
    Eigen::VectorXd best;
    double best_cost = std::numeric_limits<double>::infinity();
    auto consider = [&](const Eigen::VectorXd &seed) {
        Eigen::VectorXd t = refine(x, y, seed);
        double c = project(x, y, t).residual.squaredNorm();
        if (std::isfinite(c) && c < best_cost) {
            best_cost = c;
            best = t;
        }
    };

    constexpr int starts = 8;
    double lo = std::log(std::max(spacing, span * 1e-3));
    double hi = std::log(span);
    for (int s = 0; s < starts; s++) {
        double centre = lo + (hi - lo) * s / (starts - 1);
        Eigen::VectorXd seed(terms);
        for (int k = 0; k < terms; k++) {
            seed[k] = centre + 0.5 * (k - (terms - 1) / 2.0);
        }
        consider(seed);
    }
    if (terms > 1) {
        GaussianMixtureMask fewer = fit_gaussian_mixture(xs, values, terms - 1);
        for (int s = 0; s < starts; s++) {
            Eigen::VectorXd seed(terms);
            for (int k = 0; k < terms - 1; k++) {
                seed[k] = std::log(fewer.widths[k]);
            }
            seed[terms - 1] = lo + (hi - lo) * s / (starts - 1) + 1e-3;
            consider(seed);
        }
    }
    if (best.size() == 0) {
        throw VerificationError("mixture fit did not converge from any start");
    }
    return finish(x, y, best);
}

}  // namespace mpd
