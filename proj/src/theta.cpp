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

#include "mpdsim/theta.hpp"

#include <algorithm>
#include <cmath>

#include "mpdsim/parallel.hpp"
#include "mpdsim/quadratic_form.hpp"
#include "mpdsim/summation.hpp"

namespace mpd {

using C = std::complex<double>;

std::complex<double> theta_partial_sum(const Eigen::MatrixXcd &gamma, const Eigen::VectorXcd &y, int m,
                                       int threads) {
    const int n = static_cast<int>(y.size());
    if (gamma.rows() != n || gamma.cols() != n) {
        throw DomainError("theta: period matrix and argument sizes differ");
    }
    if (m < 0) {
        throw DomainError("theta: truncation M must be non-negative");
    }
    if (n > theta_max_dimension) {
        throw DomainError("theta: dimension " + std::to_string(n) + " exceeds " +
                          std::to_string(theta_max_dimension));
    }
    if (n == 0) {
        return 1;
    }
    const std::uint64_t side = static_cast<std::uint64_t>(2 * m + 1);
    std::uint64_t terms = 1;
    for (int i = 0; i < n; i++) {
        if (terms > theta_term_cap / side) {
            throw DomainError("theta: (2M+1)^n exceeds the term cap of 2^24");
        }
        terms *= side;
    }
    // Symmetrized form: only the symmetric part contributes to a^T G a.
    Eigen::MatrixXcd g = (gamma + gamma.transpose()) / 2.0;
    const std::uint64_t inner = terms / side;
    std::vector<C> block(side);
    parallel_for(side, threads, [&](std::size_t lead) {
        CompensatedSum<C> sum;
        Eigen::VectorXd a(n);
        for (std::uint64_t r = 0; r < inner; r++) {
            a[0] = static_cast<double>(lead) - m;
            std::uint64_t rem = r;
            for (int i = n - 1; i >= 1; i--) {
                a[i] = static_cast<double>(rem % side) - m;
                rem /= side;
            }
            Eigen::VectorXcd ac = a.cast<C>();
            C quad = (ac.transpose() * g * ac)(0, 0);
            C lin = (y.transpose() * ac)(0, 0);
            sum.add(std::exp(-pi * quad + 2 * pi * lin));
        }
        block[lead] = sum.value();
    });
    CompensatedSum<C> total;
    for (const C &v : block) {
        total.add(v);
    }
    return total.value();
}

void validate_spectrum(const RiemannSpectrum &s) {
    const auto n = s.Y.rows();
    if (s.Y.cols() != n || s.k.size() != n || s.omega.size() != n || s.delta_minus.size() != n ||
        s.delta_plus.size() != n) {
        throw ValidationError("spectrum: Y, k, omega, delta sizes disagree");
    }
    if ((s.Y - s.Y.transpose()).norm() >= 1e-12) {
        throw ValidationError("spectrum: Y is not symmetric");
    }
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.Y);
        if (!(es.eigenvalues().minCoeff() > 0)) {
            throw ValidationError("spectrum: Y is not positive-definite");
        }
    }
}

namespace {

C nlse_at(const RiemannSpectrum &s, double x, double t, int m, int threads) {
    // The period matrix -iY of the NLSE solution assumes the exp(i pi a^T G a) convention;
    // in the exp(-pi a^T G a) form of theta_partial_sum it becomes Y itself.
    Eigen::MatrixXcd g = s.Y.cast<C>();
    Eigen::VectorXd phase = s.k * x + s.omega * t;
    Eigen::VectorXcd zm = C(0, pi / 2) * (phase + s.delta_minus).cast<C>();
    Eigen::VectorXcd zp = C(0, pi / 2) * (phase + s.delta_plus).cast<C>();
    C num = theta_partial_sum(g, zm, m, threads);
    C den = theta_partial_sum(g, zp, m, threads);
    if (std::abs(den) < 1e-12) {
        throw SingularError("nlse: theta denominator vanishes at x=" + std::to_string(x) +
                            " t=" + std::to_string(t));
    }
    return s.q0 * std::polar(1.0, s.k0 * x - s.omega0 * t) * num / den;
}

}  // namespace

NlseValue nlse_field(const RiemannSpectrum &s, double x, double t, int m, int threads) {
    validate_spectrum(s);
    NlseValue v;
    v.q = nlse_at(s, x, t, m, threads);
    C next = nlse_at(s, x, t, m + 1, threads);
    v.truncation_delta = std::abs(v.q - next) / std::max(std::abs(next), 1e-300);
    return v;
}

Eigen::VectorXcd ThetaMapping::argument(double x) const {
    Eigen::VectorXcd h(c.size());
    for (Eigen::Index i = 0; i < c.size(); i++) {
        h[i] = x * spacing[i] * C(c[i], d[i]) / (2 * pi);
    }
    return h;
}

double ThetaMapping::prefactor(double x) const {
    return std::exp(2 * A * x * x + 2 * log_upsilon.real());
}

double ThetaMapping::intensity(double x, int threads) const {
    return prefactor(x) * std::norm(theta_partial_sum(gamma, argument(x), m, threads));
}

double ThetaMapping::min_real_eigenvalue() const {
    Eigen::MatrixXd sym = ((gamma + gamma.transpose()) / 2.0).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    return es.eigenvalues().minCoeff();
}

ThetaMapping map_uniform_setup(const SetupConfig &config, int m) {
    if (config.source.kind != SourceKind::gaussian) {
        throw DomainError("theta mapping needs a Gaussian source");
    }
    if (m < 0) {
        throw DomainError("theta mapping needs M >= 0");
    }
    const int n = static_cast<int>(config.planes.size());
    ThetaMapping t;
    t.m = m;
    t.spacing.resize(n);
    for (int j = 0; j < n; j++) {
        const auto &slits = config.planes[j].slits;
        const std::string where = " (plane " + std::to_string(j) + ")";
        if (static_cast<int>(slits.size()) != 2 * m + 1) {
            throw DomainError("theta mapping needs 2M+1 = " + std::to_string(2 * m + 1) + " slits" + where);
        }
        double dx = m > 0 ? (slits.back().center - slits.front().center) / (2 * m) : 1.0;
        if (m > 0 && !(dx > 0)) {
            throw DomainError("theta mapping needs a positive lattice spacing" + where);
        }
        for (int a = -m; a <= m; a++) {
            const Slit &s = slits[a + m];
            if (s.width != slits[0].width) {
                throw DomainError("theta mapping needs one slit width per plane" + where);
            }
            if (std::abs(s.center - a * dx) > 1e-9 * std::max(dx, std::abs(s.center))) {
                throw DomainError("slit centres are not an integer lattice about zero" + where);
            }
        }
        t.spacing[j] = dx;
    }
    QuadraticForm f = build_gaussian_form(config, std::vector<int>(n, 0));
    Eigen::MatrixXcd D = t.spacing.cast<C>().asDiagonal();
    t.gamma = -D * f.H * D / pi;
    t.c = f.h.real();
    t.d = f.h.imag();
    t.A = f.A;
    t.log_upsilon = f.log_upsilon;
    return t;
}

}  // namespace mpd
