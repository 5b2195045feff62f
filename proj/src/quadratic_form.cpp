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

#include "mpdsim/quadratic_form.hpp"

#include <algorithm>

#include "mpdsim/parallel.hpp"
#include "mpdsim/summation.hpp"

namespace mpd {

using C = std::complex<double>;

std::complex<double> QuadraticForm::operator()(const Eigen::VectorXd &x, double x_n) const {
    Eigen::VectorXcd xc = x.cast<C>();
    C quad = (xc.transpose() * H * xc)(0, 0);
    C lin = (h.transpose() * xc)(0, 0);
    return std::exp(log_upsilon + quad + C(A, B) * x_n * x_n + lin * x_n);
}

std::complex<double> HgQuadraticForm::operator()(const Eigen::VectorXd &x, double x_n) const {
    Eigen::VectorXcd xc = x.cast<C>();
    C quad = (xc.transpose() * H * xc)(0, 0);
    C lin = (gamma.transpose() * xc)(0, 0);
    C arg = g * x_n + (eta.transpose() * xc)(0, 0);
    return std::exp(log_upsilon + quad + u * x_n * x_n + lin * x_n) * hermite(order, arg);
}

Eigen::VectorXd path_positions(const SetupConfig &config, const std::vector<int> &slits) {
    Eigen::VectorXd x(slits.size());
    for (std::size_t j = 0; j < slits.size(); j++) {
        x[j] = config.planes.at(j).slits.at(slits[j]).center;
    }
    return x;
}

namespace {

void require_closed_form(const SetupConfig &config, const std::vector<LctMatrixd> &m,
                         const std::vector<int> &slits) {
    if (slits.size() != config.planes.size()) {
        throw DomainError("slit list length differs from plane count");
    }
    for (std::size_t j = 0; j < m.size(); j++) {
        if (m[j].b() == 0 && !is_harmonic_segment(config.optics[j])) {
            throw DomainError("quadratic form needs b != 0 in every section (optics[" + std::to_string(j) + "])");
        }
    }
}

}  // namespace

QuadraticForm build_gaussian_form(const SetupConfig &config, const std::vector<int> &slits) {
    if (config.source.kind != SourceKind::gaussian) {
        throw DomainError("Gaussian quadratic form needs a Gaussian source");
    }
    auto m = segment_matrices(config);
    require_closed_form(config, m, slits);
    PhotonConstantsd consts = config.constants();
    const int n = static_cast<int>(slits.size());

    const OpticsSegment &seg0 = config.optics[0];
    GaussianPathState<double> st = is_harmonic_segment(seg0)
                                       ? init_gaussian_ho(config.source.width, harmonic_duration(seg0), consts)
                                       : init_gaussian(config.source.width, m[0]);
    QuadraticForm f;
    f.log_upsilon = st.log_chi;
    f.H = Eigen::MatrixXcd::Zero(n, n);

    // Row j of G holds the coefficients of (C + iD) at plane j+1 in the slit
    // positions x_0 .. x_{j-1}; the recursion is gamma' = z (x + beta^2 gamma).
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n + 1, n);
    for (int j = 0; j < n; j++) {
        const Slit &slit = config.planes[j].slits.at(slits[j]);
        GaussianStepTerms<double> t;
        const OpticsSegment &seg = config.optics[j + 1];
        if (is_harmonic_segment(seg)) {
            diffract_step_gaussian_ho(st, slit, harmonic_duration(seg), consts, &t);
        } else {
            diffract_step_gaussian(st, slit, m[j + 1], &t);
        }
        C z(t.zeta_c, t.zeta_d);
        C w(t.p4, -t.p5);
        G.row(j + 1) = w * G.row(j);
        G(j + 1, j) += z;

        f.log_upsilon += t.log_sqrt_xi;
        f.H(j, j) += t.p1;
        // p2 (gamma_j)^2: gamma_j only involves x_0 .. x_{j-1}.
        f.H.topLeftCorner(j, j) += t.p2 * G.row(j).head(j).transpose() * G.row(j).head(j);
        // p3 gamma_j x_j sits in row j, left of the diagonal.
        f.H.row(j).head(j) += t.p3 * G.row(j).head(j);
    }
    f.A = st.A;
    f.B = st.B;
    f.h = G.row(n).transpose();
    return f;
}

HgQuadraticForm build_hg_form(const SetupConfig &config, const std::vector<int> &slits) {
    if (config.source.kind != SourceKind::hermite_gaussian) {
        throw DomainError("Hermite-Gaussian quadratic form needs a Hermite-Gaussian source");
    }
    auto m = segment_matrices(config);
    require_closed_form(config, m, slits);
    for (std::size_t j = 0; j < m.size(); j++) {
        if (m[j].b() == 0) {
            throw DomainError("quadratic form needs b != 0 in every section (optics[" + std::to_string(j) + "])");
        }
    }
    const int n = static_cast<int>(slits.size());
    HgPathState<double> st = init_hg(config.source.width, config.source.order, m[0]);
    HgQuadraticForm f;
    f.order = st.order;
    f.log_upsilon = st.log_chi;
    f.H = Eigen::MatrixXcd::Zero(n, n);

    // Gv: coefficients of v at each plane; Gh: coefficients of h.
    Eigen::MatrixXcd Gv = Eigen::MatrixXcd::Zero(n + 1, n);
    Eigen::MatrixXcd Gh = Eigen::MatrixXcd::Zero(n + 1, n);
    for (int j = 0; j < n; j++) {
        const Slit &slit = config.planes[j].slits.at(slits[j]);
        double beta2 = slit.width * slit.width;
        HgStepTerms<double> t;
        diffract_step_hg(st, slit, m[j + 1], &t);

        f.log_upsilon += t.log_chi_a;
        f.H(j, j) += t.theta_c;
        f.H.topLeftCorner(j, j) += t.theta_a * Gv.row(j).head(j).transpose() * Gv.row(j).head(j);
        // theta_b v_j x_j sits in column j, above the diagonal.
        f.H.col(j).head(j) += t.theta_b * Gv.row(j).head(j).transpose();

        Gh.row(j + 1) = t.h_a * Gh.row(j) + t.h_c * Gv.row(j);
        Gh(j + 1, j) += t.h_b;
        Gv.row(j + 1) = t.v_a * beta2 * Gv.row(j);
        Gv(j + 1, j) += t.v_a;
    }
    f.u = st.u;
    f.g = st.g;
    f.gamma = Gv.row(n).transpose();
    f.eta = Gh.row(n).transpose();
    return f;
}

UniformHgReport uniform_hg_form(const SetupConfig &config, const std::vector<double> &xs_in, int threads) {
    if (config.source.kind != SourceKind::hermite_gaussian) {
        throw DomainError("uniform closed form needs a Hermite-Gaussian source");
    }
    for (std::size_t j = 0; j < config.planes.size(); j++) {
        const auto &slits = config.planes[j].slits;
        for (const auto &s : slits) {
            if (s.width != slits[0].width) {
                throw DomainError("uniform closed form needs one slit width per plane (plane " + std::to_string(j) +
                                  ")");
            }
        }
    }
    PathEngine engine(config);
    UniformHgReport r;
    r.x = xs_in;
    if (r.x.empty()) {
        for (auto k = config.sensor.k_min; k <= config.sensor.k_max; k++) {
            r.x.push_back(static_cast<double>(k) * config.sensor.ts);
        }
    }
    std::uint64_t np = path_count(config);
    HgQuadraticForm f0 = build_hg_form(config, path_slits(config, 0));
    for (std::uint64_t n = 1; n < np; n++) {
        HgQuadraticForm f = build_hg_form(config, path_slits(config, n));
        auto rel = [](C a, C b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
        double d = std::max({rel(f.u, f0.u), rel(f.g, f0.g), rel(f.log_upsilon, f0.log_upsilon),
                             (f.H - f0.H).norm() / std::max(f0.H.norm(), 1e-300),
                             (f.gamma - f0.gamma).norm() / std::max(f0.gamma.norm(), 1e-300),
                             (f.eta - f0.eta).norm() / std::max(f0.eta.norm(), 1e-300)});
        r.path_dependence = std::max(r.path_dependence, d);
    }

    // Upsilon e^{u x^2} sum_paths e^{x^T H x + gamma^T x x_N} sum_k C(l,k) H_k(g x_N) (2 eta^T x)^{l-k}
    const int l = f0.order;
    std::vector<double> binom(l + 1, 1.0);
    for (int k = 1; k <= l; k++) {
        binom[k] = binom[k - 1] * (l - k + 1) / k;
    }
    std::vector<Eigen::VectorXd> positions(np);
    for (std::uint64_t n = 0; n < np; n++) {
        positions[n] = path_positions(config, path_slits(config, n));
    }
    r.closed_form.resize(r.x.size());
    parallel_for(r.x.size(), threads, [&](std::size_t i) {
        double xn = r.x[i];
        auto hk = hermite_all(l, C(f0.g * xn));
        CompensatedSum<C> sum;
        for (std::uint64_t n = 0; n < np; n++) {
            Eigen::VectorXcd xc = positions[n].cast<C>();
            C quad = (xc.transpose() * f0.H * xc)(0, 0);
            C lin = (f0.gamma.transpose() * xc)(0, 0);
            C y2 = 2.0 * (f0.eta.transpose() * xc)(0, 0);
            C poly = 0;
            C ypow = 1;
            for (int k = l; k >= 0; k--) {
                poly += binom[k] * hk[k] * ypow;
                ypow *= y2;
            }
            sum.add(std::exp(quad + lin * xn) * poly);
        }
        r.closed_form[i] = std::exp(f0.log_upsilon + f0.u * xn * xn) * sum.value();
    });
    r.superposed = superpose(engine.sensor_states({}, threads), r.x, threads);
    double scale = 0;
    for (const auto &v : r.superposed) {
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < r.x.size(); i++) {
        r.max_relative_error = std::max(r.max_relative_error, std::abs(r.closed_form[i] - r.superposed[i]) / scale);
    }
    return r;
}

}  // namespace mpd
