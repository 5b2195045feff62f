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
#include <cstdint>
#include <vector>

#include "mpdsim/constants.hpp"
#include "mpdsim/hermite.hpp"
#include "mpdsim/lct.hpp"
#include "mpdsim/setup.hpp"

namespace mpd {

template <typename S>
using Complex = std::complex<S>;

/// e^{-i pi/4} sqrt(1/b) with the principal root of the real number 1/b;
/// equal to sqrt(1/(i b)) for either sign of b.
template <typename S>
Complex<S> kernel_root(S b) {
    return std::polar(S(1), -S(pi) / 4) * std::sqrt(Complex<S>(S(1) / b, S(0)));
}

// ---------------------------------------------------------------------------
// Gaussian paths

/// Psi(x) = exp(log_chi + (A + iB) x^2 + (C + iD) x). The prefactor is kept as
/// a logarithm since its modulus leaves double range for wide setups.
template <typename S>
struct GaussianPathState {
    S A = 0, B = 0, C = 0, D = 0;
    Complex<S> log_chi{};

    Complex<S> alpha() const {
        return {A, B};
    }
    Complex<S> gamma() const {
        return {C, D};
    }
    Complex<S> chi() const {
        return std::exp(log_chi);
    }
    Complex<S> operator()(S x) const {
        return std::exp(log_chi + alpha() * x * x + gamma() * x);
    }
};

/// Step-local coefficients, kept for the quadratic-form assembly.
template <typename S>
struct GaussianStepTerms {
    Complex<S> p1, p2, p3;
    S p4 = 0, p5 = 0;
    S zeta_c = 0, zeta_d = 0;
    Complex<S> log_sqrt_xi;
};

template <typename S>
GaussianPathState<S> gaussian_source_state(S sigma) {
    GaussianPathState<S> st;
    st.A = -S(1) / (2 * sigma * sigma);
    st.log_chi = Complex<S>(-std::log(sigma * std::sqrt(S(pi))) / 2, 0);
    return st;
}

template <typename S>
void apply_slit_mask(GaussianPathState<S> &st, const Slit &slit) {
    S b2 = S(slit.width) * S(slit.width);
    S x = S(slit.center);
    st.A -= S(1) / (2 * b2);
    st.C += x / b2;
    st.log_chi -= x * x / (2 * b2);
}

/// b = 0 section (a, 0, c, 1/a): scaling by a, then the chirp exp(i pi (c/a) x^2).
template <typename S>
void diffract_degenerate(GaussianPathState<S> &st, const LctMatrix<S> &m) {
    S a = m.a();
    if (a == 0) {
        throw DomainError("degenerate section with a = 0");
    }
    st.A /= a * a;
    st.B /= a * a;
    st.C /= a;
    st.D /= a;
    st.log_chi -= std::log(std::sqrt(Complex<S>(a, 0)));
    st.B += S(pi) * m.c() / a;
}

/// Source through the first section, with no slit.
template <typename S>
GaussianPathState<S> init_gaussian(S sigma, const LctMatrix<S> &m) {
    if (m.b() == 0) {
        auto st = gaussian_source_state(sigma);
        diffract_degenerate(st, m);
        return st;
    }
    const S p = S(pi);
    S a = m.a(), b = m.b(), d = m.d();
    S s2 = sigma * sigma;
    S den = 4 * p * p * a * a * s2 * s2 + b * b;
    GaussianPathState<S> st;
    st.A = -2 * p * p * s2 / den;
    st.B = p * d / b - 4 * p * p * p * a * s2 * s2 / (b * den);
    Complex<S> p0(S(1) / (2 * s2), -p * a / b);
    st.log_chi = std::log(kernel_root(b) * std::sqrt(p / p0)) - std::log(sigma * std::sqrt(p)) / 2;
    return st;
}

/// The source-plane prefactor in the closed form e^{-i pi/4} sqrt(2 sqrt(pi) sigma / (b - 2 i pi a sigma^2)).
/// Agrees with exp(init_gaussian(...).log_chi) up to sign.
template <typename S>
Complex<S> tabulated_chi0(S sigma, const LctMatrix<S> &m) {
    const S p = S(pi);
    Complex<S> den(m.b(), -2 * p * m.a() * sigma * sigma);
    return std::polar(S(1), -p / 4) * std::sqrt(Complex<S>(2 * std::sqrt(p) * sigma, 0) / den);
}

/// Harmonic-oscillator column of the first section.
template <typename S>
GaussianPathState<S> init_gaussian_ho(S sigma, S t, const PhotonConstants<S> &consts) {
    const S p = S(pi);
    S lam = S(hbar) * t;
    S al = consts.omega * t;
    S sa = std::sin(al), ca = std::cos(al);
    if (std::abs(sa) < S(1e-12)) {
        throw DomainError("harmonic-oscillator segment has omega*t at a multiple of pi");
    }
    S mh = consts.mass / sa;
    S s2 = sigma * sigma;
    S q = ca * ca * mh * mh * s2 * s2 + lam * lam;
    GaussianPathState<S> st;
    st.A = -mh * mh * s2 / (2 * q);
    st.B = ca * mh * (lam * lam - sa * sa * mh * mh * s2 * s2) / (2 * lam * q);
    Complex<S> root = std::sqrt(mh / (Complex<S>(0, 2 * p) * lam));
    Complex<S> p0(S(1) / (2 * s2), -ca * mh / (2 * lam));
    st.log_chi = std::log(root * std::sqrt(p / p0)) - std::log(sigma * std::sqrt(p)) / 2;
    return st;
}

namespace detail {

template <typename S>
void check_denominator(S zeta, const char *what) {
    if (zeta == 0 || !std::isfinite(static_cast<double>(zeta))) {
        throw SingularError(std::string("vanishing denominator ") + what + " in diffraction step");
    }
}

template <typename S>
void finish_gaussian_step(GaussianPathState<S> &st, const Slit &slit, S A1, S B1, S zc, S zd, Complex<S> p1,
                          Complex<S> p3, Complex<S> log_sqrt_xi, GaussianStepTerms<S> *terms) {
    S beta2 = S(slit.width) * S(slit.width);
    S x = S(slit.center);
    Complex<S> p2 = beta2 * p3 / S(2);
    S p4 = beta2 * zc;
    S p5 = -beta2 * zd;
    Complex<S> g = st.gamma();
    S C1 = zc * x + p4 * st.C + p5 * st.D;
    S D1 = zd * x - p5 * st.C + p4 * st.D;
    st.log_chi += log_sqrt_xi + p1 * x * x + p2 * g * g + p3 * g * x;
    st.A = A1;
    st.B = B1;
    st.C = C1;
    st.D = D1;
    if (!(st.A < 0)) {
        throw SingularError("Gaussian path lost normalizability (A >= 0)");
    }
    if (terms) {
        *terms = {p1, p2, p3, p4, p5, zc, zd, log_sqrt_xi};
    }
}

}  // namespace detail

/// Slit mask at (X, beta) followed by a b != 0 section, in closed form.
template <typename S>
void diffract_step_gaussian(GaussianPathState<S> &st, const Slit &slit, const LctMatrix<S> &m,
                            GaussianStepTerms<S> *terms = nullptr) {
    const S p = S(pi);
    S a = m.a(), b = m.b(), d = m.d();
    if (b == 0) {
        throw DomainError("closed-form step needs b != 0; use diffract_degenerate");
    }
    S A = st.A, B = st.B;
    S beta2 = S(slit.width) * S(slit.width);
    S beta4 = beta2 * beta2;
    Complex<S> lam = b * st.alpha() + Complex<S>(0, p * a);
    S rho = 4 * beta4 * (A * A + B * B) - 4 * A * beta2 + 1;
    S zeta = b * b * rho + 4 * p * a * beta4 * (p * a + 2 * B * b);
    detail::check_denominator(zeta, "zeta");
    Complex<S> varsigma = b * (b - 2 * beta2 * std::conj(lam));
    Complex<S> p1 = lam * (b - 2 * beta2 * std::conj(lam)) / zeta;
    Complex<S> p3 = varsigma / zeta;
    S zc = 4 * p * beta2 * (p * a + B * b) / zeta;
    S zd = 2 * p * b * (2 * A * beta2 - 1) / zeta;
    S A1 = 2 * p * p * beta2 * (2 * A * beta2 - 1) / zeta;
    S B1 = p * (d * zeta - 4 * p * beta4 * (p * a + B * b)) / (b * zeta);
    Complex<S> pp = (b - 2 * beta2 * lam) / (2 * beta2 * b);
    Complex<S> log_sqrt_xi = std::log(kernel_root(b) * std::sqrt(p / pp));
    detail::finish_gaussian_step(st, slit, A1, B1, zc, zd, p1, p3, log_sqrt_xi, terms);
}

/// Same step through harmonic-oscillator evolution of duration t, using the
/// oscillator variables lambda = hbar t, alpha = omega t, m_hat = m / sin(alpha).
template <typename S>
void diffract_step_gaussian_ho(GaussianPathState<S> &st, const Slit &slit, S t, const PhotonConstants<S> &consts,
                               GaussianStepTerms<S> *terms = nullptr) {
    const S p = S(pi);
    S lam = S(hbar) * t;
    S al = consts.omega * t;
    S sa = std::sin(al), ca = std::cos(al);
    if (std::abs(sa) < S(1e-12)) {
        throw DomainError("harmonic-oscillator segment has omega*t at a multiple of pi");
    }
    S mh = consts.mass / sa;
    S A = st.A, B = st.B;
    S beta2 = S(slit.width) * S(slit.width);
    S beta4 = beta2 * beta2;
    const Complex<S> I(0, 1);
    S rho = 4 * beta4 * (A * A + B * B) - 4 * A * beta2 + 1;
    S zeta = 4 * B * beta4 * ca * lam * mh + beta4 * ca * ca * mh * mh + lam * lam * rho;
    detail::check_denominator(zeta, "zeta");
    Complex<S> vs = beta2 * (ca * mh + 2 * lam * Complex<S>(B, -A)) + I * lam;
    Complex<S> p1 = -(2 * lam * st.alpha() + I * ca * mh) / (S(2) * I * vs);
    Complex<S> p3 = -lam / (I * vs);
    S zc = beta2 * mh * (2 * B * lam + ca * mh) / zeta;
    S zd = lam * mh * (2 * A * beta2 - 1) / zeta;
    S A1 = beta2 * mh * mh * (2 * A * beta2 - 1) / (2 * zeta);
    S B1 = mh * (2 * B * beta4 * std::cos(2 * al) * mh + ca * lam * rho) / (2 * zeta) -
           beta4 * mh * mh * mh * ca * sa * sa / (2 * lam * zeta);
    Complex<S> root = std::sqrt(mh / (Complex<S>(0, 2 * p) * lam));
    Complex<S> pp = vs / (S(2) * I * beta2 * lam);
    Complex<S> log_sqrt_xi = std::log(root * std::sqrt(p / pp));
    detail::finish_gaussian_step(st, slit, A1, B1, zc, zd, p1, p3, log_sqrt_xi, terms);
}

// ---------------------------------------------------------------------------
// Hermite-Gaussian paths

/// Psi(x) = exp(log_chi + u x^2 + v x) H_l(g x + h).
template <typename S>
struct HgPathState {
    Complex<S> u{}, v{}, g{}, h{};
    int order = 0;
    Complex<S> log_chi{};

    Complex<S> chi() const {
        return std::exp(log_chi);
    }
    Complex<S> operator()(S x) const {
        return std::exp(log_chi + u * x * x + v * x) * hermite(order, g * x + h);
    }
};

template <typename S>
struct HgStepTerms {
    Complex<S> tau, gamma;
    Complex<S> theta_a, theta_b, theta_c;
    Complex<S> h_a, h_b, h_c;
    Complex<S> v_a;
    Complex<S> log_chi_a;
};

/// Unit-norm source 2^{1/4} / sqrt(W 2^l l!) exp(-pi x^2 / W^2) H_l(sqrt(2 pi) x / W).
template <typename S>
HgPathState<S> hg_source_state(S waist, int order) {
    if (order < 0 || order > max_hermite_order) {
        throw DomainError("Hermite-Gaussian order must lie in [0, 30]");
    }
    HgPathState<S> st;
    st.order = order;
    st.u = -S(pi) / (waist * waist);
    st.g = std::sqrt(2 * S(pi)) / waist;
    S log_norm = std::log(S(2)) / 4 - (std::log(waist) + order * std::log(S(2)) + std::lgamma(S(order + 1))) / 2;
    st.log_chi = log_norm;
    return st;
}

template <typename S>
void apply_slit_mask(HgPathState<S> &st, const Slit &slit) {
    S b2 = S(slit.width) * S(slit.width);
    S x = S(slit.center);
    st.u -= S(1) / (2 * b2);
    st.v += x / b2;
    st.log_chi -= x * x / (2 * b2);
}

template <typename S>
void diffract_degenerate(HgPathState<S> &st, const LctMatrix<S> &m) {
    S a = m.a();
    if (a == 0) {
        throw DomainError("degenerate section with a = 0");
    }
    st.u /= a * a;
    st.v /= a;
    st.g /= a;
    st.log_chi -= std::log(std::sqrt(Complex<S>(a, 0)));
    st.u += Complex<S>(0, S(pi) * m.c() / a);
}

/// HG source through the first section. The root s is signed so that the
/// propagated Hermite scale g comes out real and positive; the amplitude does
/// not depend on that sign.
template <typename S>
HgPathState<S> init_hg(S waist, int order, const LctMatrix<S> &m) {
    HgPathState<S> st = hg_source_state(waist, order);
    if (m.b() == 0) {
        diffract_degenerate(st, m);
        return st;
    }
    const S p = S(pi);
    S a = m.a(), b = m.b(), d = m.d();
    Complex<S> p2 = st.u + Complex<S>(0, p * a / b);
    Complex<S> s = std::sqrt((p2 + st.g * st.g) / p2);
    Complex<S> g1 = Complex<S>(0, p) * st.g / (b * p2 * s);
    if (g1.real() < 0) {
        s = -s;
        g1 = -g1;
    }
    st.log_chi += std::log(kernel_root(b) * std::sqrt(p / -p2)) + S(order) * std::log(s);
    st.u = Complex<S>(0, p * d / b) + p * p / (b * b * p2);
    st.g = g1;
    return st;
}

/// Closed-form first-section coefficients (g_01, u_01, chi_01) in the tabulated form.
template <typename S>
struct HgFirstSection {
    S g;
    Complex<S> u;
    Complex<S> chi;
};

template <typename S>
HgFirstSection<S> tabulated_hg_first_section(S waist, int order, const LctMatrix<S> &m) {
    const S p = S(pi);
    S a = m.a(), b = m.b(), d = m.d();
    S w2 = waist * waist;
    S den = a * a * w2 * w2 + b * b;
    HgFirstSection<S> r;
    r.g = std::sqrt(2 * p * w2 / den);
    r.u = Complex<S>(-p * w2 / den, p * d / b - (p * w2) * (a * w2) / (b * den));
    Complex<S> z(a * w2, -b);
    S norm = std::pow(S(2), S(0.25)) * std::sqrt(waist) /
             std::sqrt(std::pow(S(2), S(order)) * std::tgamma(S(order + 1)));
    r.chi = norm * std::sqrt(z / den) * std::pow(z / std::sqrt(den), order);
    return r;
}

/// Slit mask at (X, beta) followed by a b != 0 section.
template <typename S>
void diffract_step_hg(HgPathState<S> &st, const Slit &slit, const LctMatrix<S> &m, HgStepTerms<S> *terms = nullptr) {
    const S p = S(pi);
    const Complex<S> I(0, 1);
    S a = m.a(), b = m.b(), d = m.d();
    if (b == 0) {
        throw DomainError("closed-form step needs b != 0; use diffract_degenerate");
    }
    S beta2 = S(slit.width) * S(slit.width);
    S x = S(slit.center);
    Complex<S> tau_a = b * st.u + I * p * a;
    Complex<S> tau = -b + 2 * beta2 * tau_a;
    Complex<S> gam = 2 * beta2 * b * st.g * st.g + tau;
    if (tau == Complex<S>(0) || gam == Complex<S>(0) || !std::isfinite(std::abs(tau)) ||
        !std::isfinite(std::abs(gam))) {
        throw SingularError("vanishing denominator tau or Gamma in Hermite-Gaussian step");
    }
    Complex<S> s = std::sqrt(gam) / std::sqrt(tau);
    Complex<S> ts = tau * s;
    Complex<S> u1 = (2 * p * p * beta2 + I * p * d * tau) / (b * tau);
    Complex<S> va = 2 * p * I / tau;
    Complex<S> th_a = -beta2 * b / (S(2) * tau);
    Complex<S> th_b = -b / tau;
    Complex<S> th_c = -tau_a / tau;
    Complex<S> ha = S(1) / s;
    Complex<S> hb = -b * st.g / ts;
    Complex<S> hc = -beta2 * b * st.g / ts;
    Complex<S> g1 = S(2) * I * p * beta2 * st.g / ts;
    Complex<S> pp = -tau / (2 * beta2 * b);
    Complex<S> log_chi_a = std::log(kernel_root(b) * std::sqrt(p / pp)) + S(st.order) * std::log(s);

    Complex<S> v = st.v;
    st.log_chi += log_chi_a + v * th_b * x + th_c * x * x + v * v * th_a;
    st.h = st.h * ha + hb * x + v * hc;
    st.v = va * (x + beta2 * v);
    st.u = u1;
    st.g = g1;
    if (!(st.u.real() < 0)) {
        throw SingularError("Hermite-Gaussian path lost normalizability (Re u >= 0)");
    }
    if (terms) {
        *terms = {tau, gam, th_a, th_b, th_c, ha, hb, hc, va, log_chi_a};
    }
}

// ---------------------------------------------------------------------------
// Whole-setup evaluation (double precision)

/// A path's field at one plane, in whichever closed form the source implies.
struct PathState {
    SourceKind kind = SourceKind::gaussian;
    GaussianPathState<double> gauss;
    HgPathState<double> hg;

    Complex<double> operator()(double x) const {
        return kind == SourceKind::gaussian ? gauss(x) : hg(x);
    }
    /// Re of the quadratic coefficient (< 0).
    double quad_re() const {
        return kind == SourceKind::gaussian ? gauss.A : hg.u.real();
    }
    /// Intensity-weighted centre and rms width of the Gaussian envelope.
    double envelope_center() const;
    double envelope_width() const;
    /// Largest |d phase/dx| of the envelope and Hermite factor within [lo, hi].
    double max_wavenumber(double lo, double hi) const;
};

/// Prepared setup: validated config plus segment matrices.
class PathEngine {
   public:
    explicit PathEngine(SetupConfig config);

    const SetupConfig &config() const {
        return config_;
    }
    /// Number of planes, sensor included (N).
    int plane_count() const {
        return config_.plane_count();
    }
    /// Number of distinct paths reaching plane j (product of K_i for i < j).
    std::uint64_t prefix_count(int plane) const;
    /// State at plane j (0 = source, N = sensor) for the given slit prefix of length j - 1.
    PathState state_at(int plane, const std::vector<int> &slits) const;
    PathState state_at(int plane, std::uint64_t prefix_index) const;
    /// All prefix states at plane j, in prefix order. Parallel over paths.
    std::vector<PathState> states_at(int plane, int threads) const;
    /// Sensor states of the listed paths (or all paths when empty).
    std::vector<PathState> sensor_states(const std::vector<std::uint64_t> &paths, int threads) const;

   private:
    SetupConfig config_;
    std::vector<LctMatrixd> matrices_;
    PhotonConstantsd consts_;
};

/// Coherent sum over states in their given order, compensated; parallel over x.
std::vector<Complex<double>> superpose(const std::vector<PathState> &states, const std::vector<double> &xs,
                                       int threads);

struct SensorSamples {
    double ts = 0;
    std::int64_t k_min = 0;
    std::int64_t k_max = 0;
    std::vector<Complex<double>> amplitude;
    std::vector<double> intensity;
};

/// I[k] = |Psi_N(k ts)|^2 over the configured sensor range.
SensorSamples sample_sensor(const PathEngine &engine, const std::vector<PathState> &sensor_states, int threads);

/// Output of a single neuron: the sensor amplitude at x_N weighted by the
/// sum of the output-slit masks.
Complex<double> neuron_output(const PathEngine &engine, const std::vector<Slit> &output_slits, double x,
                              int threads);

}  // namespace mpd
