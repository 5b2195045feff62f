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

#include "mpdsim/analysis.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>

#include <fftw3.h>
#include <unsupported/Eigen/FFT>

#include "mpdsim/hermite.hpp"
#include "mpdsim/parallel.hpp"
#include "mpdsim/summation.hpp"

namespace mpd {

using C = std::complex<double>;

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

const GaussHermiteRule &rule_for(int nodes) {
    static std::mutex mu;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(nodes);
    if (it == cache.end()) {
        it = cache.emplace(nodes, gauss_hermite_rule(nodes)).first;
    }
    return it->second;
}

// FFTW planning is not thread-safe; execution on a shared plan is.
std::mutex &fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

double spectral_tail(const std::vector<C> &psi) {
    Eigen::FFT<double> fft;
    std::vector<C> spectrum;
    fft.fwd(spectrum, psi);
    std::size_t n = spectrum.size();
    double total = 0, tail = 0;
    for (std::size_t k = 0; k < n; k++) {
        double e = std::norm(spectrum[k]);
        total += e;
        std::size_t j = std::min(k, n - k);
        if (j >= n / 4) {
            tail += e;
        }
    }
    return total > 0 ? tail / total : 0;
}

}  // namespace

SampledField sample_states_on(const std::vector<PathState> &states, double x0, double dx, std::size_t n,
                              int threads) {
    SampledField f;
    f.x0 = x0;
    f.dx = dx;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; i++) {
        xs[i] = x0 + static_cast<double>(i) * dx;
    }
    f.psi = superpose(states, xs, threads);
    double peak = 0;
    for (const auto &v : f.psi) {
        peak = std::max(peak, std::abs(v));
    }
    double edge = n ? std::max(std::abs(f.psi.front()), std::abs(f.psi.back())) : 0;
    f.edge_ratio = peak > 0 ? edge / peak : 0;
    f.spectral_tail = n ? spectral_tail(f.psi) : 0;
    return f;
}

namespace {

// log |psi| over a scan of one path, wide enough to hold the Hermite factor.
struct LogScan {
    double x0 = 0, dx = 0;
    std::vector<double> logmag;
};

LogScan scan_state(const PathState &st) {
    const double w = 1 / (2 * std::sqrt(-st.quad_re()));
    const int l = st.kind == SourceKind::gaussian ? 0 : st.hg.order;
    const double c = st.envelope_center();
    const double r = w * (4 * std::sqrt(2.0 * l + 2) + 14);
    const int n = 4096;
    LogScan s;
    s.x0 = c - r;
    s.dx = 2 * r / (n - 1);
    s.logmag.resize(n);
    for (int i = 0; i < n; i++) {
        double x = s.x0 + i * s.dx;
        if (st.kind == SourceKind::gaussian) {
            const auto &g = st.gauss;
            s.logmag[i] = g.log_chi.real() + g.A * x * x + g.C * x;
        } else {
            const auto &h = st.hg;
            double hv = std::abs(hermite(h.order, h.g * x + h.h));
            s.logmag[i] = (h.log_chi + h.u * x * x + h.v * x).real() + (hv > 0 ? std::log(hv) : -1e300);
        }
    }
    return s;
}

// Interval where some path exceeds `rel` of the strongest path's peak.
std::pair<double, double> significant_interval(const std::vector<PathState> &states, double rel, int threads) {
    std::vector<LogScan> scans(states.size());
    parallel_for(states.size(), threads, [&](std::size_t i) { scans[i] = scan_state(states[i]); });
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto &s : scans) {
        peak = std::max(peak, *std::max_element(s.logmag.begin(), s.logmag.end()));
    }
    const double floor = peak + std::log(rel);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &s : scans) {
        const std::size_t n = s.logmag.size();
        for (std::size_t i = 0; i < n; i++) {
            if (s.logmag[i] > floor) {
                lo = std::min(lo, s.x0 + (static_cast<double>(i) - 2) * s.dx);
                break;
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            if (s.logmag[i] > floor) {
                hi = std::max(hi, s.x0 + (static_cast<double>(i) + 2) * s.dx);
                break;
            }
        }
    }
    return {lo, hi};
}

}  // namespace

SampledField sample_states(const std::vector<PathState> &states, int threads, const GridPolicy &policy) {
    if (states.empty()) {
        throw DomainError("no path states to sample");
    }
    auto [lo, hi] = significant_interval(states, policy.edge_tolerance * 1e-2, threads);
    // Gaussian envelope e^{A x^2} has spectrum e^{-k^2 / (4|A|)}; keep it above 1e-12.
    double envelope_k = 0;
    for (const auto &st : states) {
        envelope_k = std::max(envelope_k, std::sqrt(-4 * st.quad_re() * std::log(1e12)));
    }
    std::size_t n = policy.min_points;
    double density = 1;  // multiplier on the wavenumber bound
    SampledField f;
    for (int attempt = 0; attempt < 12; attempt++) {
        double kmax = envelope_k;
        for (const auto &st : states) {
            kmax = std::max(kmax, st.max_wavenumber(lo, hi) + envelope_k);
        }
        double dx_needed = std::numbers::pi / (2 * kmax * density);
        n = std::max(policy.min_points, next_pow2(static_cast<std::size_t>(std::ceil((hi - lo) / dx_needed)) + 1));
        bool capped = n > policy.max_points;
        n = std::min(n, policy.max_points);
        double dx = (hi - lo) / static_cast<double>(n - 1);
        f = sample_states_on(states, lo, dx, n, threads);
        bool edge_ok = f.edge_ratio < policy.edge_tolerance;
        bool tail_ok = f.spectral_tail < policy.tail_tolerance;
        if (capped) {
            f.clipped = !(edge_ok && tail_ok);
            return f;
        }
        if (edge_ok && tail_ok) {
            return f;
        }
        if (!edge_ok) {
            double span = hi - lo;
            lo -= span / 4;
            hi += span / 4;
        }
        if (!tail_ok) {
            density *= 2;
        }
    }
    f.clipped = true;
    return f;
}

MomentumField momentum_transform(const SampledField &field) {
    const std::size_t n = field.size();
    Eigen::FFT<double> fft;
    std::vector<C> spectrum;
    fft.fwd(spectrum, field.psi);
    MomentumField m;
    m.dp = 2 * std::numbers::pi * hbar / (static_cast<double>(n) * field.dx);
    std::int64_t half = static_cast<std::int64_t>(n / 2);
    m.p0 = -static_cast<double>(half) * m.dp;
    m.phi.resize(n);
    double scale = field.dx / std::sqrt(2 * std::numbers::pi * hbar);
    for (std::int64_t j = -half; j < static_cast<std::int64_t>(n) - half; j++) {
        std::size_t k = static_cast<std::size_t>((j + static_cast<std::int64_t>(n)) % static_cast<std::int64_t>(n));
        double p = static_cast<double>(j) * m.dp;
        m.phi[j + half] = scale * std::polar(1.0, -p * field.x0 / hbar) * spectrum[k];
    }
    m.clipped = field.clipped;
    return m;
}

WignerGrid wigner(const SampledField &field, int threads, std::size_t max_output) {
    const std::size_t n = field.size();
    if (n < 4) {
        throw DomainError("Wigner transform needs at least four samples");
    }
    const std::int64_t nn = static_cast<std::int64_t>(n);
    const std::int64_t half = nn / 2;
    const double dp = std::numbers::pi * hbar / (static_cast<double>(n) * field.dx);
    const double pref = field.dx / (std::numbers::pi * hbar);
    const std::size_t stride = std::max<std::size_t>(1, (n + max_output - 1) / max_output);

    WignerGrid g;
    for (std::size_t i = 0; i < n; i += stride) {
        g.x.push_back(field.x(i));
    }
    for (std::int64_t j = -half; j < nn - half; j += static_cast<std::int64_t>(stride)) {
        g.p.push_back(static_cast<double>(j) * dp);
    }
    g.w.assign(g.x.size() * g.p.size(), 0.0);

    std::vector<double> row_sum(n), row_abs(n), row_min(n), row_marg(n);
    // Each row's lag product r_m = psi[i-m] conj(psi[i+m]) is Hermitian in m,
    // so the row is the real output of a half-spectrum inverse transform.
    // Buffers all come from fftw_malloc so the shared plan sees one alignment.
    const std::size_t nh = n / 2 + 1;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        auto *in = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * nh));
        auto *out = static_cast<double *>(fftw_malloc(sizeof(double) * n));
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
    }
    const std::size_t block = 64;
    const std::size_t blocks = (n + block - 1) / block;
    parallel_for(blocks, threads, [&](std::size_t b) {
        auto *in = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * nh));
        auto *out = static_cast<double *>(fftw_malloc(sizeof(double) * n));
        for (std::size_t row = b * block; row < std::min(n, (b + 1) * block); row++) {
            const std::int64_t i = static_cast<std::int64_t>(row);
            const std::int64_t reach = std::min(i, nn - 1 - i);
            for (std::int64_t m = 0; m < static_cast<std::int64_t>(nh); m++) {
                C v = m <= reach ? field.psi[i - m] * std::conj(field.psi[i + m]) : C(0);
                in[m][0] = v.real();
                in[m][1] = m == 0 ? 0.0 : v.imag();
            }
            fftw_execute_dft_c2r(plan, in, out);
            double s = 0, a = 0, mn = std::numeric_limits<double>::infinity();
            for (std::int64_t j = -half; j < nn - half; j++) {
                double w = pref * out[(j + nn) % nn];
                s += w;
                a += std::abs(w);
                mn = std::min(mn, w);
                if (row % stride == 0 && (j + half) % static_cast<std::int64_t>(stride) == 0) {
                    g.w[(row / stride) * g.p.size() + static_cast<std::size_t>((j + half) / stride)] = w;
                }
            }
            row_sum[row] = s * dp;
            row_abs[row] = a * dp;
            row_min[row] = mn;
            row_marg[row] = std::abs(s * dp - std::norm(field.psi[row]));
        }
        fftw_free(in);
        fftw_free(out);
    });
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    double marg_err = 0, dens = 0;
    g.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t row = 0; row < n; row++) {
        g.integral += row_sum[row] * field.dx;
        g.abs_integral += row_abs[row] * field.dx;
        g.min_value = std::min(g.min_value, row_min[row]);
        marg_err += row_marg[row];
        dens += std::norm(field.psi[row]);
    }
    g.marginal_error = dens > 0 ? marg_err / dens : 0;
    g.clipped = field.clipped;
    return g;
}

double negative_volume(const WignerGrid &w) {
    if (!(w.integral > 0)) {
        throw DomainError("Wigner function has non-positive total mass");
    }
    return (w.abs_integral / w.integral - 1) / 2;
}

double detection_probability(const SampledField &field) {
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < field.size(); i++) {
        double v = std::norm(field.psi[i]);
        s.add((i == 0 || i + 1 == field.size()) ? v / 2 : v);
    }
    return s.value() * field.dx;
}

C overlap(const PathState &a, const PathState &b) {
    if (a.kind != b.kind) {
        throw DomainError("overlap of paths from different source kinds");
    }
    if (a.kind == SourceKind::gaussian) {
        C P = std::conj(a.gauss.alpha()) + b.gauss.alpha();
        C Q = std::conj(a.gauss.gamma()) + b.gauss.gamma();
        C L = std::conj(a.gauss.log_chi) + b.gauss.log_chi;
        if (!(P.real() < 0)) {
            throw DomainError("overlap of non-normalizable states (A >= 0)");
        }
        return std::exp(L - Q * Q / (4.0 * P)) * std::sqrt(std::numbers::pi / -P);
    }
    const auto &ha = a.hg;
    const auto &hb = b.hg;
    C P = std::conj(ha.u) + hb.u;
    C Q = std::conj(ha.v) + hb.v;
    C L = std::conj(ha.log_chi) + hb.log_chi;
    if (!(P.real() < 0)) {
        throw DomainError("overlap of non-normalizable states (Re u >= 0)");
    }
    // exp(P t^2) times a polynomial of degree la + lb: shift to the complex
    // centre, rotate onto the Hermite weight, and use an exact rule.
    C x0 = -Q / (2.0 * P);
    C root = std::sqrt(-P);
    const auto &rule = rule_for((ha.order + hb.order) / 2 + 2);
    CompensatedSum<C> sum;
    for (std::size_t i = 0; i < rule.nodes.size(); i++) {
        C t = rule.nodes[i] / root + x0;
        sum.add(rule.weights[i] * hermite(ha.order, std::conj(ha.g) * t + std::conj(ha.h)) *
                hermite(hb.order, hb.g * t + hb.h));
    }
    return std::exp(L - Q * Q / (4.0 * P)) * sum.value() / root;
}

double detection_probability(const std::vector<PathState> &states, int threads) {
    const std::size_t n = states.size();
    std::vector<double> row(n);
    parallel_for(n, threads, [&](std::size_t i) {
        CompensatedSum<double> s;
        s.add(overlap(states[i], states[i]).real());
        for (std::size_t j = i + 1; j < n; j++) {
            s.add(2 * overlap(states[i], states[j]).real());
        }
        row[i] = s.value();
    });
    CompensatedSum<double> total;
    for (double v : row) {
        total.add(v);
    }
    return total.value();
}

std::vector<double> path_magnitudes(const std::vector<PathState> &states, int threads) {
    std::vector<double> out(states.size());
    parallel_for(states.size(), threads, [&](std::size_t i) {
        const PathState &st = states[i];
        if (st.kind == SourceKind::gaussian) {
            const auto &g = st.gauss;
            if (!(g.A < 0)) {
                throw DomainError("path magnitude of non-normalizable state (A >= 0)");
            }
            out[i] = std::exp(2 * g.log_chi.real() + g.C * g.C / (-2 * g.A)) * std::sqrt(std::numbers::pi / (-2 * g.A));
        } else {
            out[i] = overlap(st, st).real();
        }
    });
    return out;
}

}  // namespace mpd
