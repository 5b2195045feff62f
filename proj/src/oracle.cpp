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

#include "mpdsim/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mpdsim/parallel.hpp"
#include "mpdsim/summation.hpp"

namespace mpd {

using C = std::complex<double>;

C OracleKernel::operator()(double x1, double x0) const {
    return amp * std::polar(1.0, q1 * x1 * x1 + q10 * x1 * x0 + q0 * x0 * x0);
}

double OracleKernel::phase_rate(double x1lo, double x1hi, double x0lo, double x0hi) const {
    double r = 0;
    for (double x1 : {x1lo, x1hi}) {
        for (double x0 : {x0lo, x0hi}) {
            r = std::max(r, std::abs(q10 * x1 + 2 * q0 * x0));
        }
    }
    return r;
}

namespace {

// sqrt(1 / (i b)) on the principal branch.
C inverse_root(double b) {
    return std::sqrt(1.0 / C(0, b));
}

}  // namespace

OracleKernel OracleKernel::lct(double a, double b, double c, double d) {
    (void)c;
    if (b == 0) {
        throw DomainError("oracle kernel needs b != 0");
    }
    return {inverse_root(b), pi * d / b, -2 * pi / b, pi * a / b};
}

OracleKernel OracleKernel::free_space(double length, double wavelength) {
    if (!(length > 0)) {
        throw DomainError("oracle free-space kernel needs a positive length");
    }
    // sqrt(m / (2 pi i hbar t)) exp(i m (x1 - x0)^2 / (2 hbar t)), t = L / c.
    PhotonConstantsd k = PhotonConstantsd::from_wavelength(wavelength);
    return massive(k.mass, length / speed_of_light);
}

OracleKernel OracleKernel::harmonic(double duration, double wavelength) {
    PhotonConstantsd k = PhotonConstantsd::from_wavelength(wavelength);
    double s = std::sin(k.omega * duration);
    double co = std::cos(k.omega * duration);
    if (std::abs(s) < 1e-12) {
        throw DomainError("oracle harmonic kernel needs omega t off multiples of pi");
    }
    double denom = hbar * duration * s;
    C amp = std::sqrt(C(k.mass, 0) / C(0, 2 * pi * denom));
    double q = k.mass / (2 * denom);
    return {amp, q * co, -2 * q, q * co};
}

OracleKernel OracleKernel::massive(double mass, double duration) {
    if (!(mass > 0) || duration == 0) {
        throw DomainError("oracle massive kernel needs m > 0 and t != 0");
    }
    C amp = std::sqrt(C(mass, 0) / C(0, 2 * pi * hbar * duration));
    double q = mass / (2 * hbar * duration);
    return {amp, q, -2 * q, q};
}

OracleGrid OracleGrid::spanning(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) {
        throw DomainError("oracle grid needs n >= 2 and hi > lo");
    }
    return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

std::vector<double> OracleGrid::points() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; i++) {
        xs[i] = x0 + static_cast<double>(i) * dx;
    }
    return xs;
}

namespace {

double trapezoid_norm(const std::vector<C> &v, double dx) {
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < v.size(); i++) {
        double e = std::norm(v[i]);
        s.add((i == 0 || i + 1 == v.size()) ? e / 2 : e);
    }
    return std::sqrt(s.value() * dx);
}

// Phase advance per sample implied by the field's relative second
// difference, 4 sin^2(k dx / 2) for a plane wave. Sign changes at real zeros
// do not count, unlike a neighbour-phase test.
double field_phase_step(const SampledField &f) {
    double peak = 0;
    for (const C &v : f.psi) {
        peak = std::max(peak, std::abs(v));
    }
    double ratio = 0;
    for (std::size_t i = 1; i + 1 < f.size(); i++) {
        double m = std::max({std::abs(f.psi[i - 1]), std::abs(f.psi[i]), std::abs(f.psi[i + 1])});
        if (m > 1e-8 * peak) {
            ratio = std::max(ratio, std::abs(f.psi[i + 1] - 2.0 * f.psi[i] + f.psi[i - 1]) / (4 * m));
        }
    }
    return 2 * std::asin(std::sqrt(std::min(ratio, 1.0)));
}

void check_nyquist(const SampledField &in, const OracleKernel &k, double x1lo, double x1hi) {
    double xlo = in.x0, xhi = in.x(in.size() - 1);
    double kernel_step = k.phase_rate(x1lo, x1hi, xlo, xhi) * in.dx;
    double field_step = field_phase_step(in);
    double step = kernel_step + field_step;
    if (step >= pi / 2) {
        // Scale the kernel part only; the field's own step shrinks too but
        // that needs resampling upstream.
        double allowed = pi / 2 - field_step;
        std::size_t need = in.size();
        if (allowed > 0) {
            need = static_cast<std::size_t>(std::ceil(static_cast<double>(in.size() - 1) * kernel_step / allowed * 1.25)) + 1;
        } else {
            need = 2 * in.size();
        }
        throw GridError("oracle input grid under-resolves the integrand phase (" + std::to_string(step) +
                            " rad per sample)",
                        need);
    }
}

std::vector<C> integrate(const SampledField &in, const OracleKernel &k, const std::vector<double> &xs,
                         int threads) {
    std::vector<C> out(xs.size());
    const std::size_t n = in.size();
    parallel_for(xs.size(), threads, [&](std::size_t i) {
        CompensatedSum<C> s;
        for (std::size_t j = 0; j < n; j++) {
            C v = k(xs[i], in.x(j)) * in.psi[j];
            s.add((j == 0 || j + 1 == n) ? v / 2.0 : v);
        }
        out[i] = s.value() * in.dx;
    });
    return out;
}

}  // namespace

Propagation quadrature_propagate(const SampledField &in, const OracleKernel &kernel, const OracleGrid &out,
                                 int threads) {
    if (in.size() < 2) {
        throw DomainError("oracle input needs at least two samples");
    }
    check_nyquist(in, kernel, out.x0, out.x0 + static_cast<double>(out.n - 1) * out.dx);
    Propagation p;
    p.field.x0 = out.x0;
    p.field.dx = out.dx;
    p.field.psi = integrate(in, kernel, out.points(), threads);
    p.norm_in = trapezoid_norm(in.psi, in.dx);
    p.norm_out = trapezoid_norm(p.field.psi, out.dx);
    return p;
}

std::vector<C> quadrature_at(const SampledField &in, const OracleKernel &kernel, const std::vector<double> &xs,
                             int threads) {
    if (in.size() < 2) {
        throw DomainError("oracle input needs at least two samples");
    }
    if (!xs.empty()) {
        auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        check_nyquist(in, kernel, *lo, *hi);
    }
    return integrate(in, kernel, xs, threads);
}

SampledField apply_slit_plane(const SampledField &field, const DiffractionPlane &plane, std::optional<int> slit) {
    SampledField out = field;
    for (std::size_t i = 0; i < field.size(); i++) {
        double x = field.x(i);
        double m = 0;
        auto mask = [&](const Slit &s) {
            double t = (x - s.center) / s.width;
            return std::exp(-t * t / 2);
        };
        if (slit) {
            m = mask(plane.slits.at(*slit));
        } else {
            for (const Slit &s : plane.slits) {
                m += mask(s);
            }
        }
        out.psi[i] *= m;
    }
    return out;
}

Comparison compare(const std::vector<C> &a, const std::vector<C> &b, bool align) {
    if (a.size() != b.size()) {
        throw DomainError("compare: sample counts differ");
    }
    Comparison r;
    if (a.empty()) {
        return r;
    }
    std::size_t peak = 0;
    for (std::size_t i = 0; i < b.size(); i++) {
        if (std::abs(b[i]) > std::abs(b[peak])) {
            peak = i;
        }
    }
    C rot = 1;
    if (align && std::abs(a[peak]) > 0) {
        C q = b[peak] / a[peak];
        rot = q / std::abs(q);
    }
    double bmax = std::abs(b[peak]);
    CompensatedSum<double> e2, b2;
    for (std::size_t i = 0; i < a.size(); i++) {
        double e = std::abs(rot * a[i] - b[i]);
        r.linf_abs = std::max(r.linf_abs, e);
        e2.add(e * e);
        b2.add(std::norm(b[i]));
    }
    r.l2_abs = std::sqrt(e2.value());
    r.linf_rel = bmax > 0 ? r.linf_abs / bmax : r.linf_abs;
    r.l2_rel = b2.value() > 0 ? r.l2_abs / std::sqrt(b2.value()) : r.l2_abs;
    return r;
}

Comparison compare(const SampledField &a, const SampledField &b, bool align) {
    if (a.size() != b.size() || std::abs(a.x0 - b.x0) > 1e-12 * std::max(1.0, std::abs(b.dx) * b.size()) ||
        std::abs(a.dx - b.dx) > 1e-12 * std::abs(b.dx)) {
        throw DomainError("compare: fields sit on different grids");
    }
    return compare(a.psi, b.psi, align);
}

OracleKernel segment_kernel(const OpticsSegment &segment, double wavelength) {
    if (segment.elements.size() == 1) {
        if (auto *fs = std::get_if<element::FreeSpace>(&segment.elements[0])) {
            return OracleKernel::free_space(fs->length, wavelength);
        }
        if (auto *ho = std::get_if<element::HarmonicOscillator>(&segment.elements[0])) {
            return OracleKernel::harmonic(ho->duration, wavelength);
        }
    }
    LctMatrixd m = segment_matrix(segment, PhotonConstantsd::from_wavelength(wavelength));
    return OracleKernel::lct(m.a(), m.b(), m.c(), m.d());
}

namespace {

SampledField sample_source(const SetupConfig &config, std::size_t n) {
    PathState st;
    st.kind = config.source.kind;
    if (st.kind == SourceKind::gaussian) {
        st.gauss = gaussian_source_state(config.source.width);
    } else {
        st.hg = hg_source_state(config.source.width, config.source.order);
    }
    double w = st.envelope_width();
    OracleGrid g = OracleGrid::spanning(-12 * w, 12 * w, n);
    SampledField f;
    f.x0 = g.x0;
    f.dx = g.dx;
    f.psi.resize(n);
    for (std::size_t i = 0; i < n; i++) {
        f.psi[i] = st(f.x(i));
    }
    return f;
}

// Interval where the selected masks of a plane exceed e^{-50}.
std::pair<double, double> mask_support(const DiffractionPlane &plane, std::optional<int> slit) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < static_cast<int>(plane.slits.size()); i++) {
        if (slit && *slit != i) {
            continue;
        }
        const Slit &s = plane.slits[i];
        lo = std::min(lo, s.center - 10 * s.width);
        hi = std::max(hi, s.center + 10 * s.width);
    }
    return {lo, hi};
}

// GridError tagged with the index of the grid that fed the failing stage.
struct StageGridError {
    std::size_t stage;
    GridError error;
};

template <typename Fn>
auto at_stage(std::size_t stage, Fn fn) {
    try {
        return fn();
    } catch (const GridError &e) {
        throw StageGridError{stage, e};
    }
}

// Field just after the mask of plane `upto` (1-based), sampled with at least
// `points` samples per plane; grows a plane's grid when the next stage asks.
SampledField masked_field(const SetupConfig &config, int upto, const std::vector<int> &slits, int threads,
                          std::vector<std::size_t> &points) {
    SampledField f = sample_source(config, points[0]);
    for (int j = 0; j < upto; j++) {
        const DiffractionPlane &plane = config.planes[j];
        std::optional<int> sel;
        if (!slits.empty()) {
            sel = slits.at(j);
        }
        auto [lo, hi] = mask_support(plane, sel);
        OracleKernel k = segment_kernel(config.optics[j], config.wavelength);
        Propagation p = at_stage(j, [&] {
            return quadrature_propagate(f, k, OracleGrid::spanning(lo, hi, points[j + 1]), threads);
        });
        f = apply_slit_plane(p.field, plane, sel);
    }
    return f;
}

template <typename Fn>
auto with_regrid(const SetupConfig &config, const OraclePolicy &policy, Fn fn) {
    std::vector<std::size_t> points(config.planes.size() + 1, policy.points);
    for (int attempt = 0;; attempt++) {
        try {
            return fn(points);
        } catch (const StageGridError &e) {
            // Grow only the grid feeding the stage that failed.
            std::size_t &p = points.at(e.stage);
            if (p >= policy.max_points || attempt > 6 + static_cast<int>(points.size())) {
                throw e.error;
            }
            p = std::min(std::max(e.error.required_points(), p * 2), policy.max_points);
        }
    }
}

}  // namespace

std::vector<C> oracle_sensor_field(const SetupConfig &config, const std::vector<int> &slits,
                                   const std::vector<double> &xs, int threads, const OraclePolicy &policy) {
    if (!slits.empty() && slits.size() != config.planes.size()) {
        throw DomainError("oracle: slit list length differs from plane count");
    }
    const int last = static_cast<int>(config.planes.size());
    return with_regrid(config, policy, [&](std::vector<std::size_t> &points) {
        SampledField f = masked_field(config, last, slits, threads, points);
        return at_stage(last, [&] {
            return quadrature_at(f, segment_kernel(config.optics[last], config.wavelength), xs, threads);
        });
    });
}

SampledField oracle_plane_field(const SetupConfig &config, int plane, const std::vector<int> &slits,
                                const OracleGrid &out, int threads, const OraclePolicy &policy) {
    if (plane < 1 || plane > static_cast<int>(config.planes.size()) + 1) {
        throw DomainError("oracle: plane index out of range");
    }
    return with_regrid(config, policy, [&](std::vector<std::size_t> &points) {
        SampledField f = masked_field(config, plane - 1, slits, threads, points);
        return at_stage(plane - 1, [&] {
            return quadrature_propagate(f, segment_kernel(config.optics[plane - 1], config.wavelength), out, threads)
                .field;
        });
    });
}

}  // namespace mpd
