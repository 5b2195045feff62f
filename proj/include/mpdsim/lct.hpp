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
#include <limits>
#include <sstream>

#include <Eigen/Core>

#include "mpdsim/constants.hpp"
#include "mpdsim/errors.hpp"

namespace mpd {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Unit-determinant (a, b; c, d) matrix of a quadratic-phase optical section.
/// SI units: b in m^2, c in m^-2. The kernel convention is
///   K(x1, x0) = e^{-i pi/4} sqrt(1/b) exp(i pi/b (d x1^2 - 2 x1 x0 + a x0^2)).
template <typename Scalar>
class LctMatrix {
   public:
    LctMatrix() : m_(Matrix2<Scalar>::Identity()) {
    }

    /// Checks ad - bc = 1 to `tolerance`, relative to the size of the products.
    static LctMatrix from_entries(Scalar a, Scalar b, Scalar c, Scalar d, Scalar tolerance = Scalar(1e-9)) {
        Matrix2<Scalar> m;
        m << a, b, c, d;
        LctMatrix r(m);
        if (!(r.determinant_error() <= tolerance)) {
            std::ostringstream ss;
            ss.precision(17);
            ss << "LCT matrix determinant " << r.determinant() << " differs from 1 by more than " << tolerance;
            throw DomainError(ss.str());
        }
        return r;
    }

    static LctMatrix from_matrix(const Matrix2<Scalar> &m, Scalar tolerance = Scalar(1e-9)) {
        return from_entries(m(0, 0), m(0, 1), m(1, 0), m(1, 1), tolerance);
    }

    static LctMatrix identity() {
        return LctMatrix();
    }

    Scalar a() const {
        return m_(0, 0);
    }
    Scalar b() const {
        return m_(0, 1);
    }
    Scalar c() const {
        return m_(1, 0);
    }
    Scalar d() const {
        return m_(1, 1);
    }
    const Matrix2<Scalar> &matrix() const {
        return m_;
    }

    Scalar determinant() const {
        return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0);
    }

    /// |ad - bc - 1| scaled by max(1, |ad| + |bc|).
    Scalar determinant_error() const {
        using std::abs;
        Scalar ad = m_(0, 0) * m_(1, 1);
        Scalar bc = m_(0, 1) * m_(1, 0);
        Scalar scale = std::max(Scalar(1), abs(ad) + abs(bc));
        return abs(ad - bc - Scalar(1)) / scale;
    }

    bool operator==(const LctMatrix &other) const {
        return m_ == other.m_;
    }

    template <typename Other>
    LctMatrix<Other> cast() const {
        return LctMatrix<Other>::unchecked(m_.template cast<Other>());
    }

    static LctMatrix unchecked(const Matrix2<Scalar> &m) {
        return LctMatrix(m);
    }

   private:
    explicit LctMatrix(const Matrix2<Scalar> &m) : m_(m) {
    }

    Matrix2<Scalar> m_;
};

using LctMatrixd = LctMatrix<double>;

/// Matrix product m2 * m1: m1 acts first.
template <typename Scalar>
LctMatrix<Scalar> compose(const LctMatrix<Scalar> &m2, const LctMatrix<Scalar> &m1) {
    return LctMatrix<Scalar>::unchecked(m2.matrix() * m1.matrix());
}

template <typename Scalar>
LctMatrix<Scalar> lct_free_space(Scalar length, Scalar wavelength) {
    if (!(length >= 0)) {
        throw DomainError("free-space length must be non-negative");
    }
    if (!(wavelength > 0)) {
        throw DomainError("wavelength must be positive");
    }
    Matrix2<Scalar> m;
    m << Scalar(1), wavelength * length, Scalar(0), Scalar(1);
    return LctMatrix<Scalar>::unchecked(m);
}

/// Infinite focal length gives the identity.
template <typename Scalar>
LctMatrix<Scalar> lct_lens(Scalar focal, Scalar wavelength) {
    if (focal == 0) {
        throw DomainError("lens focal length must be non-zero");
    }
    if (!(wavelength > 0)) {
        throw DomainError("wavelength must be positive");
    }
    Matrix2<Scalar> m;
    Scalar c = std::isinf(static_cast<double>(focal)) ? Scalar(0) : -Scalar(1) / (wavelength * focal);
    m << Scalar(1), Scalar(0), c, Scalar(1);
    return LctMatrix<Scalar>::unchecked(m);
}

template <typename Scalar>
LctMatrix<Scalar> lct_frft(Scalar alpha) {
    using std::cos;
    using std::sin;
    Matrix2<Scalar> m;
    m << cos(alpha), sin(alpha), -sin(alpha), cos(alpha);
    return LctMatrix<Scalar>::unchecked(m);
}

template <typename Scalar>
LctMatrix<Scalar> lct_scale(Scalar a) {
    if (a == 0) {
        throw DomainError("scale factor must be non-zero");
    }
    Matrix2<Scalar> m;
    m << a, Scalar(0), Scalar(0), Scalar(1) / a;
    return LctMatrix<Scalar>::unchecked(m);
}

/// Multiplication by exp(i pi c x^2).
template <typename Scalar>
LctMatrix<Scalar> lct_chirp(Scalar c) {
    Matrix2<Scalar> m;
    m << Scalar(1), Scalar(0), c, Scalar(1);
    return LctMatrix<Scalar>::unchecked(m);
}

/// Harmonic-oscillator evolution for duration t. Integer multiples of pi in
/// omega t give a reflected copy of the input, which has no kernel.
template <typename Scalar>
LctMatrix<Scalar> lct_harmonic_oscillator(Scalar t, const PhotonConstants<Scalar> &consts) {
    using std::abs;
    using std::cos;
    using std::sin;
    Scalar phase = consts.omega * t;
    Scalar s = sin(phase);
    if (abs(s) < Scalar(1e-12)) {
        throw DomainError(
            "harmonic-oscillator segment has omega*t at a multiple of pi; merge the slit planes on either "
            "side into one plane instead");
    }
    Scalar scale = Scalar(2) * Scalar(pi) * Scalar(hbar) * t / consts.mass;
    Matrix2<Scalar> m;
    m << cos(phase), scale * s, -s / scale, cos(phase);
    return LctMatrix<Scalar>::unchecked(m);
}

template <typename Scalar>
LctMatrix<Scalar> lct_graded_index(Scalar length, Scalar chi, Scalar lambda_chi) {
    using std::cos;
    using std::sin;
    if (!(chi > 0)) {
        throw DomainError("graded-index chi must be positive");
    }
    Scalar alpha = length / chi;
    Matrix2<Scalar> m;
    m << cos(alpha), lambda_chi * sin(alpha), -sin(alpha) / lambda_chi, cos(alpha);
    return LctMatrix<Scalar>::unchecked(m);
}

/// Free space L_a, a thin lens f, then free space L_b.
template <typename Scalar>
struct ThreeElementRealization {
    Scalar length_a;
    Scalar focal;
    Scalar length_b;
    bool physical;
};

template <typename Scalar>
ThreeElementRealization<Scalar> realize_three_element(const LctMatrix<Scalar> &m, Scalar wavelength) {
    if (m.c() == 0) {
        throw DomainError("matrix with c = 0 has no lens power and cannot be realized by free space-lens-free space");
    }
    Scalar f = -Scalar(1) / (wavelength * m.c());
    Scalar lb = (Scalar(1) - m.a()) * f;
    Scalar la = (Scalar(1) - m.d()) * f;
    bool physical = la >= 0 && lb >= 0 && std::isfinite(static_cast<double>(f));
    return {la, f, lb, physical};
}

/// Recomposes the realization without the non-negative length check of
/// lct_free_space, so unphysical (negative) lengths round-trip as well.
template <typename Scalar>
LctMatrix<Scalar> recompose(const ThreeElementRealization<Scalar> &r, Scalar wavelength) {
    Matrix2<Scalar> fa, fb;
    fa << Scalar(1), wavelength * r.length_a, Scalar(0), Scalar(1);
    fb << Scalar(1), wavelength * r.length_b, Scalar(0), Scalar(1);
    return compose(LctMatrix<Scalar>::unchecked(fb),
                   compose(lct_lens(r.focal, wavelength), LctMatrix<Scalar>::unchecked(fa)));
}

}  // namespace mpd
