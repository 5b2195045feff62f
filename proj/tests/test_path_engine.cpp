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

#include <gtest/gtest.h>

#include <random>

#include "mpdsim/analysis.hpp"
#include "mpdsim/hermite.hpp"
#include "mpdsim/oracle.hpp"
#include "mpdsim/path_engine.hpp"
#include "support.hpp"

namespace {

using namespace mpd;
using namespace mpd::testing;
using C = std::complex<double>;

TEST(Hermite, RecurrenceMatchesExplicitPolynomials) {
    for (double x : {-1.3, 0.0, 0.4, 2.5}) {
        EXPECT_DOUBLE_EQ(hermite(0, x), 1);
        EXPECT_DOUBLE_EQ(hermite(1, x), 2 * x);
        EXPECT_NEAR(hermite(3, x), 8 * x * x * x - 12 * x, 1e-12);
        EXPECT_NEAR(hermite(4, x), 16 * std::pow(x, 4) - 48 * x * x + 12, 1e-11);
    }
    auto all = hermite_all(10, C(0.3, -0.2));
    for (int l = 0; l <= 10; l++) {
        EXPECT_NEAR(std::abs(all[l] - hermite(l, C(0.3, -0.2))), 0, 1e-9);
    }
    EXPECT_THROW(hermite(31, 0.5), DomainError);
}

TEST(Hermite, GaussianIntegralIdentityByGaussHermiteRule) {
    // x = y + sqrt(2) t turns the left side into a Gauss-Hermite integral.
    GaussHermiteRule rule = gauss_hermite_rule(24);
    std::mt19937_64 rng(9);
    for (int l = 0; l <= 10; l++) {
        double a = uniform(rng, -0.9, 0.9), y = uniform(rng, -2, 2);
        double lhs = 0, scale = 0;
        for (std::size_t k = 0; k < rule.nodes.size(); k++) {
            double v = rule.weights[k] * std::sqrt(2.0) * hermite(l, a * (y + std::sqrt(2.0) * rule.nodes[k]) / std::sqrt(2.0));
            lhs += v;
            scale += std::abs(v);
        }
        EXPECT_NEAR(lhs, hermite_gaussian_integral(l, a, y), 1e-10 * scale) << "l=" << l;
    }
    EXPECT_THROW(hermite_gaussian_integral(2, 1.0, 0), DomainError);
}

TEST(PathEngine, SourcesAreUnitNorm) {
    PathState g;
    g.gauss = gaussian_source_state(20e-6);
    EXPECT_NEAR(overlap(g, g).real(), 1, 1e-13);
    for (int l = 0; l <= 10; l++) {
        PathState h;
        h.kind = SourceKind::hermite_gaussian;
        h.hg = hg_source_state(200e-6, l);
        EXPECT_NEAR(overlap(h, h).real(), 1, 1e-12) << "l=" << l;
    }
}

TEST(PathEngine, SinglePathsMatchQuadrature) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 6; trial++) {
        auto kind = trial % 2 ? SourceKind::hermite_gaussian : SourceKind::gaussian;
        SetupConfig c = random_setup(rng, 2, kind);
        PathEngine e(c);
        std::vector<int> slits = path_slits(c, path_count(c) - 1);
        PathState st = e.state_at(e.plane_count(), slits);
        std::vector<double> xs;
        for (int k = -8; k <= 8; k++) {
            xs.push_back(st.envelope_center() + 0.25 * k * st.envelope_width());
        }
        std::vector<C> closed;
        for (double x : xs) {
            closed.push_back(st(x));
        }
        auto ref = oracle_sensor_field(c, slits, xs, 1);
        EXPECT_LT(compare(closed, ref, false).linf_rel, 1e-6) << "trial " << trial;
    }
}

TEST(PathEngine, HarmonicSegmentMatchesOscillatorKernel) {
    SetupConfig c = load_fixture("lattice_n2_k3.json");
    double period = 2 * pi / c.constants().omega;
    c.optics[1] = OpticsSegment{{element::HarmonicOscillator{0.3 * period}}};
    PathEngine e(c);
    // One path through the centre slit. At the photon frequency the kernel
    // resolves sub-micron detail, so integrate the masked field on a tight grid.
    const Slit &slit = c.planes[0].slits[1];
    PathState before = e.state_at(1, std::vector<int>{});
    PathState after = e.state_at(2, std::vector<int>{1});
    const std::size_t n = std::size_t{1} << 19;
    SampledField masked;
    masked.x0 = slit.center - 6 * slit.width;
    masked.dx = 12 * slit.width / static_cast<double>(n - 1);
    masked.psi.resize(n);
    for (std::size_t i = 0; i < n; i++) {
        double x = masked.x(i);
        masked.psi[i] = before(x) * std::exp(-(x - slit.center) * (x - slit.center) / (2 * slit.width * slit.width));
    }
    std::vector<double> xs;
    for (int k = -20; k <= 20; k++) {
        xs.push_back(after.envelope_center() + 0.15 * k * after.envelope_width());
    }
    auto ref = quadrature_at(masked, OracleKernel::harmonic(0.3 * period, c.wavelength), xs, 1);
    std::vector<C> closed;
    for (double x : xs) {
        closed.push_back(after(x));
    }
    EXPECT_LT(compare(closed, ref, false).linf_rel, 1e-6);
}

TEST(PathEngine, LensOnlySectionIsMaskThenChirp) {
    SetupConfig c = load_fixture("lattice_n2_k3.json");
    c.optics[1] = OpticsSegment{{element::Lens{0.05}}};
    PathEngine e(c);
    double cc = -1 / (c.wavelength * 0.05);
    for (int s = 0; s < 3; s++) {
        PathState before = e.state_at(1, std::vector<int>{});
        PathState after = e.state_at(2, std::vector<int>{s});
        const Slit &slit = c.planes[0].slits[s];
        for (double x : {-3e-5, 0.0, 1e-5, 4e-5}) {
            C expect = before(x) * std::exp(-(x - slit.center) * (x - slit.center) / (2 * slit.width * slit.width)) *
                       std::polar(1.0, pi * cc * x * x);
            EXPECT_NEAR(std::abs(after(x) - expect), 0, 1e-10 * std::abs(expect));
        }
    }
}

TEST(PathEngine, OrderZeroHermiteGaussianEqualsGaussian) {
    SetupConfig g = load_fixture("lattice_n3_k33.json");
    SetupConfig h = g;
    h.source = {SourceKind::hermite_gaussian, g.source.width * std::sqrt(2 * pi), 0};
    PathEngine eg(g), eh(h);
    for (std::uint64_t n = 0; n < path_count(g); n++) {
        PathState a = eg.state_at(eg.plane_count(), n), b = eh.state_at(eh.plane_count(), n);
        for (double x : {-2e-4, -5e-5, 0.0, 7e-5}) {
            EXPECT_NEAR(std::abs(a(x) - b(x)), 0, 1e-10 * std::abs(a(x)));
        }
    }
}

TEST(PathEngine, PrefixIndexingAndErrors) {
    PathEngine e(load_fixture("two_plane_lct_gauss.json"));
    EXPECT_EQ(e.prefix_count(0), 1u);
    EXPECT_EQ(e.prefix_count(2), 11u);
    EXPECT_EQ(e.prefix_count(3), 297u);
    EXPECT_EQ(e.states_at(2, 1).size(), 11u);
    PathState a = e.state_at(3, std::uint64_t(28)), b = e.state_at(3, std::vector<int>{1, 1});
    EXPECT_EQ(a(1e-5), b(1e-5));
    EXPECT_THROW(e.state_at(4, std::vector<int>{0, 0}), DomainError);
    EXPECT_THROW(e.state_at(3, std::vector<int>{0}), DomainError);
    EXPECT_THROW(e.sensor_states({297}, 1), DomainError);
}

TEST(PathEngine, SuperpositionIsIndependentOfThreadCount) {
    PathEngine e(load_fixture("two_plane_lct_hg.json"));
    auto s1 = e.sensor_states({}, 1), s3 = e.sensor_states({}, 3);
    std::vector<double> xs;
    for (int k = -100; k <= 100; k++) {
        xs.push_back(k * 1e-6);
    }
    auto a = superpose(s1, xs, 1), b = superpose(s3, xs, 3);
    for (std::size_t i = 0; i < xs.size(); i++) {
        EXPECT_EQ(a[i], b[i]);
    }
}

TEST(PathEngine, SensorSamplesAndNeuron) {
    PathEngine e(load_fixture("lattice_n2_k3.json"));
    auto states = e.sensor_states({}, 1);
    SensorSamples s = sample_sensor(e, states, 1);
    ASSERT_EQ(s.intensity.size(), 801u);
    EXPECT_NEAR(s.intensity[400], std::norm(s.amplitude[400]), 0);
    std::vector<Slit> out{{0, 1e-5}, {2e-5, 5e-6}};
    double x = 1e-5;
    double mask = std::exp(-x * x / (2 * 1e-10)) + std::exp(-(x - 2e-5) * (x - 2e-5) / (2 * 25e-12));
    C expect = mask * superpose(states, {x}, 1)[0];
    EXPECT_NEAR(std::abs(neuron_output(e, out, x, 1) - expect), 0, 1e-12 * std::abs(expect));
}

}  // namespace
