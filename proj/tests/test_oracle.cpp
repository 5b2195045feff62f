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

#include "mpdsim/analysis.hpp"
#include "mpdsim/oracle.hpp"
#include "support.hpp"

namespace {

using namespace mpd;
using namespace mpd::testing;
using C = std::complex<double>;

constexpr double lambda = 650e-9;

SampledField gaussian_field(double sigma, double half_width, std::size_t n) {
    PathState s;
    s.gauss = gaussian_source_state(sigma);
    return sample_states_on({s}, -half_width, 2 * half_width / static_cast<double>(n - 1), n, 1);
}

TEST(Oracle, FreeSpaceKernelEqualsLctKernel) {
    OracleKernel a = OracleKernel::free_space(0.1, lambda);
    LctMatrixd m = lct_free_space(0.1, lambda);
    OracleKernel b = OracleKernel::lct(m.a(), m.b(), m.c(), m.d());
    EXPECT_NEAR(std::abs(a.amp - b.amp), 0, 1e-9 * std::abs(b.amp));
    EXPECT_NEAR(a.q1, b.q1, 1e-9 * std::abs(b.q1));
    EXPECT_NEAR(a.q10, b.q10, 1e-9 * std::abs(b.q10));
    EXPECT_NEAR(a.q0, b.q0, 1e-9 * std::abs(b.q0));
    EXPECT_THROW(OracleKernel::lct(1, 0, 0, 1), DomainError);
    EXPECT_THROW(OracleKernel::free_space(0, lambda), DomainError);
}

TEST(Oracle, GaussianThroughFreeSpaceMatchesClosedForm) {
    const double sigma = 20e-6, L = 0.05;
    SampledField in = gaussian_field(sigma, 300e-6, 4096);
    std::vector<double> xs;
    for (int k = -100; k <= 100; k++) {
        xs.push_back(k * 4e-6);
    }
    auto out = quadrature_at(in, OracleKernel::free_space(L, lambda), xs, 1);
    auto st = init_gaussian(sigma, lct_free_space(L, lambda));
    std::vector<C> ref;
    for (double x : xs) {
        ref.push_back(st(x));
    }
    EXPECT_LT(compare(out, ref, false).linf_rel, 1e-6);
}

TEST(Oracle, FreeSpaceSemigroupAndUnitarity) {
    SampledField in = gaussian_field(30e-6, 400e-6, 4096);
    OracleGrid grid = OracleGrid::spanning(-1.5e-3, 1.5e-3, 8192);
    Propagation one = quadrature_propagate(in, OracleKernel::free_space(0.04, lambda), grid, 1);
    Propagation two = quadrature_propagate(one.field, OracleKernel::free_space(0.03, lambda), grid, 1);
    Propagation direct = quadrature_propagate(in, OracleKernel::free_space(0.07, lambda), grid, 1);
    EXPECT_LT(compare(two.field, direct.field, false).linf_rel, 1e-6);
    EXPECT_NEAR(one.norm_out, one.norm_in, 1e-6);
    EXPECT_NEAR(direct.norm_out, direct.norm_in, 1e-6);
}

TEST(Oracle, NearIdentityKernelReturnsInput) {
    // The kernel phase varies on the scale sqrt(b), so the grid must resolve it.
    const double sigma = 40e-6, b = 1e-12;  // a = d = 1
    SampledField in = gaussian_field(sigma, 180e-6, std::size_t{1} << 20);
    const std::vector<double> xs{-2e-5, 0, 1e-5, 2e-5};
    auto out = quadrature_at(in, OracleKernel::lct(1, b, 0, 1), xs, 1);
    PathState s;
    s.gauss = gaussian_source_state(sigma);
    for (std::size_t i = 0; i < out.size(); i++) {
        EXPECT_NEAR(std::abs(out[i] - s(xs[i])), 0, 1e-4 * std::abs(s(0)));
    }
}

TEST(Oracle, QuarterPeriodOscillatorIsScaledFourierTransform) {
    PhotonConstantsd k = PhotonConstantsd::from_wavelength(lambda);
    double t = pi / (2 * k.omega);
    SampledField in = gaussian_field(25e-6, 400e-6, 4096);
    // Shift the field off-centre so the transform carries a phase ramp.
    for (std::size_t i = 0; i < in.size(); i++) {
        in.psi[i] *= std::polar(1.0, 3e4 * in.x(i));
    }
    MomentumField phi = momentum_transform(in);
    std::vector<double> xs;
    std::vector<C> ref;
    for (std::size_t j = phi.phi.size() / 2 - 40; j <= phi.phi.size() / 2 + 40; j += 4) {
        double p = phi.p0 + static_cast<double>(j) * phi.dp;
        xs.push_back(p * t / k.mass);
        ref.push_back(std::sqrt(k.mass / t) * phi.phi[j]);
    }
    auto out = quadrature_at(in, OracleKernel::harmonic(t, lambda), xs, 1);
    std::vector<double> a, b;
    for (std::size_t i = 0; i < out.size(); i++) {
        a.push_back(std::abs(out[i]));
        b.push_back(std::abs(ref[i]));
    }
    double peak = *std::max_element(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); i++) {
        EXPECT_NEAR(a[i], b[i], 1e-6 * peak);
    }
    // Up to a constant phase the values agree as well.
    EXPECT_LT(compare(out, ref, true).linf_rel, 1e-6);
}

TEST(Oracle, CoarseGridRaisesGridError) {
    SampledField in = gaussian_field(200e-6, 1e-3, 512);
    try {
        quadrature_at(in, OracleKernel::free_space(1e-4, lambda), {5e-4}, 1);
        FAIL() << "expected GridError";
    } catch (const GridError &e) {
        EXPECT_GT(e.required_points(), 512u);
    }
}

TEST(Oracle, SlitMasks) {
    SampledField in = gaussian_field(100e-6, 1e-3, 4001);
    DiffractionPlane wide{{{0, 1e3}}};
    SampledField same = apply_slit_plane(in, wide, 0);
    EXPECT_LT(compare(same, in, false).linf_rel, 1e-12);

    DiffractionPlane two{{{-6e-4, 1e-5}, {6e-4, 1e-5}}};
    auto norm = [](const SampledField &f) { return detection_probability(f); };
    double both = norm(apply_slit_plane(in, two, std::nullopt));
    double a = norm(apply_slit_plane(in, two, 0)), b = norm(apply_slit_plane(in, two, 1));
    EXPECT_NEAR(both, a + b, 1e-10 * both);
}

TEST(Oracle, CompareHandlesGlobalPhase) {
    std::vector<C> a{{1, 0}, {0.5, 0.2}, {-0.1, 0.3}};
    std::vector<C> b;
    for (const C &v : a) {
        b.push_back(v * std::polar(1.0, 0.7));
    }
    EXPECT_EQ(compare(a, a, false).linf_abs, 0);
    EXPECT_LT(compare(b, a, true).linf_rel, 1e-15);
    EXPECT_GT(compare(b, a, false).linf_rel, 0.1);
}

TEST(Oracle, LensInsideFirstSectionMatchesEngine) {
    // Lens of 60 mm placed at 40% of a 1 ns free-space interval.
    const double L = speed_of_light * 1e-9, r = 0.4;
    SetupConfig c = load_fixture("lattice_n2_k3.json");
    c.optics[0] = OpticsSegment{{element::FreeSpace{r * L}, element::Lens{0.06}, element::FreeSpace{(1 - r) * L}}};
    PathEngine e(c);
    PathState st = e.state_at(1, std::vector<int>{});
    OracleGrid grid = OracleGrid::spanning(st.envelope_center() - 5 * st.envelope_width(),
                                           st.envelope_center() + 5 * st.envelope_width(), 1001);
    SampledField ref = oracle_plane_field(c, 1, {}, grid, 1);
    std::vector<C> closed;
    for (double x : grid.points()) {
        closed.push_back(st(x));
    }
    EXPECT_LT(compare(closed, ref.psi, false).linf_rel, 1e-6);
}

TEST(Oracle, FullPipelineMatchesEngine) {
    SetupConfig c = load_fixture("two_plane_fsp_gauss.json");
    PathEngine e(c);
    std::vector<double> xs;
    for (int k = -2000; k <= 2000; k += 50) {
        xs.push_back(k * c.sensor.ts);
    }
    auto closed = superpose(e.sensor_states({}, 1), xs, 1);
    auto ref = oracle_sensor_field(c, {}, xs, 1);
    EXPECT_LT(compare(closed, ref, false).linf_rel, 1e-5);
}

}  // namespace
