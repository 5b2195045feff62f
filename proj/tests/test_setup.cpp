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

#include <cstdio>
#include <filesystem>

#include "mpdsim/config_io.hpp"
#include "mpdsim/path_engine.hpp"
#include "mpdsim/setup.hpp"
#include "support.hpp"

namespace {

using namespace mpd;
using namespace mpd::testing;

bool mentions(const ValidationReport &r, const std::string &needle) {
    for (const auto &v : r.violations) {
        if (v.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

TEST(Setup, FixturesValidate) {
    for (const char *f : {"two_plane_lct_hg.json", "two_plane_fsp_hg.json", "two_plane_lct_gauss.json", "two_plane_fsp_gauss.json",
                          "lattice_n2_k3.json", "lattice_n3_k33.json"}) {
        SetupConfig c = load_fixture(f);
        EXPECT_TRUE(validate(c).ok()) << f;
    }
}

TEST(Setup, TwoPlaneFixtureHasExpectedShape) {
    SetupConfig c = load_fixture("two_plane_lct_hg.json");
    EXPECT_EQ(c.planes.size(), 2u);
    EXPECT_EQ(c.planes[0].slits.size(), 11u);
    EXPECT_EQ(c.planes[1].slits.size(), 27u);
    EXPECT_EQ(path_count(c), 297u);
    EXPECT_EQ(c.plane_count(), 3);
    EXPECT_EQ(c.source.order, 10);
}

TEST(Setup, CorruptedDeterminantIsLocated) {
    SetupConfig c = load_fixture("corrupted_det.json");
    ValidationReport r = validate(c);
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(mentions(r, "optics[1].elements[0]"));
    EXPECT_THROW(PathEngine{c}, ValidationError);
}

TEST(Setup, ReportsEachViolation) {
    SetupConfig c = load_fixture("lattice_n2_k3.json");
    c.wavelength = -1;
    c.planes[0].slits[1].width = 0;
    c.optics.pop_back();
    c.sensor.ts = 0;
    ValidationReport r = validate(c);
    EXPECT_TRUE(mentions(r, "wavelength_m"));
    EXPECT_TRUE(mentions(r, "planes[0].slits[1].width_m"));
    EXPECT_TRUE(mentions(r, "optics: expected 2 segments"));
    EXPECT_TRUE(mentions(r, "sensor.ts_m"));
}

TEST(Setup, PathCapIsEnforced) {
    SetupConfig c = load_fixture("two_plane_lct_gauss.json");
    c.path_cap = 100;
    EXPECT_TRUE(mentions(validate(c), "path cap"));
}

TEST(Setup, CanonicalizeSortsStably) {
    SetupConfig c = load_fixture("lattice_n2_k3.json");
    c.planes[0].slits = {{3e-5, 1e-5}, {-1e-5, 2e-5}, {3e-5, 3e-5}};
    canonicalize(c);
    EXPECT_DOUBLE_EQ(c.planes[0].slits[0].center, -1e-5);
    EXPECT_DOUBLE_EQ(c.planes[0].slits[1].width, 1e-5);
    EXPECT_DOUBLE_EQ(c.planes[0].slits[2].width, 3e-5);
    EXPECT_TRUE(validate(c).ok());
}

TEST(Setup, PathIndexIsMixedRadixWithFirstPlaneMostSignificant) {
    SetupConfig c = load_fixture("two_plane_lct_gauss.json");
    EXPECT_EQ(path_slits(c, 0), (std::vector<int>{0, 0}));
    EXPECT_EQ(path_slits(c, 1), (std::vector<int>{0, 1}));
    EXPECT_EQ(path_slits(c, 27), (std::vector<int>{1, 0}));
    EXPECT_EQ(path_slits(c, 296), (std::vector<int>{10, 26}));
    for (std::uint64_t n = 0; n < path_count(c); n++) {
        EXPECT_EQ(path_index(c, path_slits(c, n)), n);
    }
    EXPECT_THROW(path_slits(c, 297), DomainError);
    EXPECT_THROW(path_index(c, {11, 0}), DomainError);
}

TEST(Setup, JsonRoundTrip) {
    SetupConfig c = load_fixture("two_plane_lct_hg.json");
    auto doc = config_to_json(c);
    SetupConfig back = config_from_json(doc);
    EXPECT_EQ(canonical_text(config_to_json(back)), canonical_text(doc));
}

TEST(Setup, UnknownKeysAndTypesAreRejected) {
    auto doc = config_to_json(load_fixture("lattice_n2_k3.json"));
    auto bad = doc;
    bad["colour"] = 1;
    EXPECT_THROW(config_from_json(bad), ValidationError);
    bad = doc;
    bad["optics"][0]["type"] = "mirror";
    EXPECT_THROW(config_from_json(bad), ValidationError);
    bad = doc;
    bad["source"]["kind"] = "laguerre";
    EXPECT_THROW(config_from_json(bad), ValidationError);
    EXPECT_THROW(load_config("/nonexistent/setup.json"), ValidationError);
}

TEST(Mixture, RecoversTwoTermMixture) {
    std::vector<double> xs, ys;
    for (int i = -200; i <= 200; i++) {
        double x = i * 0.5e-6;
        xs.push_back(x);
        ys.push_back(0.7 * std::exp(-x * x / (2 * 10e-6 * 10e-6)) + 0.3 * std::exp(-x * x / (2 * 40e-6 * 40e-6)));
    }
    GaussianMixtureMask m = fit_gaussian_mixture(xs, ys, 2);
    EXPECT_LT(m.residual_rms, 1e-8);
    for (std::size_t i = 0; i < xs.size(); i += 37) {
        EXPECT_NEAR(m(xs[i]), ys[i], 1e-7);
    }
}

TEST(Mixture, ApproximatesRectangularSlit) {
    std::vector<double> xs, ys;
    for (int i = -400; i <= 400; i++) {
        double x = i * 0.25e-6;
        xs.push_back(x);
        ys.push_back(std::abs(x) <= 20e-6 ? 1.0 : 0.0);
    }
    double r1 = fit_gaussian_mixture(xs, ys, 1).residual_rms;
    double r3 = fit_gaussian_mixture(xs, ys, 3).residual_rms;
    EXPECT_LT(r3, r1);
    EXPECT_THROW(fit_gaussian_mixture(xs, ys, 0), DomainError);
}

}  // namespace
