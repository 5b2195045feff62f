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

#include "mpdsim/setup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mpd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool b_free_element(const OpticsElement &e) {
    return std::holds_alternative<element::Scale>(e) || std::holds_alternative<element::Chirp>(e) ||
           std::holds_alternative<element::Lens>(e) || std::holds_alternative<element::Abcd>(e);
}

}  // namespace

bool is_harmonic_segment(const OpticsSegment &segment) {
    return segment.elements.size() == 1 && std::holds_alternative<element::HarmonicOscillator>(segment.elements[0]);
}

double harmonic_duration(const OpticsSegment &segment) {
    return std::get<element::HarmonicOscillator>(segment.elements.at(0)).duration;
}

LctMatrixd element_matrix(const OpticsElement &e, const PhotonConstantsd &consts) {
    double lambda = consts.wavelength;
    return std::visit(
        overloaded{
            [&](const element::FreeSpace &v) { return lct_free_space(v.length, lambda); },
            [&](const element::Lens &v) { return lct_lens(v.focal, lambda); },
            [&](const element::Frft &v) { return lct_frft(v.order * pi / 2); },
            [&](const element::Scale &v) { return lct_scale(v.a); },
            [&](const element::Chirp &v) { return lct_chirp(v.c); },
            [&](const element::Abcd &v) { return LctMatrixd::from_entries(v.a, v.b, v.c, v.d); },
            [&](const element::HarmonicOscillator &v) { return lct_harmonic_oscillator(v.duration, consts); },
        },
        e);
}

LctMatrixd segment_matrix(const OpticsSegment &segment, const PhotonConstantsd &consts) {
    LctMatrixd m = LctMatrixd::identity();
    for (const auto &e : segment.elements) {
        m = compose(element_matrix(e, consts), m);
    }
    return m;
}

void canonicalize(SetupConfig &config) {
    for (auto &plane : config.planes) {
        std::stable_sort(plane.slits.begin(), plane.slits.end(),
                         [](const Slit &l, const Slit &r) { return l.center < r.center; });
    }
}

std::uint64_t path_count(const SetupConfig &config) {
    std::uint64_t n = 1;
    for (const auto &plane : config.planes) {
        std::uint64_t k = plane.slits.size();
        if (k != 0 && n > std::numeric_limits<std::uint64_t>::max() / k) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        n *= k;
    }
    return n;
}

ValidationReport validate(const SetupConfig &config) {
    ValidationReport report;
    auto fail = [&](const std::string &s) { report.violations.push_back(s); };

    if (!(config.wavelength > 0) || !std::isfinite(config.wavelength)) {
        fail("wavelength_m: must be positive and finite");
    }
    const Source &src = config.source;
    if (!(src.width > 0) || !std::isfinite(src.width)) {
        fail("source.width_m: must be positive and finite");
    }
    if (src.kind == SourceKind::hermite_gaussian && (src.order < 0 || src.order > 30)) {
        fail("source.order: must lie in [0, 30]");
    }
    if (src.kind == SourceKind::gaussian && src.order != 0) {
        fail("source.order: Gaussian source takes no order");
    }
    if (config.planes.empty()) {
        fail("planes: at least one slit plane is required");
    }
    for (std::size_t j = 0; j < config.planes.size(); j++) {
        const auto &slits = config.planes[j].slits;
        if (slits.empty()) {
            fail("planes[" + std::to_string(j) + "]: no slits");
        }
        for (std::size_t i = 0; i < slits.size(); i++) {
            std::string where = "planes[" + std::to_string(j) + "].slits[" + std::to_string(i) + "]";
            if (!(slits[i].width > 0) || !std::isfinite(slits[i].width)) {
                fail(where + ".width_m: must be positive and finite");
            }
            if (!std::isfinite(slits[i].center)) {
                fail(where + ".center_m: must be finite");
            }
            if (i > 0 && slits[i].center < slits[i - 1].center) {
                fail(where + ".center_m: slit centers must be non-decreasing");
            }
        }
    }
    if (config.optics.size() != config.planes.size() + 1) {
        std::ostringstream ss;
        ss << "optics: expected " << config.planes.size() + 1 << " segments (one per gap), found "
           << config.optics.size();
        fail(ss.str());
    }
    if (config.wavelength > 0) {
        PhotonConstantsd consts = config.constants();
        for (std::size_t s = 0; s < config.optics.size(); s++) {
            const auto &seg = config.optics[s];
            std::string where = "optics[" + std::to_string(s) + "]";
            if (seg.elements.empty()) {
                fail(where + ": empty segment");
                continue;
            }
            bool elements_ok = true;
            for (std::size_t e = 0; e < seg.elements.size(); e++) {
                try {
                    element_matrix(seg.elements[e], consts);
                } catch (const Error &err) {
                    fail(where + ".elements[" + std::to_string(e) + "]: " + err.what());
                    elements_ok = false;
                }
            }
            if (!elements_ok) {
                continue;
            }
            LctMatrixd m = segment_matrix(seg, consts);
            if (m.determinant_error() > 1e-9) {
                fail(where + ": composed determinant differs from 1");
            }
            if (m.b() == 0 && !std::all_of(seg.elements.begin(), seg.elements.end(), b_free_element)) {
                fail(where + ": b = 0 but segment is not a declared scale/chirp section");
            }
            if (m.b() == 0 && m.a() == 0) {
                fail(where + ": a = b = 0 is not a valid section");
            }
        }
    }
    if (!(config.sensor.ts > 0) || !std::isfinite(config.sensor.ts)) {
        fail("sensor.ts_m: must be positive and finite");
    }
    if (config.sensor.k_max < config.sensor.k_min) {
        fail("sensor: k_max must be >= k_min");
    }
    std::uint64_t np = path_count(config);
    if (np >= config.path_cap) {
        std::ostringstream ss;
        ss << "planes: path count " << (np == std::numeric_limits<std::uint64_t>::max() ? std::string(">= 2^64") : std::to_string(np))
           << " exceeds the path cap " << config.path_cap;
        fail(ss.str());
    }
    return report;
}

std::vector<int> path_slits(const SetupConfig &config, std::uint64_t n) {
    std::uint64_t np = path_count(config);
    if (n >= np) {
        throw DomainError("path index " + std::to_string(n) + " out of range [0, " + std::to_string(np) + ")");
    }
    std::vector<int> digits(config.planes.size());
    for (std::size_t j = config.planes.size(); j-- > 0;) {
        std::uint64_t k = config.planes[j].slits.size();
        digits[j] = static_cast<int>(n % k);
        n /= k;
    }
    return digits;
}

std::uint64_t path_index(const SetupConfig &config, const std::vector<int> &slits) {
    if (slits.size() != config.planes.size()) {
        throw DomainError("slit index list length differs from plane count");
    }
    std::uint64_t n = 0;
    for (std::size_t j = 0; j < slits.size(); j++) {
        int k = static_cast<int>(config.planes[j].slits.size());
        if (slits[j] < 0 || slits[j] >= k) {
            throw DomainError("slit index out of range on plane " + std::to_string(j));
        }
        n = n * k + slits[j];
    }
    return n;
}

std::vector<LctMatrixd> segment_matrices(const SetupConfig &config) {
    PhotonConstantsd consts = config.constants();
    std::vector<LctMatrixd> out;
    for (std::size_t s = 0; s < config.optics.size(); s++) {
        LctMatrixd m = segment_matrix(config.optics[s], consts);
        if (m.determinant_error() > 1e-9) {
            throw ValidationError("optics[" + std::to_string(s) + "]: composed determinant differs from 1");
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace mpd
