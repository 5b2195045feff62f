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

#include "mpdsim/path_engine.hpp"

#include <algorithm>

#include "mpdsim/parallel.hpp"
#include "mpdsim/summation.hpp"

namespace mpd {

double PathState::envelope_center() const {
    if (kind == SourceKind::gaussian) {
        return -gauss.C / (2 * gauss.A);
    }
    return -hg.v.real() / (2 * hg.u.real());
}

double PathState::envelope_width() const {
    if (kind == SourceKind::gaussian) {
        return 1 / (2 * std::sqrt(-gauss.A));
    }
    // Gaussian envelope widened by the Hermite factor's spread.
    double w = 1 / (2 * std::sqrt(-hg.u.real()));
    double hw = std::sqrt(2.0 * hg.order + 1) / std::max(std::abs(hg.g), 1e-300);
    return std::max(w, std::min(hw, w * std::sqrt(2.0 * hg.order + 1) * 4));
}

double PathState::max_wavenumber(double lo, double hi) const {
    if (kind == SourceKind::gaussian) {
        return std::max(std::abs(2 * gauss.B * lo + gauss.D), std::abs(2 * gauss.B * hi + gauss.D));
    }
    double k = std::max(std::abs(2 * hg.u.imag() * lo + hg.v.imag()), std::abs(2 * hg.u.imag() * hi + hg.v.imag()));
    return k + std::abs(hg.g) * std::sqrt(2.0 * hg.order + 1) * 1.5;
}

PathEngine::PathEngine(SetupConfig config) : config_(std::move(config)) {
    ValidationReport report = validate(config_);
    if (!report.ok()) {
        std::string msg = "invalid configuration:";
        for (const auto &v : report.violations) {
            msg += "\n  " + v;
        }
        throw ValidationError(msg);
    }
    consts_ = config_.constants();
    matrices_ = segment_matrices(config_);
}

std::uint64_t PathEngine::prefix_count(int plane) const {
    std::uint64_t n = 1;
    for (int i = 0; i + 1 < plane; i++) {
        n *= config_.planes[i].slits.size();
    }
    return n;
}

PathState PathEngine::state_at(int plane, const std::vector<int> &slits) const {
    if (plane < 0 || plane > plane_count()) {
        throw DomainError("plane index out of range");
    }
    if (static_cast<int>(slits.size()) < std::max(plane - 1, 0)) {
        throw DomainError("slit prefix shorter than the plane index requires");
    }
    const Source &src = config_.source;
    PathState st;
    st.kind = src.kind;
    if (plane == 0) {
        if (src.kind == SourceKind::gaussian) {
            st.gauss = gaussian_source_state(src.width);
        } else {
            st.hg = hg_source_state(src.width, src.order);
        }
        return st;
    }
    const OpticsSegment &seg0 = config_.optics[0];
    if (src.kind == SourceKind::gaussian) {
        st.gauss = is_harmonic_segment(seg0) ? init_gaussian_ho(src.width, harmonic_duration(seg0), consts_)
                                             : init_gaussian(src.width, matrices_[0]);
    } else {
        st.hg = init_hg(src.width, src.order, matrices_[0]);
    }
    for (int j = 1; j < plane; j++) {
        const Slit &slit = config_.planes[j - 1].slits.at(slits[j - 1]);
        const LctMatrixd &m = matrices_[j];
        const OpticsSegment &seg = config_.optics[j];
        if (src.kind == SourceKind::gaussian) {
            if (is_harmonic_segment(seg)) {
                diffract_step_gaussian_ho(st.gauss, slit, harmonic_duration(seg), consts_);
            } else if (m.b() == 0) {
                apply_slit_mask(st.gauss, slit);
                diffract_degenerate(st.gauss, m);
            } else {
                diffract_step_gaussian(st.gauss, slit, m);
            }
        } else {
            if (m.b() == 0) {
                apply_slit_mask(st.hg, slit);
                diffract_degenerate(st.hg, m);
            } else {
                diffract_step_hg(st.hg, slit, m);
            }
        }
    }
    return st;
}

PathState PathEngine::state_at(int plane, std::uint64_t prefix_index) const {
    int depth = std::max(plane - 1, 0);
    std::vector<int> slits(depth);
    for (int j = depth; j-- > 0;) {
        std::uint64_t k = config_.planes[j].slits.size();
        slits[j] = static_cast<int>(prefix_index % k);
        prefix_index /= k;
    }
    return state_at(plane, slits);
}

std::vector<PathState> PathEngine::states_at(int plane, int threads) const {
    std::uint64_t n = prefix_count(plane);
    std::vector<PathState> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = state_at(plane, static_cast<std::uint64_t>(i)); });
    return out;
}

std::vector<PathState> PathEngine::sensor_states(const std::vector<std::uint64_t> &paths, int threads) const {
    if (paths.empty()) {
        return states_at(plane_count(), threads);
    }
    std::uint64_t np = path_count(config_);
    for (auto n : paths) {
        if (n >= np) {
            throw DomainError("path index " + std::to_string(n) + " out of range");
        }
    }
    std::vector<PathState> out(paths.size());
    parallel_for(paths.size(), threads, [&](std::size_t i) { out[i] = state_at(plane_count(), paths[i]); });
    return out;
}

std::vector<Complex<double>> superpose(const std::vector<PathState> &states, const std::vector<double> &xs,
                                       int threads) {
    std::vector<Complex<double>> out(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) {
        CompensatedSum<Complex<double>> sum;
        for (const auto &st : states) {
            sum.add(st(xs[i]));
        }
        out[i] = sum.value();
    });
    return out;
}

SensorSamples sample_sensor(const PathEngine &engine, const std::vector<PathState> &sensor_states, int threads) {
    const Sensor &sensor = engine.config().sensor;
    SensorSamples s;
    s.ts = sensor.ts;
    s.k_min = sensor.k_min;
    s.k_max = sensor.k_max;
    std::vector<double> xs;
    for (std::int64_t k = sensor.k_min; k <= sensor.k_max; k++) {
        xs.push_back(static_cast<double>(k) * sensor.ts);
    }
    s.amplitude = superpose(sensor_states, xs, threads);
    for (const auto &a : s.amplitude) {
        s.intensity.push_back(std::norm(a));
    }
    return s;
}

Complex<double> neuron_output(const PathEngine &engine, const std::vector<Slit> &output_slits, double x,
                              int threads) {
    double mask = 0;
    for (const auto &s : output_slits) {
        if (!(s.width > 0)) {
            throw DomainError("output slit width must be positive");
        }
        double d = x - s.center;
        mask += std::exp(-d * d / (2 * s.width * s.width));
    }
    auto states = engine.sensor_states({}, threads);
    return mask * superpose(states, {x}, 1)[0];
}

}  // namespace mpd
