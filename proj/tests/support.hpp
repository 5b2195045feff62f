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

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpdsim/config_io.hpp"
#include "mpdsim/setup.hpp"

namespace mpd::testing {

inline std::string fixture(const std::string &name) {
    return std::string(MPDSIM_FIXTURE_DIR) + "/" + name;
}

inline SetupConfig load_fixture(const std::string &name) {
    return load_config(fixture(name));
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64 &rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Free space, or free space / lens / free space, at table-top lengths.
inline OpticsSegment random_segment(std::mt19937_64 &rng) {
    OpticsSegment s;
    if (uniform_int(rng, 0, 1) == 0) {
        s.elements.push_back(element::FreeSpace{uniform(rng, 0.02, 0.2)});
    } else {
        s.elements.push_back(element::FreeSpace{uniform(rng, 0.05, 0.2)});
        s.elements.push_back(element::Lens{uniform(rng, 0.03, 0.1)});
        s.elements.push_back(element::FreeSpace{uniform(rng, 0.02, 0.15)});
    }
    return s;
}

/// Random setup with `slit_planes` diffraction planes of 1 to `max_slits` slits.
inline SetupConfig random_setup(std::mt19937_64 &rng, int slit_planes, SourceKind kind, int max_slits = 3,
                                int max_order = 4) {
    SetupConfig c;
    c.wavelength = 650e-9;
    c.source.kind = kind;
    if (kind == SourceKind::gaussian) {
        c.source.width = uniform(rng, 15e-6, 60e-6);
    } else {
        c.source.width = uniform(rng, 100e-6, 300e-6);
        c.source.order = uniform_int(rng, 0, max_order);
    }
    for (int j = 0; j < slit_planes; j++) {
        DiffractionPlane p;
        int k = uniform_int(rng, 1, max_slits);
        for (int i = 0; i < k; i++) {
            p.slits.push_back({uniform(rng, -150e-6, 150e-6), uniform(rng, 8e-6, 30e-6)});
        }
        c.planes.push_back(p);
    }
    for (int j = 0; j <= slit_planes; j++) {
        c.optics.push_back(random_segment(rng));
    }
    c.sensor = {2e-6, -150, 150};
    canonicalize(c);
    return c;
}

/// Runs a shell command, returning its exit status and captured stdout.
inline int run_command(const std::string &cmd, std::string *out = nullptr) {
    FILE *p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) {
        return -1;
    }
    std::string text;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) {
        text.append(buf, n);
    }
    int status = pclose(p);
    if (out) {
        *out = text;
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string cli() {
    return MPDSIM_CLI_PATH;
}

inline std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace mpd::testing
