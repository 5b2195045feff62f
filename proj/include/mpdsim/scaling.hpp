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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpd {

/// Path count (L-1)! m^{L-1} k^L, as log2 and, when it fits, exactly.
struct PathCount {
    double log2 = 0;
    std::optional<std::uint64_t> exact;
};
PathCount n_paths(int L, double m, double k);

/// Exponent-form parameters: s = 2^s*, r = 2^r*, m = 4 * 2^m*, k = 2^k*.
struct ScalingParams {
    int L = 1;
    double m_star = 1;
    double k_star = 0;
    double s_star = 0;
    double r_star = 0;

    double m() const;
    double k() const;
    double s() const;
    double r() const;
    double gain() const {
        return m_star + k_star - s_star - r_star;
    }
};

/// log2 of n_paths / (s r)^L.
double effective_paths_log2(const ScalingParams &p);

/// log2((L-1)!) - 2 - m* + L (2 + m* + k* - s* - r*).
double virtual_qubits(const ScalingParams &p);

struct SweepRow {
    std::string model;  // "gain" or "ratio"
    int L = 0;
    double G = 0;  // gain, or log2(r~/s) for the ratio model
    double q_path = 0;
    bool crossed_66 = false;
    bool crossed_100 = false;
};

/// q_path(L) for each gain G at fixed m*, followed by the ratio model
/// q = L log2(r~/s) for each listed ratio. The crossing flags mark the first
/// row of each series at or above 66 and 100.
std::vector<SweepRow> sweep(const std::vector<double> &gains, int L_min, int L_max, double m_star,
                            const std::vector<double> &ratios);

std::string sweep_csv(const std::vector<SweepRow> &rows);

}  // namespace mpd
