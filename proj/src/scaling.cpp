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

#include "mpdsim/scaling.hpp"

#include <cmath>
#include <sstream>

#include "mpdsim/errors.hpp"

namespace mpd {

namespace {

double log2_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1) / std::log(2.0);
}

bool mul_fits(std::uint64_t &acc, std::uint64_t f) {
    if (f != 0 && acc > UINT64_MAX / f) {
        return false;
    }
    acc *= f;
    return true;
}

bool is_integer(double v) {
    return v >= 0 && v == std::floor(v) && v < 1e18;
}

}  // namespace

PathCount n_paths(int L, double m, double k) {
    if (L < 1) {
        throw DomainError("n_paths needs L >= 1");
    }
    if (!(m > 0) || !(k > 0)) {
        throw DomainError("n_paths needs positive m and k");
    }
    PathCount c;
    c.log2 = log2_factorial(L - 1) + (L - 1) * std::log2(m) + L * std::log2(k);
    if (is_integer(m) && is_integer(k)) {
        std::uint64_t acc = 1;
        bool ok = true;
        for (int i = 2; i < L && ok; i++) {
            ok = mul_fits(acc, static_cast<std::uint64_t>(i));
        }
        for (int i = 0; i < L - 1 && ok; i++) {
            ok = mul_fits(acc, static_cast<std::uint64_t>(m));
        }
        for (int i = 0; i < L && ok; i++) {
            ok = mul_fits(acc, static_cast<std::uint64_t>(k));
        }
        if (ok && acc < (std::uint64_t(1) << 63)) {
            c.exact = acc;
            c.log2 = std::log2(static_cast<long double>(acc));
        }
    }
    return c;
}

double ScalingParams::m() const {
    return 4 * std::exp2(m_star);
}
double ScalingParams::k() const {
    return std::exp2(k_star);
}
double ScalingParams::s() const {
    return std::exp2(s_star);
}
double ScalingParams::r() const {
    return std::exp2(r_star);
}

double effective_paths_log2(const ScalingParams &p) {
    if (p.s() < 1 || p.r() < 1) {
        throw DomainError("effective paths need s, r >= 1");
    }
    return n_paths(p.L, p.m(), p.k()).log2 - p.L * (std::log2(p.s()) + std::log2(p.r()));
}

double virtual_qubits(const ScalingParams &p) {
    if (p.L < 1) {
        throw DomainError("virtual qubits need L >= 1");
    }
    return log2_factorial(p.L - 1) - 2 - p.m_star + p.L * (2 + p.gain());
}

std::vector<SweepRow> sweep(const std::vector<double> &gains, int L_min, int L_max, double m_star,
                            const std::vector<double> &ratios) {
    if (L_min < 1 || L_max < L_min) {
        throw DomainError("sweep needs 1 <= L_min <= L_max");
    }
    std::vector<SweepRow> rows;
    auto series = [&](const std::string &model, double G, auto q_of) {
        bool seen66 = false, seen100 = false;
        for (int L = L_min; L <= L_max; L++) {
            SweepRow r{model, L, G, q_of(L), false, false};
            if (!seen66 && r.q_path >= 66) {
                r.crossed_66 = seen66 = true;
            }
            if (!seen100 && r.q_path >= 100) {
                r.crossed_100 = seen100 = true;
            }
            rows.push_back(r);
        }
    };
    for (double G : gains) {
        series("gain", G, [&](int L) {
            ScalingParams p;
            p.L = L;
            p.m_star = m_star;
            p.k_star = G;  // only G enters q_path once m* is fixed
            p.s_star = m_star;
            return virtual_qubits(p);
        });
    }
    for (double ratio : ratios) {
        if (!(ratio > 0)) {
            throw DomainError("sweep ratio r~/s must be positive");
        }
        double g = std::log2(ratio);
        series("ratio", g, [&](int L) { return L * g; });
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream os;
    os.precision(17);
    os << "model,L,G,q_path,crossed_66,crossed_100\n";
    for (const auto &r : rows) {
        os << r.model << ',' << r.L << ',' << r.G << ',' << r.q_path << ',' << int(r.crossed_66) << ','
           << int(r.crossed_100) << '\n';
    }
    return os.str();
}

}  // namespace mpd
