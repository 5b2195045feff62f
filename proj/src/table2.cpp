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

#include "mpdsim/quadratic_form.hpp"

namespace mpd {

Table2Result evaluate_table2(const Table2Inputs &in) {
    using C = std::complex<double>;
    const C I(0, 1);
    const double p = pi;
    const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2;
    const double B1 = in.beta1 * in.beta1, B2 = in.beta2 * in.beta2;  // beta^2
    const double B14 = B1 * B1, B24 = B2 * B2;                         // beta^4
    const double s2 = in.sigma0 * in.sigma0, s4 = s2 * s2;
    const double a01 = in.a01, b01 = in.b01, d01 = in.d01;
    const double a12 = in.a12, b12 = in.b12, d12 = in.d12;
    const double a23 = in.a23, b23 = in.b23, d23 = in.d23;
    auto sq = [](auto v) { return v * v; };

    std::vector<C> q(31), pol(15);
    q[11] = a12 * b01 + b12 * d01;
    q[12] = a23 * b12 + b23 * d12;
    q[7] = -b01 * b23 + a12 * b01 * q[12] + b12 * d01 * q[12];
    q[19] = a01 * a12 * b01 - b12 + a01 * b12 * d01;
    q[10] = sq(b12 * q[12] - a01 * q[7]);
    q[13] = sq(b12) * sq(d01) * B1 + 2.0 * a12 * b01 * b12 * d01 * B1 + (sq(a12) * B1 + B2) * sq(b01);
    q[14] = 2.0 * B1 * p2 * B2 + sq(b12);
    q[15] = a01 * b01 * b12 - 2.0 * I * B1 * q[19] * p;
    q[23] = b23 * q[11] * B1 + a23 * B2 * b01 * b12 + B2 * b01 * b23 * d12;
    q[16] = -4.0 * I * B1 * q[7] * p2 * B2 + b01 * sq(b12) * b23 * I + 2.0 * b12 * p * q[23];
    q[17] = a01 * q[23] - B1 * b12 * b23;
    q[18] = 2.0 * p * q[19] * B1 + a01 * b01 * b12 * I;
    q[20] = sq(b01) + 4.0 * p2 * s2 * (B1 + sq(a01) * s2);
    q[24] = sq(a12) * sq(b01) * B14 + sq(b12) * sq(d01) * B14 + 2.0 * a12 * b01 * b12 * d01 * B14 +
            2.0 * B2 * sq(b01) * B1 + B24 * sq(b01) * sq(d12);
    q[8] = sq(a23) * sq(b01) * sq(b12) * B24 + 2.0 * a23 * sq(b01) * b12 * b23 * d12 * B24 + sq(b23) * q[24];
    q[9] = 4.0 * p2 * (B1 * sq(b23) + B2 * sq(q[12])) * B2 + sq(b12) * sq(b23);
    q[21] = sq(b12) * sq(b23) * B14 - 2.0 * a01 * b12 * sq(b23) * q[11] * B14 + sq(a01) * q[8];
    q[22] = 16.0 * B14 * p4 * q[10] * B24 + sq(a01) * sq(b01) * sq(sq(b12)) * sq(b23) + 4.0 * sq(b12) * p2 * q[21];
    q[25] = b23 * d12 * d23 + b12 * (a23 * d23 - 1);
    q[26] = b23 * d12 * d23 - b12;
    q[27] = b12 - 2 * b23 * d12 * d23;
    q[28] = q[13] * sq(a01) - 2.0 * B1 * b12 * q[11] * a01 + B1 * sq(b12);
    q[30] = 4.0 * p2 * q[19] * (a01 * q[7] - b12 * q[12]) * B14 + sq(a01) * sq(b01) * sq(b12) * q[12];
    q[29] = 4.0 * sq(b01) * p2 * q[11] * q[7] * B14 + sq(sq(b01)) * sq(b12) * q[12] +
            4.0 * p2 * s2 * (2.0 * B1 * sq(b01) * q[12] * sq(b12) + q[30] * s2);
    q[3] = b23 * d23 * sq(q[11]) * B14 + 2.0 * B2 * sq(b01) * b23 * d23 * B1 + B24 * sq(b01) * d12 * q[26];
    q[2] = sq(a23) * sq(b01) * sq(b12) * d23 * B24 - a23 * sq(b01) * b12 * q[27] * B24 + b23 * q[3];
    q[1] = sq(b12) * sq(b23) * d23 * B14 - 2.0 * a01 * b12 * sq(b23) * q[11] * d23 * B14 + sq(a01) * q[2];
    q[4] = b12 * (b12 - q[12] * d23) - a01 * b12 * q[11] + a01 * d23 * q[7];
    q[5] = -b01 * b23 * d23 + a12 * b01 * q[25] + b12 * d01 * q[25];
    q[6] = (B1 * sq(b23) + B2 * sq(q[12])) * d23 - B2 * b12 * q[12];

    const C shared_q7 = a01 * q[7] - b12 * q[12];
    const C quartic = sq(b12) * sq(sq(b01)) + 4.0 * B1 * p2 * q[13] * sq(b01) +
                      4.0 * p2 * s2 * (2.0 * B1 * q[14] * sq(b01) + (4.0 * p2 * q[28] * B1 + sq(a01) * sq(b01) * sq(b12)) * s2);

    pol[1] = p * (-2.0 * I * b01 * q[7] * p * B2 - 2.0 * p * (2.0 * p * shared_q7 * B2 + b12 * b23 * I * q[19]) * s2 +
                  b01 * b12 * b23 * q[11]);
    pol[2] = 2.0 * p * (4.0 * B1 * p2 * shared_q7 * B2 - a01 * b01 * sq(b12) * b23 + 2.0 * b12 * I * p * q[17]) * s2 +
             b01 * (4.0 * B1 * I * p2 * q[7] * B2 + b01 * sq(b12) * b23 * (-I) - 2.0 * b12 * q[23] * p);
    pol[3] = -2.0 * b01 * b12 * b23 * p * (2.0 * a01 * p * s2 + b01 * I);
    pol[4] = p * (b01 * (b01 * b12 * q[12] - 2.0 * I * B1 * q[7] * p) -
                  2.0 * p * (2.0 * p * shared_q7 * B1 + a01 * b01 * b12 * I * q[12]) * s2);
    pol[5] = -4.0 * B2 * sq(b01) * b12 * sq(b12) * b23 * p2 * q[20] * quartic;
    pol[6] = (4.0 * sq(b01) * p2 * sq(q[11]) * B14 + sq(sq(b01)) * sq(b12) +
              4.0 * p2 * s2 * (2.0 * B1 * sq(b01) * sq(b12) + (4.0 * p2 * sq(q[19]) * B14 + sq(a01) * sq(b01) * sq(b12)) * s2)) *
             ((16.0 * B14 * p4 * sq(q[7]) * B24 + sq(b01) * sq(sq(b12)) * sq(b23) + 4.0 * sq(b12) * p2 * q[8]) * sq(b01) +
              4.0 * p2 * s2 * (2.0 * B1 * sq(b01) * q[9] * sq(b12) + q[22] * s2));
    pol[7] = 16.0 * B1 * B24 * b01 * b12 * p4 * (4.0 * a01 * p2 * q[19] * s4 + sq(b01) * q[11]) * q[29];
    pol[10] = I * B1 * B2 * b01 * b12 * in.sigma0 * (b01 - 2.0 * I * a01 * p * s2) *
              (b01 * (b01 * b12 - 2.0 * I * B1 * q[11] * p) - 2.0 * p * q[18] * s2);
    pol[8] = -8.0 * B1 * B2 * b01 * sq(b12) * b23 * p3 * (4.0 * a01 * p2 * q[19] * s4 + sq(b01) * q[11]) * quartic;
    pol[9] = -8.0 * B24 * sq(b01) * sq(b12) * p3 * q[20] * q[29];
    pol[12] = 2.0 * B2 * sq(b12) * p2 *
              (-4.0 * B1 * q[13] * p2 * sq(b01) - 8.0 * B1 * p2 * q[14] * s2 * sq(b01) -
               4.0 * (4.0 * p4 * q[28] * B1 + sq(a01) * sq(b01) * sq(b12) * p2) * s4 - sq(sq(b01)) * sq(b12));
    pol[11] = (2.0 * a01 * p * s2 + b01 * I) * (2.0 * p * q[15] * s2 + b01 * (2.0 * p * q[11] * B1 + b01 * b12 * I)) *
              (b01 * q[16] -
               2.0 * p * (4.0 * B1 * p2 * shared_q7 * B2 - a01 * b01 * sq(b12) * b23 + 2.0 * b12 * I * p * q[17]) * s2);
    pol[13] = (16.0 * B14 * p4 * sq(q[7]) * B24 + sq(b01) * sq(sq(b12)) * sq(b23) + 4.0 * sq(b12) * p2 * q[8]) * sq(b01) +
              4.0 * p2 * s2 * (2.0 * B1 * sq(b01) * q[9] * sq(b12) + q[22] * s2);
    pol[14] = 4.0 * p3 * s2 *
                  (s2 * (sq(a01) * sq(b01) * sq(sq(b12)) * sq(b23) * d23 + 16.0 * p4 * B14 * B24 * q[4] * shared_q7 +
                         4.0 * p2 * sq(b12) * q[1]) +
                   2.0 * B1 * sq(b01) * sq(b12) * (4.0 * p2 * B2 * q[6] + sq(b12) * sq(b23) * d23)) +
              p * sq(b01) * (16.0 * p4 * B14 * B24 * q[5] * q[7] + sq(b01) * sq(sq(b12)) * sq(b23) * d23 + 4.0 * p2 * sq(b12) * q[2]);

    for (int k : {2, 6, 11, 13}) {
        if (std::abs(pol[k]) == 0 || !std::isfinite(std::abs(pol[k]))) {
            throw SingularError("Table polynomial pol_" + std::to_string(k) + " vanishes");
        }
    }

    Table2Result r;
    r.H << pol[1] / pol[2], C(0), pol[3] / (I * pol[2]), pol[4] / pol[2];
    r.h << (pol[5] + I * pol[8]) / pol[6], (pol[7] + I * pol[9]) / pol[6];
    r.upsilon = -2.0 * std::polar(1.0, 3 * p / 4) * std::sqrt(2.0) * std::pow(p, 1.25) * std::sqrt(pol[10] / pol[11]);
    r.alpha = pol[12] / pol[13] + I * pol[14] / (b23 * pol[13]);
    r.q = std::move(q);
    r.pol = std::move(pol);
    return r;
}

}  // namespace mpd
