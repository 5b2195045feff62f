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
#include <complex>

namespace mpd {

/// Kahan-Babuska (Neumaier) compensated accumulator. Complex values are
/// compensated component-wise.
template <typename T>
class CompensatedSum {
   public:
    void add(T x) {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    T value() const {
        return sum_ + carry_;
    }

   private:
    T sum_{};
    T carry_{};
};

template <typename T>
class CompensatedSum<std::complex<T>> {
   public:
    void add(std::complex<T> x) {
        re_.add(x.real());
        im_.add(x.imag());
    }
    std::complex<T> value() const {
        return {re_.value(), im_.value()};
    }

   private:
    CompensatedSum<T> re_;
    CompensatedSum<T> im_;
};

}  // namespace mpd
