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

#include <numbers>

#include "mpdsim/errors.hpp"

namespace mpd {

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;

/// Wavelength together with the photon's equivalent mass and angular frequency.
template <typename Scalar>
struct PhotonConstants {
    Scalar wavelength;
    Scalar mass;
    Scalar omega;

    static PhotonConstants from_wavelength(Scalar lambda) {
        if (!(lambda > 0)) {
            throw DomainError("wavelength must be positive");
        }
        const Scalar two_pi = Scalar(2) * Scalar(pi);
        return {lambda, two_pi * Scalar(hbar) / (lambda * Scalar(speed_of_light)),
                two_pi * Scalar(speed_of_light) / lambda};
    }
};

using PhotonConstantsd = PhotonConstants<double>;

}  // namespace mpd
