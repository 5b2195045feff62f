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

#include "mpdsim/digest.hpp"

#include <cstdio>

namespace mpd {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string run_digest(const std::string &canonical_config, const std::string &command,
                       const std::map<std::string, std::string> &overrides) {
    std::uint64_t h = fnv1a64(canonical_config);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(command, h);
    for (const auto &[k, v] : overrides) {
        h = fnv1a64(std::string_view("\0", 1), h);
        h = fnv1a64(k + "=" + v, h);
    }
    h = fnv1a64(tool_version, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mpd
