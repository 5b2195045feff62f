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
#include <map>
#include <string>
#include <string_view>

namespace mpd {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

/// Hex digest over the canonical config text, the command name and the
/// parameter overrides in key order. Thread count is deliberately not an input.
std::string run_digest(const std::string &canonical_config, const std::string &command,
                       const std::map<std::string, std::string> &overrides);

inline constexpr const char *tool_version = "1.0.0";

}  // namespace mpd
