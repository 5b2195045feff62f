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

#include <string>

#include "json.hpp"
#include "mpdsim/setup.hpp"

namespace mpd {

/// Parses a setup document. Structural problems raise ValidationError naming
/// the offending key; physical checks are left to validate().
SetupConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const SetupConfig &config);

SetupConfig load_config(const std::string &path);
void save_config(const SetupConfig &config, const std::string &path);

/// Serialized form used for digests and echo files: sorted keys, shortest
/// round-trip doubles.
std::string canonical_text(const nlohmann::json &doc);

}  // namespace mpd
