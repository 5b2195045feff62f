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

#include <cstddef>
#include <functional>

namespace mpd {

/// Worker count: explicit request if positive, else MPDSIM_THREADS, else the
/// hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Runs body(i) for i in [0, n) over `threads` workers with static
/// contiguous chunks. Callers write results by index, so output never
/// depends on the worker count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &body);

}  // namespace mpd
