// Copyright 2026 The qaoa-protocol Authors
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
#include <string>

namespace qaoa {

inline constexpr const char* kWorkersEnvVar = "QAOA_WORKERS";

/// Worker count from QAOA_WORKERS, else std::thread::hardware_concurrency().
int default_worker_count();

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index is
/// visited exactly once; callers write results into slot i so output order is
/// independent of scheduling. The first exception thrown by any call is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_double(double v);

}  // namespace qaoa
