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

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qaoa/problems.hpp"

namespace qaoa {

// {"type":"maxcut","n":int,"edges":[[u,v,w],...]}
// {"type":"po","n":int,"mu":[...],"sigma":[[...],...],"q":real,"K":int}
nlohmann::json instance_to_json(const ProblemInstance& inst);
/// Throws SchemaError naming the offending field.
ProblemInstance instance_from_json(const nlohmann::json& j);

void write_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance read_instance(const std::filesystem::path& path);

}  // namespace qaoa
