/*
 * Copyright 2026 The satfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "satfl/config_json.hpp"
#include "satfl/scenario.hpp"

namespace satfl::test {

inline std::string scenario_path(const std::string& name) {
  return std::string(SATFL_SCENARIO_DIR) + "/" + name + ".json";
}

inline ScenarioConfig golden(const std::string& name) { return load_config(scenario_path(name)); }

}  // namespace satfl::test
