// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The smimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "smimo/system_model.hpp"

namespace smimo {

double db_to_linear(double db);

/// A parsed configuration document. Powers may be given linear (`P`, `W`, `I`)
/// or in dB (`P_dB`, `W_dB`, `I_dB`); everything below is linear.
struct RunConfig {
  SystemParams sys;
  std::string profile = "flat";  // flat | modulo
  double delta = 4.0;            // modulo profile
  double I = 0.0;                // flat profile
  int tau_blocks = 1;
  std::uint64_t seed = 1;
  int t_sel = 0;
  RadioParams radio;  // SI units

  // Sweeps (ber / spectrum / separability); empty means command default.
  std::vector<double> R_values;
  std::vector<double> I_over_P_values;
  std::vector<double> deltas;
  std::vector<int> tau_values;
  std::vector<int> L_values;
  long long min_symbols = 100000;
  int seeds = 20;
};

/// Throws ConfigError on unknown profile, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Fully resolved configuration (linear powers, explicit interference list).
nlohmann::json to_json(const RunConfig& cfg);

/// Recomputes sys.interference_powers from the profile fields.
void resolve_interference(RunConfig& cfg);

}  // namespace smimo
