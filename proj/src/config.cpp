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

#include "smimo/config.hpp"

#include <cmath>
#include <fstream>

namespace smimo {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

double power(const json& doc, const char* linear_key, const std::string& db_key, double fallback) {
  if (doc.contains(linear_key) && doc.contains(db_key)) {
    throw ConfigError(std::string("give either '") + linear_key + "' or '" + db_key + "', not both");
  }
  if (doc.contains(db_key)) return db_to_linear(get_or<double>(doc, db_key.c_str(), 0.0));
  return get_or<double>(doc, linear_key, fallback);
}

}  // namespace

void resolve_interference(RunConfig& cfg) {
  if (cfg.profile == "flat") {
    cfg.sys.interference_powers = interference_profile(InterferenceProfile::flat(cfg.I), cfg.sys.T, cfg.sys.L, cfg.sys.P);
  } else if (cfg.profile == "modulo") {
    cfg.sys.interference_powers =
        interference_profile(InterferenceProfile::modulo(cfg.delta), cfg.sys.T, cfg.sys.L, cfg.sys.P);
  } else {
    throw ConfigError("profile must be 'flat' or 'modulo', got '" + cfg.profile + "'");
  }
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  cfg.sys.R = get_or<int>(doc, "R", 300);
  cfg.sys.T = get_or<int>(doc, "T", 3);
  cfg.sys.C = get_or<int>(doc, "C", 1000);
  cfg.sys.L = get_or<int>(doc, "L", 2);
  cfg.sys.P = power(doc, "P", "P_dB", 0.1);
  cfg.sys.W = power(doc, "W", "W_dB", 1.0);
  cfg.profile = get_or<std::string>(doc, "profile", "flat");
  cfg.delta = get_or<double>(doc, "delta", 4.0);
  if (doc.contains("I_over_P")) {
    cfg.I = get_or<double>(doc, "I_over_P", 0.25) * cfg.sys.P;
  } else {
    cfg.I = power(doc, "I", "I_dB", 0.25 * cfg.sys.P);
  }
  cfg.tau_blocks = get_or<int>(doc, "tau_blocks", 1);
  cfg.seed = get_or<std::uint64_t>(doc, "seed", 1);
  cfg.t_sel = get_or<int>(doc, "t_sel", 0);

  cfg.R_values = get_or<std::vector<double>>(doc, "R_values", {});
  cfg.I_over_P_values = get_or<std::vector<double>>(doc, "I_over_P_values", {});
  cfg.deltas = get_or<std::vector<double>>(doc, "deltas", {});
  cfg.tau_values = get_or<std::vector<int>>(doc, "tau_values", {});
  cfg.L_values = get_or<std::vector<int>>(doc, "L_values", {});
  cfg.min_symbols = get_or<long long>(doc, "min_symbols", 100000);
  cfg.seeds = get_or<int>(doc, "seeds", 20);

  const json radio = doc.contains("radio") ? doc.at("radio") : json::object();
  cfg.radio.carrier_frequency = get_or<double>(radio, "carrier_frequency_GHz", 2.6) * 1e9;
  cfg.radio.delay_spread = get_or<double>(radio, "delay_spread_us", 5.0) * 1e-6;
  cfg.radio.mobile_speed = get_or<double>(radio, "speed_kmh", 350.0) / 3.6;

  if (cfg.tau_blocks < 1) throw ConfigError("tau_blocks must be at least 1");
  if (cfg.seeds < 1) throw ConfigError("seeds must be at least 1");
  if (cfg.t_sel < 0) throw ConfigError("t_sel must be non-negative");
  resolve_interference(cfg);
  cfg.sys.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["R"] = cfg.sys.R;
  j["T"] = cfg.sys.T;
  j["C"] = cfg.sys.C;
  j["L"] = cfg.sys.L;
  j["P"] = cfg.sys.P;
  j["W"] = cfg.sys.W;
  j["profile"] = cfg.profile;
  if (cfg.profile == "modulo") {
    j["delta"] = cfg.delta;
  } else {
    j["I"] = cfg.I;
  }
  j["interference_powers"] = cfg.sys.interference_powers;
  j["tau_blocks"] = cfg.tau_blocks;
  j["seed"] = cfg.seed;
  j["t_sel"] = cfg.t_sel;
  j["radio"] = {{"carrier_frequency_GHz", cfg.radio.carrier_frequency / 1e9},
                {"delay_spread_us", cfg.radio.delay_spread * 1e6},
                {"speed_kmh", cfg.radio.mobile_speed * 3.6}};
  j["R_values"] = cfg.R_values;
  j["I_over_P_values"] = cfg.I_over_P_values;
  j["deltas"] = cfg.deltas;
  j["tau_values"] = cfg.tau_values;
  j["L_values"] = cfg.L_values;
  j["min_symbols"] = cfg.min_symbols;
  j["seeds"] = cfg.seeds;
  return j;
}

}  // namespace smimo
