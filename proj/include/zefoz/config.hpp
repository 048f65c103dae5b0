/* Copyright 2026 The Zefoz Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ZEFOZ_CONFIG_HPP
#define ZEFOZ_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zefoz/eit.hpp"
#include "zefoz/field_map.hpp"
#include "zefoz/transitions.hpp"

namespace zefoz {

enum class Command { Levels, Diagram, Zefoz, Lambda, Spectrum, Eit, Sweep };
enum class OutputFormat { Auto, Csv, Json };

std::string_view command_name(Command c);

/// One validated run. Every option has an entry in config_keys(); the
/// defaults below are only the starting state before those defaults apply.
struct RunConfig {
  Command command = Command::Levels;
  std::string ion_file;
  std::string output = "-";
  OutputFormat format = OutputFormat::Auto;

  // Inline ion parameter overrides, key -> value, applied over the file.
  std::map<std::string, double> ground_overrides;
  std::map<std::string, double> excited_overrides;

  FieldVector field;
  Manifold manifold = Manifold::Ground;
  double optical_origin = 0.0;
  TransitionSelector pair;

  int grid_axis = 2;
  FieldAxis grid;

  FieldVector search_start;
  FieldGrid search_bounds;
  double search_tol = 0.0;
  int search_max_iterations = 0;
  DerivativeOptions derivatives;

  std::string transition_operator;
  double lambda_max_asymmetry = 0.0;
  double lambda_max_leakage_ratio = 0.0;
  double lambda_min_strength = 0.0;

  SpectrumParams spectrum;
  std::string spectrum_table_output;

  NoiseModel noise;
  std::optional<FieldVector> noise_curvatures;  // unset: from the ZEFOZ point
  LambdaParams lambda;
  CombModel comb;
  FieldVector eit_offset;  // dB from the ZEFOZ point
  FieldAxis eit_grid;

  int sweep_axis = 2;
  FieldAxis sweep;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Entry of the documented defaults table.
struct ConfigKey {
  std::string name;
  std::string default_text;  // empty for required keys
  std::string description;
  bool required = false;
  // True when the default mirrors a library struct default.
  bool module_default = true;
  std::string (*set)(RunConfig&, std::string_view) = nullptr;  // "" or error
  std::string (*get)(const RunConfig&) = nullptr;
};

const std::vector<ConfigKey>& config_keys();

/// Config with every table default applied (required keys left empty).
RunConfig default_config();

/// Config whose option values come straight from the library struct
/// defaults; used to check the table against them.
RunConfig module_default_config();

/// Throws ConfigError with every problem and its line number.
RunConfig parse_config(std::string_view text);

/// Canonical text of a config; parse_config(echo_config(c)) == c. Keys left
/// at their default carry a trailing "# default" comment.
std::string echo_config(const RunConfig& config);

}  // namespace zefoz

#endif
