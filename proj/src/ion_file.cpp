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

#include "zefoz/ion_file.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "zefoz/error.hpp"
#include "zefoz/key_value.hpp"

namespace zefoz {

namespace {

double* field_for(SpinParams& p, std::string_view key) {
  if (key == "S") return &p.electron_spin;
  if (key == "I") return &p.nuclear_spin;
  if (key == "g_par") return &p.g_parallel;
  if (key == "g_perp") return &p.g_perp;
  if (key == "A") return &p.hyperfine_axial;
  if (key == "B_hf") return &p.hyperfine_transverse;
  if (key == "P") return &p.quadrupole;
  if (key == "mu_B") return &p.bohr_magneton;
  return nullptr;
}

}  // namespace

bool is_ion_key(std::string_view key) {
  return std::find(kIonKeys.begin(), kIonKeys.end(), key) != kIonKeys.end();
}

std::string set_ion_key(SpinParams& params, std::string_view key, std::string_view value) {
  double* slot = field_for(params, key);
  if (!slot) return "unknown ion parameter '" + std::string(key) + "'";
  double v = 0.0;
  if (!parse_double(value, v))
    return "ion parameter '" + std::string(key) + "' expects a number, got '" + std::string(value) + "'";
  if (key == "S" && (!is_half_integer_multiple(v) || v < 0.5))
    return "invalid parameter: S = " + std::string(value) + " must be a multiple of 1/2 and >= 1/2";
  if (key == "I" && (!is_half_integer_multiple(v) || v < 0.0))
    return "invalid parameter: I = " + std::string(value) + " must be a multiple of 1/2 and >= 0";
  if (key == "mu_B" && !(v > 0.0))
    return "invalid parameter: mu_B = " + std::string(value) + " must be positive";
  *slot = v;
  return {};
}

double get_ion_key(const SpinParams& params, std::string_view key) {
  double* slot = field_for(const_cast<SpinParams&>(params), key);
  if (!slot) throw InvalidParameter("unknown ion parameter '" + std::string(key) + "'");
  return *slot;
}

IonModel parse_ion_parameters(std::string_view text) {
  std::vector<Diagnostic> diagnostics;
  const auto entries = parse_key_values(text, diagnostics);
  IonModel model;
  model.ground = SpinParams{};
  model.excited = SpinParams{};
  bool seen_ground = false;
  bool seen_excited = false;
  std::vector<std::string> seen;
  for (const auto& e : entries) {
    SpinParams* target = nullptr;
    if (e.section == "ground") {
      target = &model.ground;
      seen_ground = true;
    } else if (e.section == "excited") {
      target = &model.excited;
      seen_excited = true;
    } else {
      diagnostics.push_back({e.line, "ion parameter '" + e.key + "' outside a [ground] or [excited] section"});
      continue;
    }
    const std::string id = e.section + "." + e.key;
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) {
      diagnostics.push_back({e.line, "duplicate key '" + e.key + "' in [" + e.section + "]"});
      continue;
    }
    seen.push_back(id);
    if (auto err = set_ion_key(*target, e.key, e.value); !err.empty())
      diagnostics.push_back({e.line, err});
  }
  if (!seen_ground) diagnostics.push_back({0, "ion file has no [ground] section"});
  if (!seen_excited) diagnostics.push_back({0, "ion file has no [excited] section"});
  if (!diagnostics.empty()) throw ConfigError(std::move(diagnostics));
  return model;
}

IonModel load_ion_parameters(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "cannot read ion parameter file '" + path.string() + "'"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_ion_parameters(buf.str());
  } catch (const ConfigError& e) {
    std::vector<Diagnostic> d = e.diagnostics();
    for (auto& x : d) x.message = path.string() + ": " + x.message;
    throw ConfigError(std::move(d));
  }
}

std::string format_ion_parameters(const IonModel& model) {
  std::ostringstream out;
  for (const auto& [name, params] : {std::pair{"ground", &model.ground}, std::pair{"excited", &model.excited}}) {
    out << '[' << name << "]\n";
    for (auto key : kIonKeys) out << key << " = " << format_exact(get_ion_key(*params, key)) << '\n';
  }
  return out.str();
}

}  // namespace zefoz
