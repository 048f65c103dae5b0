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

#ifndef ZEFOZ_ION_FILE_HPP
#define ZEFOZ_ION_FILE_HPP

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "zefoz/field_map.hpp"

namespace zefoz {

// Ion parameter file:
//
//   [ground]
//   S = 0.5
//   I = 3.5
//   g_par = 1.987
//   ...
//   [excited]
//   ...
//
// Keys missing from a section keep the SpinParams defaults. Values are
// written in shortest round-trip form, so format/parse is bit-exact.
inline constexpr std::array<std::string_view, 8> kIonKeys = {"S",      "I", "g_par", "g_perp",
                                                             "A",      "B_hf", "P", "mu_B"};

bool is_ion_key(std::string_view key);

/// Assigns one key after range checks; returns an error message or "".
std::string set_ion_key(SpinParams& params, std::string_view key, std::string_view value);
double get_ion_key(const SpinParams& params, std::string_view key);

/// Throws ConfigError listing every problem with its line number.
IonModel parse_ion_parameters(std::string_view text);
IonModel load_ion_parameters(const std::filesystem::path& path);
std::string format_ion_parameters(const IonModel& model);

}  // namespace zefoz

#endif
