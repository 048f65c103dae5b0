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

#ifndef ZEFOZ_KEY_VALUE_HPP
#define ZEFOZ_KEY_VALUE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "zefoz/error.hpp"

namespace zefoz {

// Flat `key = value` text with `#` comments and `[section]` headers.
struct KeyValueEntry {
  std::string section;  // empty before the first header
  std::string key;
  std::string value;
  int line = 0;
};

/// Malformed lines are appended to `diagnostics`; parsing continues.
std::vector<KeyValueEntry> parse_key_values(std::string_view text,
                                            std::vector<Diagnostic>& diagnostics);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_exact(double v);
/// Whole-string double parse (no locale); false on trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, int& out);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);

}  // namespace zefoz

#endif
