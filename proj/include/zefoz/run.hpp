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

#ifndef ZEFOZ_RUN_HPP_
#define ZEFOZ_RUN_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "zefoz/config.hpp"

namespace zefoz {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitComputation = 3;

std::string_view version();

struct RunOptions {
  // Relative paths in the config (ion_file, output, spectrum.table_output)
  // resolve against this directory.
  std::filesystem::path base_dir = ".";
  // Replaces the config's `output` when set; used as given.
  std::optional<std::filesystem::path> output_override;
};

/// Ion model of a run: the ion file with inline overrides applied.
IonModel resolve_ion_model(const RunConfig& config, const std::filesystem::path& base_dir);

/// Dispatches the configured command. Tables go to the output file (or `out`
/// for "-"); diagnostics go to `err`. Returns the process exit code.
int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Reads and parses a config file, then runs it; base_dir is the config's
/// directory.
int run_file(const std::filesystem::path& config_path,
             const std::optional<std::filesystem::path>& output_override, std::ostream& out,
             std::ostream& err);

}  // namespace zefoz

#endif
