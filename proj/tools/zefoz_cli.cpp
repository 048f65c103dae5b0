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

// Command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "zefoz/zefoz_c.h"

int main(int argc, char** argv) {
  CLI::App app{"ZEFOZ transition and EIT modelling for rare-earth ions"};
  std::string config_path;
  std::string out_path;
  app.add_option("--config", config_path, "configuration file (key = value)")->required();
  app.add_option("--out", out_path, "output file, overrides the config's `output`");
  app.set_version_flag("--version", std::string(zf_version()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return zf_run_file(config_path.c_str(), out_path.empty() ? nullptr : out_path.c_str());
}
