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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "zefoz/config.hpp"
#include "zefoz/error.hpp"
#include "zefoz/ion_file.hpp"
#include "zefoz/key_value.hpp"
#include "zefoz/run.hpp"
#include "zefoz/table.hpp"

using namespace zefoz;
namespace fs = std::filesystem;

namespace {

const fs::path kData = ZEFOZ_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zefoz_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string minimal(const std::string& command, const std::string& extra = "") {
  const bool own_field = extra.rfind("field =", 0) == 0 || extra.find("\nfield =") != std::string::npos;
  return "command = " + command + "\nion_file = " + (kData / "nd_ylf.ion").string() + "\n" +
         (own_field ? "" : "field = 0 0 63.6\n") + extra;
}

// Runs a config text; returns exit code, stdout and stderr.
struct Ran {
  int code;
  std::string out;
  std::string err;
};

Ran run_text(const std::string& text, std::optional<fs::path> out_path = std::nullopt) {
  std::ostringstream out, err;
  RunOptions opt;
  opt.base_dir = kData;
  opt.output_override = out_path;
  const int code = run(parse_config(text), opt, out, err);
  return {code, out.str(), err.str()};
}

// Data rows of a CSV (comment lines dropped, header first).
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<double> column(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
  std::size_t c = 0;
  while (rows[0][c] != name) ++c;
  std::vector<double> v;
  for (std::size_t r = 1; r < rows.size(); ++r) v.push_back(std::stod(rows[r][c]));
  return v;
}

std::vector<Diagnostic> diagnostics_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

}  // namespace

TEST_CASE("key-value primitives") {
  double d;
  CHECK(parse_double("  -1.5e3 ", d));
  CHECK(d == -1500.0);
  CHECK_FALSE(parse_double("1.5x", d));
  CHECK_FALSE(parse_double("nan", d));
  int i;
  CHECK(parse_int("17", i));
  CHECK_FALSE(parse_int("1.5", i));
  auto g = oracle::rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    const double v = u(g) * std::pow(10.0, t % 40 - 20);
    REQUIRE(parse_double(format_exact(v), d));
    CHECK(d == v);
  }
}

TEST_CASE("ion parameter files round-trip bit-exactly") {
  const IonModel m = load_ion_parameters(kData / "nd_ylf.ion");
  CHECK(m.ground == nd_ylf_ground());
  CHECK(m.excited == nd_ylf_excited());
  auto g = oracle::rng(2);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (int t = 0; t < 50; ++t) {
    IonModel r;
    r.ground.hyperfine_axial = u(g) / 3.0;
    r.ground.g_perp = u(g) / 7.0;
    r.excited.quadrupole = u(g) / 11.0;
    r.excited.bohr_magneton = std::abs(u(g)) + 0.1;
    const IonModel back = parse_ion_parameters(format_ion_parameters(r));
    CHECK(back.ground == r.ground);
    CHECK(back.excited == r.excited);
  }
}

TEST_CASE("ion file errors name their line") {
  const std::string text = "[ground]\nS = 0.3\n[excited]\nS = 0.5\n";
  try {
    parse_ion_parameters(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    CHECK(e.diagnostics()[0].line == 2);
    CHECK(e.diagnostics()[0].message.find("invalid parameter") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_ion_parameters("[ground]\nS = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(load_ion_parameters(kData / "missing.ion"), ConfigError);
}

TEST_CASE("minimal config applies and echoes every default") {
  const RunConfig c = parse_config(minimal("levels"));
  CHECK(c.command == Command::Levels);
  CHECK(c.field == FieldVector{0, 0, 63.6});
  CHECK(c.derivatives == DerivativeOptions{});
  CHECK(c.lambda == LambdaParams{});
  const std::string echo = echo_config(c);
  for (const auto& k : config_keys()) {
    CHECK(echo.find(k.name + " = ") != std::string::npos);
    if (!k.required && k.name != "field") CHECK(echo.find(k.name + " = " + k.default_text + "  # default") != std::string::npos);
  }
}

TEST_CASE("config defaults mirror the module defaults") {
  const RunConfig table = default_config();
  const RunConfig module = module_default_config();
  for (const auto& k : config_keys()) {
    if (!k.module_default) continue;
    CAPTURE(k.name);
    CHECK(k.get(module) == k.default_text);
    CHECK(k.get(table) == k.get(module));
  }
}

TEST_CASE("config errors are all reported with line numbers") {
  const auto d = diagnostics_of(
      "command = levels\n"
      "bogus = 1\n"
      "eit.rabi = fast\n"
      "pair.i = 2.5\n"
      "[ground]\n"
      "S = 0.3\n"
      "[weird]\n"
      "x = 1\n"
      "no equals sign\n");
  REQUIRE(d.size() >= 7);
  auto has = [&](int line, const std::string& text) {
    for (const auto& x : d)
      if (x.line == line && x.message.find(text) != std::string::npos) return true;
    return false;
  };
  CHECK(has(2, "unknown key 'bogus'"));
  CHECK(has(3, "expected a number"));
  CHECK(has(4, "expected an integer"));
  CHECK(has(6, "invalid parameter"));
  CHECK(has(8, "unknown section"));
  CHECK(has(9, ""));
  CHECK(has(0, "missing required key 'ion_file'"));
  CHECK_FALSE(diagnostics_of("command = levels\nion_file = a\ncommand = eit\n").empty());
  CHECK(has(0, "ion_file"));
}

TEST_CASE("range checks") {
  CHECK_FALSE(diagnostics_of(minimal("eit", "eit.gamma_ge = 0\n")).empty());
  CHECK_FALSE(diagnostics_of(minimal("eit", "noise.deltaB = 1 -1 1\n")).empty());
  CHECK_FALSE(diagnostics_of(minimal("eit", "grid.range = 10 0 5\n")).empty());
  CHECK_FALSE(diagnostics_of(minimal("eit", "lambda.max_asymmetry = 2\n")).empty());
  CHECK_FALSE(diagnostics_of(minimal("eit", "command = nothing\n")).empty());
  CHECK(diagnostics_of(minimal("eit", "comb.spacing = 2.8\n")).empty());
}

TEST_CASE("echo round trip") {
  std::vector<std::string> texts{
      minimal("levels"),
      minimal("eit", "comb.spacing = 2.8\nnoise.curvatures = -50 -50 180\neit.dB = 0 0.25 7\n"
                     "[ground]\nA = -600.5\n[excited]\ng_perp = 0.1\n"),
      minimal("spectrum", "spectrum.profile = lorentzian\nspectrum.table_output = t.csv\nformat = json\n"
                          "eit.broadening = lorentzian\neit.inhom_method = gauss_hermite\n"),
      minimal("zefoz", "search.x = -5 5 11\nsearch.tol = 3.3e-7\nderiv.richardson = 2\npair.manifold = optical\n"
                       "transition.operator = splus\ncomb.weights = flat\nground.P = 1.25\n")};
  auto g = oracle::rng(4);
  std::uniform_real_distribution<double> u(0.001, 10.0);
  for (int t = 0; t < 20; ++t) {
    std::ostringstream s;
    s << minimal("sweep") << "noise.gamma0 = " << format_exact(u(g)) << "\neit.rabi = " << format_exact(u(g))
      << "\nspectrum.temperature = " << format_exact(u(g)) << "\nsweep.range = " << format_exact(u(g))
      << " 20 " << (1 + t) << "\n";
    texts.push_back(s.str());
  }
  for (const auto& text : texts) {
    const RunConfig a = parse_config(text);
    const RunConfig b = parse_config(echo_config(a));
    CHECK(a == b);
    CHECK(echo_config(b) == echo_config(a));
  }
}

TEST_CASE("write_table") {
  Table t{{{"x"}, {"y"}, {"z"}, {"n", ColumnKind::Integer}, {"s", ColumnKind::Text}}, {}};
  SUBCASE("empty row set gives a header-only file") {
    std::ostringstream out;
    write_table(out, t, TableFormat::Csv);
    CHECK(out.str() == "x,y,z,n,s\n");
  }
  SUBCASE("golden bytes") {
    t.rows.push_back({1.0, 1.0 / 3.0, -2.5e-10, std::int64_t(42), std::string("a,b")});
    t.rows.push_back({123456789.123, 1e21, NAN, std::int64_t(-7), std::string("plain")});
    std::ostringstream out;
    write_table(out, t, TableFormat::Csv, {"zefoz 1.0.0"});
    CHECK(out.str() == slurp(kData / "golden_table.csv"));
    std::ostringstream js;
    write_table(js, t, TableFormat::JsonRecords, {"zefoz 1.0.0"});
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["records"].size() == t.rows.size());
    CHECK(doc["records"][0]["s"] == "a,b");
    CHECK(doc["records"][1]["z"].is_null());
  }
  SUBCASE("schema violations") {
    t.rows.push_back({1.0, 2.0});
    std::ostringstream out;
    CHECK_THROWS_AS(write_table(out, t, TableFormat::Csv), InvalidParameter);
  }
  SUBCASE("I/O errors name the path") {
    try {
      write_table(fs::path("/nonexistent/dir/out.csv"), t, TableFormat::Csv);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
  }
}

TEST_CASE("run: zefoz finds the Nd:YLF clock point") {
  const auto r = run_text(minimal("zefoz"));
  CHECK(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["records"].size() >= 1);
  CHECK(doc["records"][0]["Bz_mT"].get<double>() == doctest::Approx(63.6).epsilon(0.01));
  CHECK(doc["records"][0]["omega0_MHz"].get<double>() == doctest::Approx(2087).epsilon(0.005));
  CHECK(doc["records"][0]["hessian_signature"] == "-,-,+");
  CHECK(doc["provenance"][0] == "zefoz " + std::string(version()));
}

TEST_CASE("run: levels at zero field") {
  const auto r = run_text(minimal("levels", "field = 0 0 0\n"));
  CHECK(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  CHECK(rows[0] == std::vector<std::string>{"Bx_mT", "By_mT", "Bz_mT", "level", "energy_MHz"});
  const auto e = column(rows, "energy_MHz");
  REQUIRE(e.size() == 16);
  // Doublets (+M, -M) and the two M = 0 singlets; CSV keeps 9 digits.
  int doublets = 0;
  for (int k = 1; k < 16; ++k)
    if (std::abs(e[k] - e[k - 1]) <= 1e-6 * std::max(1.0, std::abs(e[k]))) ++doublets;
  CHECK(doublets == 7);
  const auto levels = solve_levels(nd_ylf_ground(), {});
  int exact = 0;
  for (int k = 1; k < 16; ++k) exact += levels.energies[k] - levels.energies[k - 1] < 1e-6 ? 1 : 0;
  CHECK(exact == 7);
  CHECK(r.out.find("# [ion]") != std::string::npos);
  CHECK(r.out.find("# [config]") != std::string::npos);
}

TEST_CASE("run: eit with defaults has nine transmission maxima") {
  const auto r = run_text(minimal("eit"));
  CHECK(r.code == kExitOk);
  const auto rows = csv_rows(r.out);
  CHECK(rows[0] == std::vector<std::string>{"detuning_MHz", "alpha_off", "alpha_on", "transmission"});
  CHECK(local_maxima(column(rows, "transmission")).size() == 9);
}

TEST_CASE("run: comb.spacing propagates to the profile") {
  const auto r = run_text(minimal("eit", "comb.spacing = 2.8\n"));
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("# comb_spacing_MHz = 2.8\n") != std::string::npos);
  const auto rows = csv_rows(r.out);
  const auto x = column(rows, "detuning_MHz");
  const auto peaks = local_maxima(column(rows, "transmission"));
  REQUIRE(peaks.size() == 9);
  for (std::size_t k = 1; k < peaks.size(); ++k) CHECK(std::abs(x[peaks[k]] - x[peaks[k - 1]] - 2.8) <= 0.1);
  // and the library result for the same config agrees bit for bit
  const RunConfig c = parse_config(minimal("eit", "comb.spacing = 2.8\n"));
  CHECK(c.comb.spacing == 2.8);
}

TEST_CASE("run: other commands") {
  for (const char* cmd : {"diagram", "lambda", "spectrum", "sweep"}) {
    CAPTURE(cmd);
    const auto r = run_text(minimal(cmd));
    CHECK(r.code == kExitOk);
    CHECK_FALSE(r.out.empty());
  }
  const auto lam = nlohmann::json::parse(run_text(minimal("lambda", "field = 0 0 63.6278668\n")).out);
  REQUIRE(lam["records"].size() >= 1);
  CHECK(lam["records"][0]["ground_a"] == 8);
  CHECK(lam["records"][0]["ground_b"] == 10);
  CHECK(lam["records"][0]["excited"] == 9);
  const auto sweep = csv_rows(run_text(minimal("sweep")).out);
  CHECK(sweep[0][0] == "Bz_mT");
  CHECK(sweep[0][1] == "omega12_MHz");
  CHECK(sweep[0][2] == "amplitude");
}

TEST_CASE("run: spectrum writes the optional transition table") {
  const fs::path table = scratch("lines.csv");
  fs::remove(table);
  const auto r = run_text(minimal("spectrum", "spectrum.table_output = " + table.string() + "\n"));
  CHECK(r.code == kExitOk);
  const auto rows = csv_rows(slurp(table));
  CHECK(rows[0] == std::vector<std::string>{"g_label", "e_label", "freq_MHz", "strength", "pop_weight"});
  CHECK(rows.size() == 257);
}

TEST_CASE("run: failures map onto exit codes") {
  SUBCASE("no stationary point writes a header-only table and exits 3") {
    const fs::path out = scratch("none.json");
    const auto r = run_text(minimal("zefoz", "[ground]\nA = 0\nB_hf = 0\n"), out);
    CHECK(r.code == kExitComputation);
    CHECK(r.err.find("field-map:") != std::string::npos);
    CHECK(nlohmann::json::parse(slurp(out))["records"].empty());
  }
  SUBCASE("bad labels are a config-class error") {
    const auto r = run_text(minimal("zefoz", "pair.j = 40\n"));
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("field-map:") != std::string::npos);
  }
  SUBCASE("missing ion file") {
    std::ostringstream out, err;
    RunConfig c = parse_config(minimal("levels"));
    c.ion_file = "no_such.ion";
    CHECK(run(c, {kData, std::nullopt}, out, err) == kExitConfig);
    CHECK(err.str().find("no_such.ion") != std::string::npos);
  }
  SUBCASE("unwritable output") {
    const auto r = run_text(minimal("levels"), fs::path("/nonexistent/x.csv"));
    CHECK(r.code == kExitComputation);
    CHECK(r.err.find("/nonexistent/x.csv") != std::string::npos);
  }
  SUBCASE("config file errors") {
    const fs::path cfg = scratch("bad.cfg");
    std::ofstream(cfg) << "command = levels\nfoo = 1\n";
    std::ostringstream out, err;
    CHECK(run_file(cfg, std::nullopt, out, err) == kExitConfig);
    CHECK(err.str().find(":2: unknown key 'foo'") != std::string::npos);
  }
}

TEST_CASE("identical configs give byte-identical outputs") {
  for (const char* cmd : {"levels", "zefoz", "eit", "spectrum"}) {
    const fs::path a = scratch(std::string(cmd) + "_a.out"), b = scratch(std::string(cmd) + "_b.out");
    CHECK(run_text(minimal(cmd), a).code == 0);
    CHECK(run_text(minimal(cmd), b).code == 0);
    CHECK(slurp(a) == slurp(b));
  }
}

TEST_CASE("CLI end to end") {
  const fs::path cfg = scratch("cli.cfg");
  const fs::path out = scratch("cli.csv");
  std::ofstream(cfg) << minimal("levels");
  const std::string cli = ZEFOZ_CLI_PATH;
  CHECK(std::system((cli + " --config " + cfg.string() + " --out " + out.string()).c_str()) == 0);
  CHECK(csv_rows(slurp(out)).size() == 17);
  const int missing = std::system((cli + " --out x.csv > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(missing) == 2);
  std::ofstream(cfg) << "command = levels\n";
  const int bad = std::system((cli + " --config " + cfg.string() + " 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == 2);
}
