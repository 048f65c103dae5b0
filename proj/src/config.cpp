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

#include "zefoz/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "zefoz/error.hpp"
#include "zefoz/ion_file.hpp"
#include "zefoz/key_value.hpp"

namespace zefoz {

namespace {

struct Range {
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool lo_open = false;
};

std::string set_real(double& slot, std::string_view v, Range r) {
  double x = 0.0;
  if (!parse_double(v, x)) return "expected a number, got '" + std::string(v) + "'";
  if (x < r.lo || (r.lo_open && x == r.lo) || x > r.hi) {
    std::ostringstream msg;
    msg << "value " << v << " outside the allowed range " << (r.lo_open ? "(" : "[") << r.lo
        << ", " << r.hi << "]";
    return msg.str();
  }
  slot = x;
  return {};
}

std::string set_int(int& slot, std::string_view v, int lo, int hi) {
  int x = 0;
  if (!parse_int(v, x)) return "expected an integer, got '" + std::string(v) + "'";
  if (x < lo || x > hi) {
    std::ostringstream msg;
    msg << "value " << x << " outside the allowed range [" << lo << ", " << hi << "]";
    return msg.str();
  }
  slot = x;
  return {};
}

std::string set_vector(FieldVector& slot, std::string_view v, bool non_negative) {
  const auto parts = split_whitespace(v);
  if (parts.size() != 3) return "expected three numbers 'x y z', got '" + std::string(v) + "'";
  FieldVector out;
  for (int a = 0; a < 3; ++a) {
    if (!parse_double(parts[a], out[a])) return "expected a number, got '" + std::string(parts[a]) + "'";
    if (non_negative && out[a] < 0.0) return "components must be >= 0";
  }
  slot = out;
  return {};
}

std::string format_vector(const FieldVector& v) {
  return format_exact(v.x) + " " + format_exact(v.y) + " " + format_exact(v.z);
}

std::string set_axis(FieldAxis& slot, std::string_view v) {
  const auto parts = split_whitespace(v);
  if (parts.size() != 3) return "expected 'start stop count', got '" + std::string(v) + "'";
  FieldAxis a;
  if (!parse_double(parts[0], a.start) || !parse_double(parts[1], a.stop))
    return "expected numeric start and stop, got '" + std::string(v) + "'";
  if (!parse_int(parts[2], a.count)) return "expected an integer count, got '" + std::string(parts[2]) + "'";
  if (a.count < 1) return "count must be >= 1";
  if (a.stop < a.start) return "stop must be >= start";
  slot = a;
  return {};
}

std::string format_axis(const FieldAxis& a) {
  return format_exact(a.start) + " " + format_exact(a.stop) + " " + std::to_string(a.count);
}

template <typename E, std::size_t N>
std::string set_choice(E& slot, std::string_view v, const std::pair<const char*, E> (&choices)[N]) {
  for (const auto& [name, value] : choices) {
    if (v == name) {
      slot = value;
      return {};
    }
  }
  std::string msg = "expected one of";
  for (const auto& c : choices) msg += std::string(" ") + c.first;
  return msg + ", got '" + std::string(v) + "'";
}

template <typename E, std::size_t N>
std::string get_choice(E value, const std::pair<const char*, E> (&choices)[N]) {
  for (const auto& [name, v] : choices)
    if (v == value) return name;
  return "?";
}

const std::pair<const char*, Command> kCommands[] = {
    {"levels", Command::Levels}, {"diagram", Command::Diagram}, {"zefoz", Command::Zefoz},
    {"lambda", Command::Lambda}, {"spectrum", Command::Spectrum}, {"eit", Command::Eit},
    {"sweep", Command::Sweep}};
const std::pair<const char*, OutputFormat> kFormats[] = {
    {"auto", OutputFormat::Auto}, {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
const std::pair<const char*, Manifold> kLevelManifolds[] = {{"ground", Manifold::Ground},
                                                            {"excited", Manifold::Excited}};
const std::pair<const char*, Manifold> kPairManifolds[] = {
    {"ground", Manifold::Ground}, {"excited", Manifold::Excited}, {"optical", Manifold::Optical}};
const std::pair<const char*, int> kAxes[] = {{"x", 0}, {"y", 1}, {"z", 2}};
const std::pair<const char*, LineProfile> kProfiles[] = {{"gaussian", LineProfile::Gaussian},
                                                         {"lorentzian", LineProfile::Lorentzian}};
const std::pair<const char*, SpinBroadening> kBroadenings[] = {
    {"voigt", SpinBroadening::Voigt}, {"lorentzian", SpinBroadening::Lorentzian}};
const std::pair<const char*, InhomogeneousMethod> kInhomMethods[] = {
    {"exact", InhomogeneousMethod::Exact}, {"gauss_hermite", InhomogeneousMethod::GaussHermite}};
const std::pair<const char*, CombWeights> kWeights[] = {{"binomial", CombWeights::Binomial},
                                                        {"flat", CombWeights::Flat}};

constexpr Range kAny{};
constexpr Range kPositive{0.0, HUGE_VAL, true};
constexpr Range kNonNegative{0.0, HUGE_VAL, false};
constexpr Range kUnit{0.0, 1.0, false};

#define ZF_REAL(NAME, DEF, DESC, MODULE, EXPR, RANGE)                                       \
  ConfigKey {                                                                               \
    NAME, DEF, DESC, false, MODULE,                                                         \
        [](RunConfig& c, std::string_view v) { return set_real(EXPR, v, RANGE); },          \
        [](const RunConfig& c) { return format_exact(EXPR); }                               \
  }
#define ZF_INT(NAME, DEF, DESC, MODULE, EXPR, LO, HI)                                       \
  ConfigKey {                                                                               \
    NAME, DEF, DESC, false, MODULE,                                                         \
        [](RunConfig& c, std::string_view v) { return set_int(EXPR, v, LO, HI); },          \
        [](const RunConfig& c) { return std::to_string(EXPR); }                             \
  }
#define ZF_VECTOR(NAME, DEF, DESC, MODULE, EXPR, NONNEG)                                    \
  ConfigKey {                                                                               \
    NAME, DEF, DESC, false, MODULE,                                                         \
        [](RunConfig& c, std::string_view v) { return set_vector(EXPR, v, NONNEG); },       \
        [](const RunConfig& c) { return format_vector(EXPR); }                              \
  }
#define ZF_AXIS(NAME, DEF, DESC, EXPR)                                                      \
  ConfigKey {                                                                               \
    NAME, DEF, DESC, false, false,                                                          \
        [](RunConfig& c, std::string_view v) { return set_axis(EXPR, v); },                 \
        [](const RunConfig& c) { return format_axis(EXPR); }                                \
  }
#define ZF_CHOICE(NAME, DEF, DESC, MODULE, EXPR, TABLE)                                     \
  ConfigKey {                                                                               \
    NAME, DEF, DESC, false, MODULE,                                                         \
        [](RunConfig& c, std::string_view v) { return set_choice(EXPR, v, TABLE); },        \
        [](const RunConfig& c) { return get_choice(EXPR, TABLE); }                          \
  }

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  k.push_back({"command", "", "levels | diagram | zefoz | lambda | spectrum | eit | sweep", true, false,
               [](RunConfig& c, std::string_view v) { return set_choice(c.command, v, kCommands); },
               [](const RunConfig& c) { return get_choice(c.command, kCommands); }});
  k.push_back({"ion_file", "", "ion parameter file, relative to the config file", true, false,
               [](RunConfig& c, std::string_view v) -> std::string {
                 if (v.empty()) return "path must not be empty";
                 c.ion_file = std::string(v);
                 return {};
               },
               [](const RunConfig& c) { return c.ion_file; }});
  k.push_back({"output", "-", "output path, '-' for standard output", false, false,
               [](RunConfig& c, std::string_view v) -> std::string {
                 if (v.empty()) return "path must not be empty";
                 c.output = std::string(v);
                 return {};
               },
               [](const RunConfig& c) { return c.output; }});
  k.push_back(ZF_CHOICE("format", "auto", "auto | csv | json (auto: json for zefoz and lambda)",
                        false, c.format, kFormats));

  k.push_back(ZF_VECTOR("field", "0 0 63.6", "applied field Bx By Bz (mT)", false, c.field, false));
  k.push_back(ZF_CHOICE("manifold", "ground", "levels/diagram manifold: ground | excited", false,
                        c.manifold, kLevelManifolds));
  k.push_back(ZF_REAL("optical.origin", "0", "offset added to optical frequencies (MHz)", false,
                      c.optical_origin, kAny));
  k.push_back(ZF_CHOICE("pair.manifold", "ground", "transition manifold: ground | excited | optical",
                        true, c.pair.manifold, kPairManifolds));
  k.push_back(ZF_INT("pair.i", "8", "lower (or ground) level label", true, c.pair.level_i, 1, 1 << 20));
  k.push_back(ZF_INT("pair.j", "10", "upper (or excited) level label", true, c.pair.level_j, 1, 1 << 20));

  k.push_back(ZF_CHOICE("grid.axis", "z", "diagram sweep axis: x | y | z", false, c.grid_axis, kAxes));
  k.push_back(ZF_AXIS("grid.range", "0 100 201", "diagram range: start stop count (mT)", c.grid));

  k.push_back(ZF_VECTOR("search.start", "0 0 50", "ZEFOZ search initial field (mT)", false,
                        c.search_start, false));
  k.push_back(ZF_AXIS("search.x", "0 0 1", "search bounds along x: start stop count", c.search_bounds.axes[0]));
  k.push_back(ZF_AXIS("search.y", "0 0 1", "search bounds along y: start stop count", c.search_bounds.axes[1]));
  k.push_back(ZF_AXIS("search.z", "30 100 71", "search bounds along z: start stop count", c.search_bounds.axes[2]));
  k.push_back(ZF_REAL("search.tol", "1e-06", "gradient residual tolerance (MHz/mT)", false,
                      c.search_tol, kPositive));
  k.push_back(ZF_INT("search.max_iterations", "60", "Newton iterations per seed", true,
                     c.search_max_iterations, 1, 100000));
  k.push_back(ZF_REAL("deriv.gradient_step", "0.01", "finite-difference gradient step (mT)", true,
                      c.derivatives.gradient_step, kPositive));
  k.push_back(ZF_REAL("deriv.hessian_step", "0.5", "second-difference step (mT)", true,
                      c.derivatives.hessian_step, kPositive));
  k.push_back(ZF_INT("deriv.richardson", "1", "Richardson extrapolation levels", true,
                     c.derivatives.richardson_levels, 0, 20));
  k.push_back(ZF_REAL("deriv.min_step", "1e-04", "smallest allowed field step (mT)", true,
                      c.derivatives.min_step, kPositive));
  k.push_back(ZF_REAL("deriv.degeneracy_gap", "0.001", "gap below which levels count as degenerate (MHz)",
                      true, c.derivatives.degeneracy_gap, kNonNegative));

  k.push_back({"transition.operator", "sx", "electron operator: identity | sx | sy | sz | splus | sminus",
               false, true,
               [](RunConfig& c, std::string_view v) -> std::string {
                 try {
                   c.transition_operator = TransitionOperator::parse(std::string(v)).name();
                 } catch (const Error& e) {
                   return e.what();
                 }
                 return {};
               },
               [](const RunConfig& c) { return c.transition_operator; }});
  k.push_back(ZF_REAL("lambda.max_asymmetry", "0.01", "largest accepted leg asymmetry", false,
                      c.lambda_max_asymmetry, kUnit));
  k.push_back(ZF_REAL("lambda.max_leakage_ratio", "0.01", "largest leakage relative to the weaker leg",
                      false, c.lambda_max_leakage_ratio, kUnit));
  k.push_back(ZF_REAL("lambda.min_strength", "0.01", "smallest accepted leg strength", false,
                      c.lambda_min_strength, kUnit));

  k.push_back(ZF_REAL("spectrum.temperature", "2", "temperature (K)", true, c.spectrum.temperature, kPositive));
  k.push_back(ZF_REAL("spectrum.inhom_fwhm", "35", "inhomogeneous FWHM (MHz)", true,
                      c.spectrum.inhom_fwhm, kPositive));
  k.push_back(ZF_CHOICE("spectrum.profile", "gaussian", "line profile: gaussian | lorentzian", true,
                        c.spectrum.profile, kProfiles));
  k.push_back(ZF_REAL("spectrum.start", "-3000", "spectrum grid start (MHz)", true, c.spectrum.grid_start, kAny));
  k.push_back(ZF_REAL("spectrum.stop", "3000", "spectrum grid stop (MHz)", true, c.spectrum.grid_stop, kAny));
  k.push_back(ZF_INT("spectrum.count", "6001", "spectrum grid points", true, c.spectrum.grid_count, 1, 10000000));
  k.push_back(ZF_REAL("spectrum.boltzmann", "20836.6", "Boltzmann constant (MHz/K)", true,
                      c.spectrum.boltzmann_constant, kPositive));
  k.push_back({"spectrum.table_output", "", "optional transition table CSV path", false, false,
               [](RunConfig& c, std::string_view v) -> std::string {
                 c.spectrum_table_output = std::string(v);
                 return {};
               },
               [](const RunConfig& c) { return c.spectrum_table_output; }});

  k.push_back(ZF_REAL("noise.gamma0", "0.5", "residual two-photon linewidth (MHz FWHM)", true,
                      c.noise.gamma0, kNonNegative));
  k.push_back(ZF_VECTOR("noise.deltaB", "1 1 1", "field fluctuation amplitudes (mT)", true,
                        c.noise.delta_b, true));
  k.push_back({"noise.curvatures", "auto", "S2x S2y S2z (kHz/mT^2), or auto for the located ZEFOZ point",
               false, false,
               [](RunConfig& c, std::string_view v) -> std::string {
                 if (v == "auto") {
                   c.noise_curvatures.reset();
                   return {};
                 }
                 FieldVector s;
                 if (auto err = set_vector(s, v, false); !err.empty()) return err;
                 c.noise_curvatures = s;
                 return {};
               },
               [](const RunConfig& c) {
                 return c.noise_curvatures ? format_vector(*c.noise_curvatures) : std::string("auto");
               }});

  k.push_back(ZF_REAL("eit.rabi", "3", "coupling Rabi frequency (MHz)", true, c.lambda.rabi_coupling, kNonNegative));
  k.push_back(ZF_REAL("eit.gamma_ge", "0.25", "optical dephasing half-width (MHz)", true,
                      c.lambda.optical_dephasing, kPositive));
  k.push_back(ZF_REAL("eit.gamma_gs", "0", "spin dephasing half-width for direct chi (MHz)", true,
                      c.lambda.spin_dephasing, kNonNegative));
  k.push_back(ZF_REAL("eit.inhom_fwhm", "35", "optical inhomogeneous FWHM (MHz)", true,
                      c.lambda.optical_inhom_fwhm, kNonNegative));
  k.push_back(ZF_REAL("eit.offset", "0", "two-photon offset of the comb centre (MHz)", true,
                      c.lambda.two_photon_offset, kAny));
  k.push_back(ZF_CHOICE("eit.broadening", "voigt", "spin broadening: voigt | lorentzian", true,
                        c.lambda.broadening, kBroadenings));
  k.push_back(ZF_CHOICE("eit.inhom_method", "exact", "optical average: exact | gauss_hermite", true,
                        c.lambda.inhom_method, kInhomMethods));
  k.push_back(ZF_INT("eit.quadrature_nodes", "64", "Gauss-Hermite nodes", true, c.lambda.quadrature_nodes, 1, 512));
  k.push_back(ZF_VECTOR("eit.dB", "0 0 0", "field offset from the ZEFOZ point (mT)", false, c.eit_offset, false));
  k.push_back(ZF_AXIS("eit.range", "-20 20 801", "two-photon detuning grid: start stop count (MHz)", c.eit_grid));

  k.push_back(ZF_INT("comb.n_lines", "9", "superhyperfine comb lines (odd)", true, c.comb.n_lines, 1, 1001));
  k.push_back({"comb.spacing", "auto", "comb spacing (MHz), or auto for gamma_F |B|", false, true,
               [](RunConfig& c, std::string_view v) -> std::string {
                 if (v == "auto") {
                   c.comb.spacing.reset();
                   return {};
                 }
                 double s = 0.0;
                 if (auto err = set_real(s, v, kPositive); !err.empty()) return err;
                 c.comb.spacing = s;
                 return {};
               },
               [](const RunConfig& c) {
                 return c.comb.spacing ? format_exact(*c.comb.spacing) : std::string("auto");
               }});
  k.push_back(ZF_REAL("comb.gamma_F", "0.04006", "fluorine gyromagnetic ratio (MHz/mT)", true,
                      c.comb.gyromagnetic, kPositive));
  k.push_back(ZF_CHOICE("comb.weights", "binomial", "comb weights: binomial | flat", true,
                        c.comb.scheme, kWeights));

  k.push_back(ZF_CHOICE("sweep.axis", "z", "amplitude sweep axis: x | y | z", false, c.sweep_axis, kAxes));
  k.push_back(ZF_AXIS("sweep.range", "54 74 41", "amplitude sweep: start stop count (mT)", c.sweep));
  return k;
}

#undef ZF_REAL
#undef ZF_INT
#undef ZF_VECTOR
#undef ZF_AXIS
#undef ZF_CHOICE

const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [name, value] : kCommands)
    if (value == c) return name;
  return "?";
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

RunConfig default_config() {
  RunConfig c;
  for (const auto& k : config_keys()) {
    if (k.required) continue;
    const std::string err = k.set(c, k.default_text);
    if (!err.empty()) throw ComputationError("bad built-in default for " + k.name + ": " + err);
  }
  return c;
}

RunConfig module_default_config() {
  RunConfig c = default_config();
  c.pair = TransitionSelector{};
  c.search_max_iterations = ZefozSearchOptions{}.max_iterations;
  c.derivatives = DerivativeOptions{};
  c.transition_operator = TransitionOperator{}.name();
  const double origin = c.spectrum.optical_origin;
  c.spectrum = SpectrumParams{};
  c.spectrum.optical_origin = origin;
  c.noise = NoiseModel{};
  c.lambda = LambdaParams{};
  c.comb = CombModel{};
  return c;
}

RunConfig parse_config(std::string_view text) {
  std::vector<Diagnostic> diagnostics;
  const auto entries = parse_key_values(text, diagnostics);
  RunConfig config = default_config();
  std::set<std::string> seen;

  auto override_ion = [&](const std::string& section, const std::string& key,
                          const std::string& value, int line) {
    if (!is_ion_key(key)) {
      diagnostics.push_back({line, "unknown ion parameter '" + key + "' in [" + section + "]"});
      return;
    }
    SpinParams scratch;
    if (auto err = set_ion_key(scratch, key, value); !err.empty()) {
      diagnostics.push_back({line, err});
      return;
    }
    auto& target = section == "ground" ? config.ground_overrides : config.excited_overrides;
    target[key] = get_ion_key(scratch, key);
  };

  for (const auto& e : entries) {
    std::string section = e.section;
    std::string key = e.key;
    if (section.empty()) {
      for (const char* s : {"ground", "excited"}) {
        const std::string prefix = std::string(s) + ".";
        if (key.rfind(prefix, 0) == 0) {
          section = s;
          key = key.substr(prefix.size());
        }
      }
    }
    const std::string id = section.empty() ? key : section + "." + key;
    if (!seen.insert(id).second) {
      diagnostics.push_back({e.line, "duplicate key '" + id + "'"});
      continue;
    }
    if (section == "ground" || section == "excited") {
      override_ion(section, key, e.value, e.line);
      continue;
    }
    if (!section.empty()) {
      diagnostics.push_back({e.line, "unknown section [" + section + "]"});
      continue;
    }
    const ConfigKey* k = find_key(key);
    if (!k) {
      std::string msg = "unknown key '" + key + "'";
      if (is_ion_key(key)) msg += " (ion parameters go under [ground] or [excited])";
      diagnostics.push_back({e.line, msg});
      continue;
    }
    if (auto err = k->set(config, e.value); !err.empty())
      diagnostics.push_back({e.line, key + ": " + err});
  }
  for (const auto& k : config_keys()) {
    if (k.required && !seen.count(k.name))
      diagnostics.push_back({0, "missing required key '" + k.name + "'"});
  }
  if (!diagnostics.empty()) throw ConfigError(std::move(diagnostics));
  return config;
}

std::string echo_config(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& k : config_keys()) {
    const std::string value = k.get(config);
    out << k.name << " = " << value;
    if (!k.required && value == k.default_text) out << "  # default";
    out << '\n';
  }
  for (const auto& [name, overrides] :
       {std::pair{"ground", &config.ground_overrides}, std::pair{"excited", &config.excited_overrides}}) {
    if (overrides->empty()) continue;
    out << '[' << name << "]\n";
    for (const auto& [key, value] : *overrides) out << key << " = " << format_exact(value) << '\n';
  }
  return out.str();
}

}  // namespace zefoz
