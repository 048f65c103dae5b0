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

#include "zefoz/run.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "zefoz/error.hpp"
#include "zefoz/ion_file.hpp"
#include "zefoz/key_value.hpp"
#include "zefoz/table.hpp"

#ifndef ZEFOZ_VERSION_STRING
#define ZEFOZ_VERSION_STRING "0.0.0"
#endif

namespace zefoz {

namespace fs = std::filesystem;

std::string_view version() { return ZEFOZ_VERSION_STRING; }

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string vector_text(const FieldVector& v) {
  return format_real(v.x) + " " + format_real(v.y) + " " + format_real(v.z);
}

std::vector<double> axis_values(const FieldAxis& a) {
  std::vector<double> v(a.count);
  for (int k = 0; k < a.count; ++k) v[k] = a.value(k);
  return v;
}

std::string signature_text(const std::array<int, 3>& s) {
  std::string out;
  for (int a = 0; a < 3; ++a) {
    if (a) out += ',';
    out += s[a] > 0 ? "+" : (s[a] < 0 ? "-" : "0");
  }
  return out;
}

// Everything one command produces.
struct Output {
  Table table;
  std::vector<std::string> notes;  // appended to the provenance header
  std::string failure;             // non-empty: write the table, then exit 3
};

struct Context {
  const RunConfig& cfg;
  const IonModel& model;
  const fs::path& base_dir;
  std::string module = "interface";
  std::ostream& err;
};

Table energy_table() {
  return {{{"Bx_mT"}, {"By_mT"}, {"Bz_mT"}, {"level", ColumnKind::Integer}, {"energy_MHz"}}, {}};
}

void add_energy_rows(Table& t, const FieldVector& b, const Eigen::VectorXd& energies) {
  for (Eigen::Index k = 0; k < energies.size(); ++k)
    t.rows.push_back({b.x, b.y, b.z, std::int64_t(k + 1), energies[k]});
}

Output run_levels(Context& ctx) {
  ctx.module = "spin-system";
  const LevelSet levels = solve_levels(ctx.model.params(ctx.cfg.manifold), ctx.cfg.field);
  Output o{energy_table(), {}, {}};
  add_energy_rows(o.table, ctx.cfg.field, levels.energies);
  return o;
}

Output run_diagram(Context& ctx) {
  ctx.module = "field-map";
  const auto& g = ctx.cfg.grid;
  const FieldGrid grid = line_grid(ctx.cfg.grid_axis, g.start, g.stop, g.count, ctx.cfg.field);
  const LevelDiagram d = level_diagram(ctx.model, grid, ctx.cfg.manifold);
  Output o{energy_table(), {}, {}};
  int warnings = 0;
  for (std::size_t p = 0; p < d.fields.size(); ++p) {
    add_energy_rows(o.table, d.fields[p], d.energies.row(p).transpose());
    if (d.coarse_warning[p]) ++warnings;
  }
  if (warnings) {
    const std::string msg = "tracking overlap below " + format_real(kTrackingOverlapWarning) +
                            " at " + std::to_string(warnings) + " grid points; refine the grid";
    o.notes.push_back("warning: " + msg);
    ctx.err << "field-map: warning: " << msg << '\n';
  }
  return o;
}

ZefozSearchResult search(Context& ctx) {
  ctx.module = "field-map";
  ZefozSearchOptions opt;
  opt.derivatives = ctx.cfg.derivatives;
  opt.max_iterations = ctx.cfg.search_max_iterations;
  return zefoz_search(ctx.model, ctx.cfg.pair, ctx.cfg.search_start, ctx.cfg.search_bounds,
                      ctx.cfg.search_tol, opt);
}

// The stationary point nearest the search start drives eit and sweep.
ZefozPoint located_point(Context& ctx, std::vector<std::string>& notes) {
  const ZefozSearchResult r = search(ctx);
  if (!r.found()) throw NotFound("no stationary point of the selected transition inside the search bounds");
  const ZefozPoint* best = &r.points.front();
  for (const auto& p : r.points)
    if ((p.field - ctx.cfg.search_start).norm() < (best->field - ctx.cfg.search_start).norm())
      best = &p;
  notes.push_back("zefoz_field_mT = " + vector_text(best->field));
  notes.push_back("zefoz_omega0_MHz = " + format_real(best->omega0));
  notes.push_back("zefoz_curvatures_kHz_per_mT2 = " + format_real(best->s2x()) + " " +
                  format_real(best->s2y()) + " " + format_real(best->s2z()));
  return *best;
}

Output run_zefoz(Context& ctx) {
  const ZefozSearchResult r = search(ctx);
  Output o;
  o.table.columns = {{"Bx_mT"},
                     {"By_mT"},
                     {"Bz_mT"},
                     {"omega0_MHz"},
                     {"gradient_residual_MHz_per_mT"},
                     {"S2x_kHz_per_mT2"},
                     {"S2y_kHz_per_mT2"},
                     {"S2z_kHz_per_mT2"},
                     {"hessian_signature", ColumnKind::Text}};
  for (const auto& p : r.points)
    o.table.rows.push_back({p.field.x, p.field.y, p.field.z, p.omega0, p.gradient_residual, p.s2x(),
                            p.s2y(), p.s2z(), signature_text(p.hessian_signature)});
  if (!r.found()) o.failure = "no stationary point of the selected transition inside the search bounds";
  return o;
}

std::vector<TransitionLine> optical_table(Context& ctx, SpectrumParams& spectrum) {
  ctx.module = "transitions";
  spectrum = ctx.cfg.spectrum;
  spectrum.optical_origin = ctx.cfg.optical_origin;
  const LevelSet g = solve_levels(ctx.model.ground, ctx.cfg.field);
  const LevelSet e = solve_levels(ctx.model.excited, ctx.cfg.field);
  return transition_table(g, e, TransitionOperator::parse(ctx.cfg.transition_operator), spectrum);
}

Output run_lambda(Context& ctx) {
  SpectrumParams spectrum;
  const auto table = optical_table(ctx, spectrum);
  const auto systems = find_lambda_systems(table, ctx.cfg.lambda_max_asymmetry,
                                           ctx.cfg.lambda_max_leakage_ratio, ctx.cfg.lambda_min_strength);
  Output o;
  o.table.columns = {{"ground_a", ColumnKind::Integer}, {"ground_b", ColumnKind::Integer},
                     {"excited", ColumnKind::Integer},  {"strength_a"},
                     {"strength_b"},                    {"leakage"},
                     {"asymmetry"},                     {"two_photon_MHz"}};
  for (const auto& s : systems)
    o.table.rows.push_back({std::int64_t(s.ground_a), std::int64_t(s.ground_b), std::int64_t(s.excited),
                            s.strength_a, s.strength_b, s.leakage, s.asymmetry, s.two_photon});
  return o;
}

Output run_spectrum(Context& ctx) {
  SpectrumParams spectrum;
  const auto table = optical_table(ctx, spectrum);
  const Spectrum s = absorption_spectrum(table, spectrum);
  Output o;
  o.table.columns = {{"freq_MHz"}, {"optical_depth"}};
  for (std::size_t k = 0; k < s.frequency.size(); ++k)
    o.table.rows.push_back({s.frequency[k], s.optical_depth[k]});
  if (!ctx.cfg.spectrum_table_output.empty()) {
    Table lines{{{"g_label", ColumnKind::Integer},
                 {"e_label", ColumnKind::Integer},
                 {"freq_MHz"},
                 {"strength"},
                 {"pop_weight"}},
                {}};
    for (const auto& l : table)
      lines.rows.push_back({std::int64_t(l.ground_label), std::int64_t(l.excited_label), l.frequency,
                            l.strength, l.population_weight});
    const fs::path path = resolve(ctx.base_dir, ctx.cfg.spectrum_table_output);
    write_table(path, lines, TableFormat::Csv, {"transition table, " + std::to_string(table.size()) + " lines"});
    o.notes.push_back("transition_table = " + path.string());
  }
  return o;
}

NoiseModel run_noise(const RunConfig& cfg, const ZefozPoint& point) {
  NoiseModel noise = cfg.noise;
  if (cfg.noise_curvatures) {
    noise.curvatures = *cfg.noise_curvatures;
    return noise;
  }
  return with_curvatures(noise, point);
}

Output run_eit(Context& ctx) {
  Output o;
  const ZefozPoint point = located_point(ctx, o.notes);
  ctx.module = "eit";
  const NoiseModel noise = run_noise(ctx.cfg, point);
  CombModel comb = ctx.cfg.comb;
  comb.reference_field = (point.field + ctx.cfg.eit_offset).norm();
  const auto grid = axis_values(ctx.cfg.eit_grid);
  const EitProfile p = eit_profile(comb, ctx.cfg.lambda, noise, ctx.cfg.eit_offset, grid);
  o.notes.push_back("comb_spacing_MHz = " + format_real(comb.resolved_spacing()));
  o.notes.push_back("spin_linewidth_MHz = " + format_real(p.linewidth));
  o.notes.push_back("eit_amplitude = " + format_real(p.amplitude));
  if (p.narrow_grid) {
    o.notes.push_back("warning: detuning grid does not cover the whole comb");
    ctx.err << "eit: warning: detuning grid does not cover the whole comb\n";
  }
  o.table.columns = {{"detuning_MHz"}, {"alpha_off"}, {"alpha_on"}, {"transmission"}};
  for (std::size_t k = 0; k < p.detuning.size(); ++k)
    o.table.rows.push_back({p.detuning[k], p.alpha_off[k], p.alpha_on[k], p.transmission[k]});
  return o;
}

Output run_sweep(Context& ctx) {
  Output o;
  const ZefozPoint point = located_point(ctx, o.notes);
  ctx.module = "eit";
  const NoiseModel noise = run_noise(ctx.cfg, point);
  CombModel comb = ctx.cfg.comb;
  comb.reference_field = point.field.norm();
  const auto& s = ctx.cfg.sweep;
  const FieldGrid grid = line_grid(ctx.cfg.sweep_axis, s.start, s.stop, s.count, point.field);
  const auto rows = amplitude_vs_field(point, noise, ctx.cfg.lambda, comb, grid, &ctx.model, ctx.cfg.pair);
  o.table.columns = {{"Bz_mT"}, {"omega12_MHz"}, {"amplitude"}, {"Bx_mT"},
                     {"By_mT"}, {"omega12_exact_MHz"}, {"linewidth_MHz"}};
  for (const auto& r : rows)
    o.table.rows.push_back({r.field.z, r.omega12, r.amplitude, r.field.x, r.field.y, r.omega12_exact,
                            r.linewidth});
  return o;
}

Output dispatch(Context& ctx) {
  switch (ctx.cfg.command) {
    case Command::Levels: return run_levels(ctx);
    case Command::Diagram: return run_diagram(ctx);
    case Command::Zefoz: return run_zefoz(ctx);
    case Command::Lambda: return run_lambda(ctx);
    case Command::Spectrum: return run_spectrum(ctx);
    case Command::Eit: return run_eit(ctx);
    case Command::Sweep: return run_sweep(ctx);
  }
  throw InvalidParameter("unknown command");
}

int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::Config || kind == ErrorKind::InvalidParameter ? kExitConfig : kExitComputation;
}

}  // namespace

IonModel resolve_ion_model(const RunConfig& config, const fs::path& base_dir) {
  IonModel model = load_ion_parameters(resolve(base_dir, config.ion_file));
  std::vector<Diagnostic> problems;
  for (auto [params, overrides, name] :
       {std::tuple{&model.ground, &config.ground_overrides, "ground"},
        std::tuple{&model.excited, &config.excited_overrides, "excited"}}) {
    for (const auto& [key, value] : *overrides) {
      if (auto e = set_ion_key(*params, key, format_exact(value)); !e.empty())
        problems.push_back({0, std::string("[") + name + "] override: " + e});
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  model.ground.validate();
  model.excited.validate();
  model.optical_origin = config.optical_origin;
  return model;
}

int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::string module = "interface";
  try {
    module = "spin-system";
    const IonModel model = resolve_ion_model(config, options.base_dir);
    Context ctx{config, model, options.base_dir, "interface", err};
    Output result;
    try {
      result = dispatch(ctx);
    } catch (...) {
      module = ctx.module;
      throw;
    }
    module = "interface";

    std::vector<std::string> provenance{"zefoz " + std::string(version()),
                                        "command = " + std::string(command_name(config.command))};
    provenance.push_back("[config]");
    for (auto& l : split_lines(echo_config(config))) provenance.push_back(std::move(l));
    provenance.push_back("[ion]");
    for (auto& l : split_lines(format_ion_parameters(model))) provenance.push_back(std::move(l));
    if (!result.notes.empty()) provenance.push_back("[result]");
    for (auto& n : result.notes) provenance.push_back(std::move(n));

    OutputFormat format = config.format;
    if (format == OutputFormat::Auto)
      format = (config.command == Command::Zefoz || config.command == Command::Lambda)
                   ? OutputFormat::Json
                   : OutputFormat::Csv;
    const TableFormat tf = format == OutputFormat::Json ? TableFormat::JsonRecords : TableFormat::Csv;
    if (options.output_override)
      write_table(*options.output_override, result.table, tf, provenance);
    else if (config.output == "-")
      write_table(out, result.table, tf, provenance);
    else
      write_table(resolve(options.base_dir, config.output), result.table, tf, provenance);

    if (!result.failure.empty()) {
      err << "field-map: " << result.failure << '\n';
      return kExitComputation;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << module << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << module << ": unexpected failure: " << e.what() << '\n';
    return kExitComputation;
  }
}

int run_file(const fs::path& config_path, const std::optional<fs::path>& output_override,
             std::ostream& out, std::ostream& err) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    err << "interface: cannot read config file '" << config_path.string() << "'\n";
    return kExitConfig;
  }
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig config;
  try {
    config = parse_config(text.str());
  } catch (const ConfigError& e) {
    for (const auto& d : e.diagnostics())
      err << "interface: " << config_path.string() << ":" << d.line << ": " << d.message << '\n';
    return kExitConfig;
  }
  RunOptions options;
  options.base_dir = config_path.has_parent_path() ? config_path.parent_path() : fs::path(".");
  options.output_override = output_override;
  return run(config, options, out, err);
}

}  // namespace zefoz
