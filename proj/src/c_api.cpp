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

#include "zefoz/zefoz_c.h"

#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "zefoz/config.hpp"
#include "zefoz/eit.hpp"
#include "zefoz/error.hpp"
#include "zefoz/field_map.hpp"
#include "zefoz/ion_file.hpp"
#include "zefoz/key_value.hpp"
#include "zefoz/run.hpp"

struct zf_ion {
  zefoz::IonModel model;
};
struct zf_levels {
  zefoz::LevelSet levels;
};
struct zf_config {
  zefoz::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

zf_status fail(zf_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

zf_status status_for(zefoz::ErrorKind kind) {
  switch (kind) {
    case zefoz::ErrorKind::InvalidParameter: return ZF_INVALID_PARAMETER;
    case zefoz::ErrorKind::Computation: return ZF_COMPUTATION;
    case zefoz::ErrorKind::NotFound: return ZF_NOT_FOUND;
    case zefoz::ErrorKind::Config: return ZF_CONFIG;
    case zefoz::ErrorKind::Io: return ZF_IO;
  }
  return ZF_INTERNAL;
}

// Runs `f`, translating exceptions into status codes.
template <typename F>
zf_status guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const zefoz::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ZF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ZF_INTERNAL, e.what());
  }
}

bool manifold_ok(int m, bool allow_optical) {
  return m == ZF_GROUND || m == ZF_EXCITED || (allow_optical && m == ZF_OPTICAL);
}

zefoz::FieldVector to_field(const double* f) { return {f[0], f[1], f[2]}; }

zefoz::SpinParams* params_of(zf_ion* ion, int m) {
  return m == ZF_GROUND ? &ion->model.ground : &ion->model.excited;
}

zefoz::TransitionSelector to_selector(zf_selector s) {
  zefoz::TransitionSelector sel;
  sel.manifold = static_cast<zefoz::Manifold>(s.manifold);
  sel.level_i = s.level_i;
  sel.level_j = s.level_j;
  return sel;
}

zf_status copy_out(const std::string& text, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || capacity < text.size() + 1) {
    if (buf && capacity > 0) {
      std::memcpy(buf, text.data(), capacity - 1);
      buf[capacity - 1] = '\0';
    }
    return fail(ZF_BUFFER_TOO_SMALL, "buffer holds " + std::to_string(capacity) + " bytes, need " +
                                         std::to_string(text.size() + 1));
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return ZF_OK;
}

}  // namespace

extern "C" {

const char* zf_version(void) {
  static const std::string v(zefoz::version());
  return v.c_str();
}

const char* zf_last_error(void) { return g_last_error.c_str(); }

zf_status zf_ion_create_default(zf_ion** out) {
  if (!out) return fail(ZF_INVALID_ARGUMENT, "null output handle");
  return guard([&] {
    *out = new zf_ion{};
    return ZF_OK;
  });
}

zf_status zf_ion_load(const char* path, zf_ion** out) {
  if (!path || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = new zf_ion{zefoz::load_ion_parameters(path)};
    return ZF_OK;
  });
}

zf_status zf_ion_parse(const char* text, zf_ion** out) {
  if (!text || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = new zf_ion{zefoz::parse_ion_parameters(text)};
    return ZF_OK;
  });
}

zf_status zf_ion_set(zf_ion* ion, int manifold, const char* key, double value) {
  if (!ion || !key) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (!manifold_ok(manifold, false)) return fail(ZF_INVALID_ARGUMENT, "manifold must be ground or excited");
  return guard([&] {
    zefoz::SpinParams next = *params_of(ion, manifold);
    if (!zefoz::is_ion_key(key)) return fail(ZF_INVALID_ARGUMENT, std::string("unknown ion parameter '") + key + "'");
    const std::string err = zefoz::set_ion_key(next, key, zefoz::format_exact(value));
    if (!err.empty()) return fail(ZF_INVALID_PARAMETER, err);
    next.validate();
    *params_of(ion, manifold) = next;
    return ZF_OK;
  });
}

zf_status zf_ion_get(const zf_ion* ion, int manifold, const char* key, double* out) {
  if (!ion || !key || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (!manifold_ok(manifold, false)) return fail(ZF_INVALID_ARGUMENT, "manifold must be ground or excited");
  if (!zefoz::is_ion_key(key)) return fail(ZF_INVALID_ARGUMENT, std::string("unknown ion parameter '") + key + "'");
  return guard([&] {
    *out = zefoz::get_ion_key(manifold == ZF_GROUND ? ion->model.ground : ion->model.excited, key);
    return ZF_OK;
  });
}

void zf_ion_destroy(zf_ion* ion) { delete ion; }

zf_status zf_levels_compute(const zf_ion* ion, int manifold, const double field[3], zf_levels** out) {
  if (!ion || !field || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (!manifold_ok(manifold, false)) return fail(ZF_INVALID_ARGUMENT, "manifold must be ground or excited");
  return guard([&] {
    const auto& p = manifold == ZF_GROUND ? ion->model.ground : ion->model.excited;
    *out = new zf_levels{zefoz::solve_levels(p, to_field(field))};
    return ZF_OK;
  });
}

int zf_levels_count(const zf_levels* levels) { return levels ? levels->levels.size() : 0; }

zf_status zf_levels_energy(const zf_levels* levels, int label, double* out) {
  if (!levels || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = levels->levels.energy(label);
    return ZF_OK;
  });
}

zf_status zf_levels_amplitude(const zf_levels* levels, int label, double m_i, double m_s, double* re,
                              double* im) {
  if (!levels || !re || !im) return fail(ZF_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const auto v = levels->levels.vector(label);
    const auto c = v[levels->levels.basis.index(m_i, m_s)];
    *re = c.real();
    *im = c.imag();
    return ZF_OK;
  });
}

void zf_levels_destroy(zf_levels* levels) { delete levels; }

zf_status zf_transition_frequency(const zf_ion* ion, zf_selector sel, const double field[3], double* out) {
  if (!ion || !field || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (!manifold_ok(sel.manifold, true)) return fail(ZF_INVALID_ARGUMENT, "bad manifold");
  return guard([&] {
    *out = zefoz::transition_frequency(ion->model, to_field(field), to_selector(sel));
    return ZF_OK;
  });
}

zf_status zf_gradient(const zf_ion* ion, zf_selector sel, const double field[3], double out[3]) {
  if (!ion || !field || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (!manifold_ok(sel.manifold, true)) return fail(ZF_INVALID_ARGUMENT, "bad manifold");
  return guard([&] {
    const auto g = zefoz::hellmann_feynman_gradient(ion->model, to_field(field), to_selector(sel));
    for (int a = 0; a < 3; ++a) out[a] = g[a];
    return ZF_OK;
  });
}

zf_status zf_curvature(const zf_ion* ion, zf_selector sel, const double field[3], double out[9]) {
  if (!ion || !field || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (!manifold_ok(sel.manifold, true)) return fail(ZF_INVALID_ARGUMENT, "bad manifold");
  return guard([&] {
    const auto c = zefoz::frequency_hessian(ion->model, to_field(field), to_selector(sel));
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) out[3 * r + k] = c(r, k);
    return ZF_OK;
  });
}

zf_status zf_zefoz_search(const zf_ion* ion, zf_selector sel, const double start[3], const double bounds[9],
                          double tol, zf_zefoz_point* points, size_t capacity, size_t* found) {
  if (!ion || !start || !bounds || !found) return fail(ZF_INVALID_ARGUMENT, "null argument");
  if (capacity > 0 && !points) return fail(ZF_INVALID_ARGUMENT, "null point buffer");
  if (!manifold_ok(sel.manifold, true)) return fail(ZF_INVALID_ARGUMENT, "bad manifold");
  return guard([&] {
    zefoz::FieldGrid grid;
    for (int a = 0; a < 3; ++a) {
      const double count = bounds[3 * a + 2];
      if (!(count >= 1.0) || count != static_cast<int>(count))
        return fail(ZF_INVALID_ARGUMENT, "grid counts must be positive integers");
      grid.axes[a] = {bounds[3 * a], bounds[3 * a + 1], static_cast<int>(count)};
    }
    const auto r = zefoz::zefoz_search(ion->model, to_selector(sel), to_field(start), grid, tol);
    *found = r.points.size();
    for (size_t k = 0; k < r.points.size() && k < capacity; ++k) {
      const auto& p = r.points[k];
      zf_zefoz_point& o = points[k];
      for (int a = 0; a < 3; ++a) {
        o.field[a] = p.field[a];
        o.curvature[a] = p.curvature(a, a);
        o.signature[a] = p.hessian_signature[a];
      }
      o.omega0 = p.omega0;
      o.gradient_residual = p.gradient_residual;
    }
    if (!r.found()) return fail(ZF_NOT_FOUND, "no stationary point inside the search bounds");
    return ZF_OK;
  });
}

zf_status zf_spin_linewidth(double gamma0, const double delta_b[3], const double curvatures[3],
                            const double offset[3], double* out) {
  if (!delta_b || !curvatures || !offset || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    zefoz::NoiseModel noise;
    noise.gamma0 = gamma0;
    noise.delta_b = to_field(delta_b);
    noise.curvatures = to_field(curvatures);
    *out = zefoz::spin_linewidth(noise, to_field(offset));
    return ZF_OK;
  });
}

zf_status zf_config_parse(const char* text, zf_config** out) {
  if (!text || !out) return fail(ZF_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = new zf_config{zefoz::parse_config(text)};
    return ZF_OK;
  });
}

zf_status zf_config_echo(const zf_config* config, char* buf, size_t capacity, size_t* needed) {
  if (!config) return fail(ZF_INVALID_ARGUMENT, "null config");
  return guard([&] { return copy_out(zefoz::echo_config(config->config), buf, capacity, needed); });
}

void zf_config_destroy(zf_config* config) { delete config; }

int zf_run(const zf_config* config, const char* base_dir, const char* output_path) {
  if (!config) {
    fail(ZF_INVALID_ARGUMENT, "null config");
    return zefoz::kExitConfig;
  }
  zefoz::RunOptions options;
  if (base_dir) options.base_dir = base_dir;
  if (output_path) options.output_override = std::filesystem::path(output_path);
  std::ostringstream err;
  const int code = zefoz::run(config->config, options, std::cout, err);
  g_last_error = err.str();
  std::cerr << g_last_error;
  return code;
}

int zf_run_file(const char* config_path, const char* output_path) {
  if (!config_path) {
    fail(ZF_INVALID_ARGUMENT, "null config path");
    return zefoz::kExitConfig;
  }
  std::optional<std::filesystem::path> out;
  if (output_path) out = std::filesystem::path(output_path);
  std::ostringstream err;
  const int code = zefoz::run_file(config_path, out, std::cout, err);
  g_last_error = err.str();
  std::cerr << g_last_error;
  return code;
}

}  // extern "C"
