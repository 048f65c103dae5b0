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

/* C interface to the zefoz library. Every handle is opaque; every function
 * that can fail returns a zf_status and leaves a message for zf_last_error()
 * on the calling thread. Fields are in mT, frequencies in MHz. */

#ifndef ZEFOZ_C_H_
#define ZEFOZ_C_H_

#include <stddef.h>

#if defined(_WIN32)
#define ZF_API __declspec(dllexport)
#else
#define ZF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zf_status {
  ZF_OK = 0,
  ZF_INVALID_ARGUMENT = 1, /* null pointer, bad label, bad enum value */
  ZF_INVALID_PARAMETER = 2,
  ZF_COMPUTATION = 3,
  ZF_NOT_FOUND = 4,
  ZF_CONFIG = 5,
  ZF_IO = 6,
  ZF_BUFFER_TOO_SMALL = 7,
  ZF_INTERNAL = 8
} zf_status;

typedef enum zf_manifold { ZF_GROUND = 0, ZF_EXCITED = 1, ZF_OPTICAL = 2 } zf_manifold;

typedef struct zf_ion zf_ion;
typedef struct zf_levels zf_levels;
typedef struct zf_config zf_config;

/* Pair of 1-based labels; for ZF_OPTICAL level_i is ground, level_j excited. */
typedef struct zf_selector {
  int manifold;
  int level_i;
  int level_j;
} zf_selector;

typedef struct zf_zefoz_point {
  double field[3];
  double omega0;
  double gradient_residual;
  double curvature[3]; /* S2x, S2y, S2z in kHz/mT^2 */
  int signature[3];
} zf_zefoz_point;

ZF_API const char* zf_version(void);
/* Message of the last failure on this thread, "" if none. */
ZF_API const char* zf_last_error(void);

/* Ion parameters (ground and excited manifolds). */
ZF_API zf_status zf_ion_create_default(zf_ion** out);
ZF_API zf_status zf_ion_load(const char* path, zf_ion** out);
ZF_API zf_status zf_ion_parse(const char* text, zf_ion** out);
/* key is one of S, I, g_par, g_perp, A, B_hf, P, mu_B. */
ZF_API zf_status zf_ion_set(zf_ion* ion, int manifold, const char* key, double value);
ZF_API zf_status zf_ion_get(const zf_ion* ion, int manifold, const char* key, double* out);
ZF_API void zf_ion_destroy(zf_ion* ion);

/* Sorted levels of one manifold at one field. */
ZF_API zf_status zf_levels_compute(const zf_ion* ion, int manifold, const double field[3],
                                   zf_levels** out);
ZF_API int zf_levels_count(const zf_levels* levels);
ZF_API zf_status zf_levels_energy(const zf_levels* levels, int label, double* out);
/* <m_i, m_s | label> in the fixed gauge. */
ZF_API zf_status zf_levels_amplitude(const zf_levels* levels, int label, double m_i, double m_s,
                                     double* re, double* im);
ZF_API void zf_levels_destroy(zf_levels* levels);

ZF_API zf_status zf_transition_frequency(const zf_ion* ion, zf_selector sel, const double field[3],
                                         double* out);
/* Hellmann-Feynman gradient, MHz/mT. */
ZF_API zf_status zf_gradient(const zf_ion* ion, zf_selector sel, const double field[3],
                             double out[3]);
/* Row-major 3x3 quadratic-form coefficients, kHz/mT^2. */
ZF_API zf_status zf_curvature(const zf_ion* ion, zf_selector sel, const double field[3],
                              double out[9]);
/* bounds: start, stop, count for x, y, z. Writes up to `capacity` points and
 * sets *found to the total; ZF_NOT_FOUND when there are none. */
ZF_API zf_status zf_zefoz_search(const zf_ion* ion, zf_selector sel, const double start[3],
                                 const double bounds[9], double tol, zf_zefoz_point* points,
                                 size_t capacity, size_t* found);

ZF_API zf_status zf_spin_linewidth(double gamma0, const double delta_b[3],
                                   const double curvatures[3], const double offset[3],
                                   double* out);

ZF_API zf_status zf_config_parse(const char* text, zf_config** out);
/* Copies the canonical echo into buf (NUL-terminated); *needed is the full
 * size including the terminator. */
ZF_API zf_status zf_config_echo(const zf_config* config, char* buf, size_t capacity,
                                size_t* needed);
ZF_API void zf_config_destroy(zf_config* config);

/* Run a parsed config. output_path may be NULL to use the config's own
 * output. Returns the process exit code: 0, 2 (config) or 3 (computation). */
ZF_API int zf_run(const zf_config* config, const char* base_dir, const char* output_path);
ZF_API int zf_run_file(const char* config_path, const char* output_path);

#ifdef __cplusplus
}
#endif

#endif
