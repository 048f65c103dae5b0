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

#ifndef ZEFOZ_EIT_HPP
#define ZEFOZ_EIT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zefoz/field_map.hpp"
#include "zefoz/spin_system.hpp"

namespace zefoz {

/// 19F nuclear gyromagnetic ratio, MHz/mT.
inline constexpr double kFluorineGyromagnetic = 0.04006;

/// Magnetic-noise linewidth model around a ZEFOZ point. Curvatures are the
/// quadratic coefficients S2x, S2y, S2z in kHz/mT^2.
struct NoiseModel {
  double gamma0 = 0.5;                  // MHz, FWHM
  FieldVector delta_b{1.0, 1.0, 1.0};   // mT
  FieldVector curvatures{-52.7, -52.7, 185.3};

  void validate() const;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Copy of `noise` with curvatures taken from a located ZEFOZ point.
NoiseModel with_curvatures(NoiseModel noise, const ZefozPoint& point);

/// Two-photon linewidth (FWHM, MHz) at field offset dB from the ZEFOZ point:
///   G = G0 + sum_i |S2i| dBi_rms sqrt(2 dBi_rms^2 + 4 dB_i^2)
double spin_linewidth(const NoiseModel& noise, const FieldVector& dB);

// How the field-noise part of the two-photon linewidth enters the profile.
//   Voigt: Lorentzian spin dephasing G0/2 in chi, convolved with a Gaussian
//          of FWHM G(dB) - G0 over two-photon detuning.
//   Lorentzian: spin dephasing G(dB)/2 directly in chi.
enum class SpinBroadening { Voigt, Lorentzian };
enum class InhomogeneousMethod { Exact, GaussHermite };

/// All rates are half-widths in MHz (linear frequency).
struct LambdaParams {
  double rabi_coupling = 3.0;       // Omega_c
  double optical_dephasing = 0.25;  // gamma_ge
  double spin_dephasing = 0.0;      // gamma_gs, for direct susceptibility calls
  double optical_inhom_fwhm = 35.0;
  double two_photon_offset = 0.0;
  SpinBroadening broadening = SpinBroadening::Voigt;
  InhomogeneousMethod inhom_method = InhomogeneousMethod::Exact;
  int quadrature_nodes = 64;

  void validate() const;
  friend bool operator==(const LambdaParams&, const LambdaParams&) = default;
};

enum class CombWeights { Binomial, Flat, Custom };

/// Superhyperfine comb: n equidistant, independent Lambda classes.
struct CombModel {
  int n_lines = 9;
  std::optional<double> spacing;  // MHz; unset means gyromagnetic * reference_field
  double gyromagnetic = kFluorineGyromagnetic;
  double reference_field = 63.6;  // mT
  CombWeights scheme = CombWeights::Binomial;
  std::vector<double> custom_weights;

  void validate() const;
  double resolved_spacing() const;
  std::vector<double> weights() const;
  /// Two-photon shift of each class relative to the comb centre.
  std::vector<double> shifts() const;
  friend bool operator==(const CombModel&, const CombModel&) = default;
};

/// Weak-probe Lambda susceptibility, normalized so Im chi = 1 at Omega_c = 0
/// and zero probe detuning:
///   chi = i g_ge (g_gs + i d2) / [(g_ge + i dp)(g_gs + i d2) + (Omega_c/2)^2]
cplx susceptibility(double probe_detuning, double two_photon_detuning, const LambdaParams& p);

/// chi averaged over a Gaussian distribution of probe detunings with FWHM
/// optical_inhom_fwhm, using p.spin_dephasing.
cplx averaged_susceptibility(double two_photon_detuning, const LambdaParams& p);

struct EitProfile {
  std::vector<double> detuning;      // MHz, two-photon detuning
  std::vector<double> alpha_off;     // relative, 1 at line centre
  std::vector<double> alpha_on;
  std::vector<double> transmission;  // exp(alpha_off - alpha_on), on/off ratio
  double amplitude = 0.0;
  double linewidth = 0.0;            // spin_linewidth at dB, MHz
  bool narrow_grid = false;          // grid does not cover the comb
};

EitProfile eit_profile(const CombModel& comb, const LambdaParams& p, const NoiseModel& noise,
                       const FieldVector& dB, std::span<const double> grid);

/// (alpha_off - alpha_on) / alpha_off at the grid point of largest contrast.
double eit_amplitude(const EitProfile& profile);

struct SweepRow {
  FieldVector field;
  double omega12 = 0.0;        // quadratic model, MHz
  double omega12_exact = 0.0;  // direct diagonalization (NaN without a model)
  double linewidth = 0.0;
  double amplitude = 0.0;
};

/// EIT amplitude and two-photon frequency along a field sweep through a
/// ZEFOZ point. With `exact` set, each row also carries the diagonalized
/// frequency of `sel`.
std::vector<SweepRow> amplitude_vs_field(const ZefozPoint& point, const NoiseModel& noise,
                                         const LambdaParams& p, const CombModel& comb,
                                         const FieldGrid& sweep, const IonModel* exact = nullptr,
                                         const TransitionSelector& sel = {});

/// Indices of strict local maxima; plateaus count once.
std::vector<std::size_t> local_maxima(std::span<const double> values);

/// Full width at half of (max - baseline) around the global maximum, by
/// linear interpolation.
double full_width_half_max(std::span<const double> x, std::span<const double> y,
                           double baseline);

}  // namespace zefoz

#endif
