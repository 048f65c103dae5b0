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

#ifndef ZEFOZ_TRANSITIONS_HPP
#define ZEFOZ_TRANSITIONS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zefoz/spin_system.hpp"

namespace zefoz {

/// Electron-spin part of the optical transition operator; the nuclear spin
/// is a spectator. The default S_x models sigma polarization.
struct TransitionOperator {
  enum class Kind { Identity, Sx, Sy, Sz, SPlus, SMinus, Custom };
  Kind kind = Kind::Sx;
  Eigen::MatrixXcd custom;  // (2S+1) x (2S+1), only for Kind::Custom

  /// Electron-space matrix for electron spin s.
  Eigen::MatrixXcd electron_matrix(double s) const;
  /// Full operator in the product basis of `basis`.
  Eigen::MatrixXcd full(const SpinBasis& basis) const;
  TransitionOperator adjoint() const;

  static TransitionOperator parse(const std::string& name);
  std::string name() const;
};

enum class LineProfile { Gaussian, Lorentzian };

struct SpectrumParams {
  double temperature = 2.0;          // K
  double inhom_fwhm = 35.0;          // MHz (about 70 MHz at zero field)
  LineProfile profile = LineProfile::Gaussian;
  double grid_start = -3000.0;       // MHz
  double grid_stop = 3000.0;
  int grid_count = 6001;
  double boltzmann_constant = 2.08366e4;  // MHz/K
  double optical_origin = 0.0;       // MHz

  void validate() const;
  friend bool operator==(const SpectrumParams&, const SpectrumParams&) = default;
};

struct TransitionLine {
  int ground_label = 0;
  int excited_label = 0;
  double frequency = 0.0;          // MHz, E_e - E_g + origin
  double strength = 0.0;           // |<e|O|g>|^2
  double population_weight = 0.0;  // Boltzmann, normalized over ground levels
};

/// Boltzmann weights of a level set, normalized to 1.
Eigen::VectorXd boltzmann_weights(const LevelSet& levels, double temperature,
                                  double boltzmann_constant);

/// Every ground x excited pair, ground label outer.
std::vector<TransitionLine> transition_table(const LevelSet& ground, const LevelSet& excited,
                                             const TransitionOperator& op,
                                             const SpectrumParams& spectrum);

struct LambdaSystem {
  int ground_a = 0;
  int ground_b = 0;
  int excited = 0;
  double strength_a = 0.0;
  double strength_b = 0.0;
  double leakage = 0.0;    // strongest other ground line from `excited`
  double asymmetry = 0.0;  // |sa - sb| / (sa + sb)
  double two_photon = 0.0; // |f_a - f_b|, MHz
};

/// Symmetric Lambda systems: both legs >= min_strength, asymmetry <=
/// max_asymmetry, leakage / min(leg) <= max_leakage_ratio. Sorted by
/// asymmetry, then by decreasing weaker leg.
std::vector<LambdaSystem> find_lambda_systems(const std::vector<TransitionLine>& table,
                                              double max_asymmetry, double max_leakage_ratio,
                                              double min_strength);

struct Spectrum {
  std::vector<double> frequency;      // MHz
  std::vector<double> optical_depth;  // relative
};

/// Unit-area profile of the given FWHM centred at zero.
double line_shape(LineProfile profile, double fwhm, double detuning);

Spectrum absorption_spectrum(const std::vector<TransitionLine>& table,
                             const SpectrumParams& spectrum);

}  // namespace zefoz

#endif
