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

#include "zefoz/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "zefoz/error.hpp"

namespace zefoz {

Eigen::MatrixXcd TransitionOperator::electron_matrix(double s) const {
  const SpinMatrices m = spin_matrices(s);
  const auto d = m.z.rows();
  switch (kind) {
    case Kind::Identity: return Eigen::MatrixXcd::Identity(d, d);
    case Kind::Sx: return m.x;
    case Kind::Sy: return m.y;
    case Kind::Sz: return m.z;
    case Kind::SPlus: return m.plus();
    case Kind::SMinus: return m.minus();
    case Kind::Custom:
      if (custom.rows() != d || custom.cols() != d)
        throw InvalidParameter("custom transition operator must act on the electron-spin space");
      if (!custom.allFinite()) throw InvalidParameter("custom transition operator is not finite");
      return custom;
  }
  return m.x;
}

Eigen::MatrixXcd TransitionOperator::full(const SpinBasis& basis) const {
  return electron_operator(basis, electron_matrix(basis.electron_spin()));
}

TransitionOperator TransitionOperator::adjoint() const {
  TransitionOperator out = *this;
  switch (kind) {
    case Kind::SPlus: out.kind = Kind::SMinus; break;
    case Kind::SMinus: out.kind = Kind::SPlus; break;
    case Kind::Custom: out.custom = custom.adjoint(); break;
    default: break;
  }
  return out;
}

TransitionOperator TransitionOperator::parse(const std::string& name) {
  TransitionOperator op;
  if (name == "identity") op.kind = Kind::Identity;
  else if (name == "sx") op.kind = Kind::Sx;
  else if (name == "sy") op.kind = Kind::Sy;
  else if (name == "sz") op.kind = Kind::Sz;
  else if (name == "s+" || name == "splus") op.kind = Kind::SPlus;
  else if (name == "s-" || name == "sminus") op.kind = Kind::SMinus;
  else throw InvalidParameter("unknown transition operator '" + name + "'");
  return op;
}

std::string TransitionOperator::name() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::Sx: return "sx";
    case Kind::Sy: return "sy";
    case Kind::Sz: return "sz";
    case Kind::SPlus: return "splus";
    case Kind::SMinus: return "sminus";
    case Kind::Custom: return "custom";
  }
  return "sx";
}

void SpectrumParams::validate() const {
  if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
  if (!(inhom_fwhm > 0.0)) throw InvalidParameter("inhomogeneous FWHM must be positive");
  if (!(boltzmann_constant > 0.0)) throw InvalidParameter("Boltzmann constant must be positive");
  if (grid_count < 1 || !(grid_stop >= grid_start))
    throw InvalidParameter("spectrum grid needs count >= 1 and stop >= start");
}

Eigen::VectorXd boltzmann_weights(const LevelSet& levels, double temperature,
                                  double boltzmann_constant) {
  if (!(temperature > 0.0)) throw InvalidParameter("temperature must be positive");
  if (!(boltzmann_constant > 0.0)) throw InvalidParameter("Boltzmann constant must be positive");
  const double kt = boltzmann_constant * temperature;
  const double e0 = levels.energies.minCoeff();
  Eigen::VectorXd w = ((levels.energies.array() - e0) / -kt).exp().matrix();
  return w / w.sum();
}

std::vector<TransitionLine> transition_table(const LevelSet& ground, const LevelSet& excited,
                                             const TransitionOperator& op,
                                             const SpectrumParams& spectrum) {
  spectrum.validate();
  if (!(ground.basis == excited.basis) || ground.size() != excited.size())
    throw InvalidParameter("ground and excited level sets have different Hilbert spaces");
  const Eigen::MatrixXcd o = op.full(ground.basis);
  // amplitudes(e, g) = <e|O|g>
  const Eigen::MatrixXcd amplitudes = excited.vectors.adjoint() * o * ground.vectors;
  const Eigen::VectorXd weights =
      boltzmann_weights(ground, spectrum.temperature, spectrum.boltzmann_constant);

  std::vector<TransitionLine> table;
  table.reserve(static_cast<std::size_t>(ground.size() * excited.size()));
  for (int g = 0; g < ground.size(); ++g) {
    for (int e = 0; e < excited.size(); ++e) {
      TransitionLine line;
      line.ground_label = g + 1;
      line.excited_label = e + 1;
      line.frequency = excited.energies[e] - ground.energies[g] + spectrum.optical_origin;
      line.strength = std::norm(amplitudes(e, g));
      line.population_weight = weights[g];
      table.push_back(line);
    }
  }
  return table;
}

std::vector<LambdaSystem> find_lambda_systems(const std::vector<TransitionLine>& table,
                                              double max_asymmetry, double max_leakage_ratio,
                                              double min_strength) {
  for (double t : {max_asymmetry, max_leakage_ratio, min_strength}) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidParameter("Lambda thresholds must lie in [0, 1]");
  }
  std::vector<int> excited_labels;
  for (const auto& l : table) excited_labels.push_back(l.excited_label);
  std::sort(excited_labels.begin(), excited_labels.end());
  excited_labels.erase(std::unique(excited_labels.begin(), excited_labels.end()),
                       excited_labels.end());

  std::vector<LambdaSystem> out;
  for (int e : excited_labels) {
    std::vector<const TransitionLine*> legs;
    for (const auto& l : table)
      if (l.excited_label == e) legs.push_back(&l);
    std::sort(legs.begin(), legs.end(), [](auto* a, auto* b) { return a->ground_label < b->ground_label; });
    for (std::size_t a = 0; a < legs.size(); ++a) {
      if (legs[a]->strength < min_strength) continue;
      for (std::size_t b = a + 1; b < legs.size(); ++b) {
        if (legs[b]->strength < min_strength) continue;
        LambdaSystem s;
        s.ground_a = legs[a]->ground_label;
        s.ground_b = legs[b]->ground_label;
        s.excited = e;
        s.strength_a = legs[a]->strength;
        s.strength_b = legs[b]->strength;
        for (std::size_t c = 0; c < legs.size(); ++c) {
          if (c != a && c != b) s.leakage = std::max(s.leakage, legs[c]->strength);
        }
        s.asymmetry = std::abs(s.strength_a - s.strength_b) / (s.strength_a + s.strength_b);
        s.two_photon = std::abs(legs[a]->frequency - legs[b]->frequency);
        const double weaker = std::min(s.strength_a, s.strength_b);
        if (s.asymmetry > max_asymmetry) continue;
        if (s.leakage > max_leakage_ratio * weaker) continue;
        out.push_back(s);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LambdaSystem& x, const LambdaSystem& y) {
    const double wx = std::min(x.strength_a, x.strength_b);
    const double wy = std::min(y.strength_a, y.strength_b);
    return std::tie(x.asymmetry, wy, x.excited, x.ground_a, x.ground_b) <
           std::tie(y.asymmetry, wx, y.excited, y.ground_a, y.ground_b);
  });
  return out;
}

double line_shape(LineProfile profile, double fwhm, double detuning) {
  if (profile == LineProfile::Gaussian) {
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    return std::exp(-0.5 * detuning * detuning / (sigma * sigma)) /
           (sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  const double hwhm = 0.5 * fwhm;
  return hwhm / (std::numbers::pi * (detuning * detuning + hwhm * hwhm));
}

Spectrum absorption_spectrum(const std::vector<TransitionLine>& table,
                             const SpectrumParams& spectrum) {
  spectrum.validate();
  Spectrum out;
  const int n = spectrum.grid_count;
  out.frequency.resize(static_cast<std::size_t>(n));
  out.optical_depth.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    out.frequency[k] = n == 1 ? spectrum.grid_start
                              : spectrum.grid_start + (spectrum.grid_stop - spectrum.grid_start) *
                                                          static_cast<double>(k) / (n - 1);
  }
  for (const auto& line : table) {
    const double amp = line.strength * line.population_weight;
    if (amp == 0.0) continue;
    for (int k = 0; k < n; ++k)
      out.optical_depth[k] +=
          amp * line_shape(spectrum.profile, spectrum.inhom_fwhm, out.frequency[k] - line.frequency);
  }
  return out;
}

}  // namespace zefoz
