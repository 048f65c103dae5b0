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

#include "zefoz/eit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zefoz/error.hpp"
#include "zefoz/faddeeva.hpp"

namespace zefoz {

namespace {

constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

cplx averaged_gauss_hermite(double d2, const LambdaParams& p) {
  const auto [nodes, weights] = gauss_hermite(p.quadrature_nodes);
  const double sigma = p.optical_inhom_fwhm * kFwhmToSigma;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    acc += weights[k] * susceptibility(std::numbers::sqrt2 * sigma * nodes[k], d2, p);
  return acc / std::sqrt(std::numbers::pi);
}

}  // namespace

void NoiseModel::validate() const {
  if (!(gamma0 >= 0.0)) throw InvalidParameter("noise gamma0 must be >= 0");
  for (int a = 0; a < 3; ++a) {
    if (!(delta_b[a] >= 0.0)) throw InvalidParameter("noise deltaB components must be >= 0");
    if (!std::isfinite(curvatures[a])) throw InvalidParameter("noise curvatures must be finite");
  }
}

NoiseModel with_curvatures(NoiseModel noise, const ZefozPoint& point) {
  noise.curvatures = {point.s2x(), point.s2y(), point.s2z()};
  return noise;
}

double spin_linewidth(const NoiseModel& noise, const FieldVector& dB) {
  noise.validate();
  double g = noise.gamma0;
  for (int a = 0; a < 3; ++a) {
    const double rms = noise.delta_b[a];
    g += 1e-3 * std::abs(noise.curvatures[a]) * rms *
         std::sqrt(2.0 * rms * rms + 4.0 * dB[a] * dB[a]);
  }
  return g;
}

void LambdaParams::validate() const {
  for (double r : {rabi_coupling, optical_dephasing, spin_dephasing, optical_inhom_fwhm}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidParameter("Lambda rates must be finite and >= 0");
  }
  if (!std::isfinite(two_photon_offset)) throw InvalidParameter("two-photon offset must be finite");
  if (quadrature_nodes < 1) throw InvalidParameter("quadrature node count must be >= 1");
}

void CombModel::validate() const {
  if (n_lines < 1 || n_lines % 2 == 0) throw InvalidParameter("comb line count must be odd and >= 1");
  if (!(resolved_spacing() > 0.0)) throw InvalidParameter("comb spacing must be positive");
  if (scheme == CombWeights::Custom) {
    if (static_cast<int>(custom_weights.size()) != n_lines)
      throw InvalidParameter("custom comb weights need one entry per line");
    double sum = 0.0;
    for (double w : custom_weights) {
      if (!(w >= 0.0)) throw InvalidParameter("comb weights must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidParameter("custom comb weights must sum to 1");
  }
}

double CombModel::resolved_spacing() const {
  return spacing ? *spacing : gyromagnetic * std::abs(reference_field);
}

std::vector<double> CombModel::weights() const {
  std::vector<double> w(static_cast<std::size_t>(n_lines));
  switch (scheme) {
    case CombWeights::Binomial:
      for (int k = 0; k < n_lines; ++k)
        w[k] = binomial(n_lines - 1, k) / std::pow(2.0, n_lines - 1);
      break;
    case CombWeights::Flat:
      std::fill(w.begin(), w.end(), 1.0 / n_lines);
      break;
    case CombWeights::Custom:
      w = custom_weights;
      break;
  }
  return w;
}

std::vector<double> CombModel::shifts() const {
  const double s = resolved_spacing();
  std::vector<double> out(static_cast<std::size_t>(n_lines));
  for (int k = 0; k < n_lines; ++k) out[k] = (k - 0.5 * (n_lines - 1)) * s;
  return out;
}

cplx susceptibility(double probe_detuning, double two_photon_detuning, const LambdaParams& p) {
  p.validate();
  if (p.optical_dephasing == 0.0)
    throw ComputationError("singular Lambda parameters: optical dephasing must be positive");
  const cplx i(0.0, 1.0);
  const cplx spin = p.spin_dephasing + i * two_photon_detuning;
  const cplx optical = p.optical_dephasing + i * probe_detuning;
  const double coupling = 0.25 * p.rabi_coupling * p.rabi_coupling;
  if (coupling == 0.0) return i * p.optical_dephasing / optical;
  const cplx denom = optical * spin + coupling;
  if (denom == cplx(0.0)) return 0.0;
  return i * p.optical_dephasing * spin / denom;
}

cplx averaged_susceptibility(double two_photon_detuning, const LambdaParams& p) {
  p.validate();
  if (p.optical_dephasing == 0.0)
    throw ComputationError("singular Lambda parameters: optical dephasing must be positive");
  if (p.optical_inhom_fwhm == 0.0) return susceptibility(0.0, two_photon_detuning, p);
  if (p.inhom_method == InhomogeneousMethod::GaussHermite)
    return averaged_gauss_hermite(two_photon_detuning, p);

  // chi = g_ge / (dp - zeta) with zeta = i G_eff, a single pole in the upper
  // half plane; its Gaussian average is a scaled Faddeeva function.
  const cplx i(0.0, 1.0);
  const cplx spin = p.spin_dephasing + i * two_photon_detuning;
  const double coupling = 0.25 * p.rabi_coupling * p.rabi_coupling;
  if (coupling > 0.0 && spin == cplx(0.0)) return 0.0;  // dark state for every ion
  const cplx gamma_eff = p.optical_dephasing + (coupling > 0.0 ? coupling / spin : cplx(0.0));
  const double sigma = p.optical_inhom_fwhm * kFwhmToSigma;
  const cplx zeta = i * gamma_eff;
  return i * p.optical_dephasing * std::sqrt(0.5 * std::numbers::pi) / sigma *
         faddeeva(zeta / (sigma * std::numbers::sqrt2));
}

EitProfile eit_profile(const CombModel& comb, const LambdaParams& p, const NoiseModel& noise,
                       const FieldVector& dB, std::span<const double> grid) {
  comb.validate();
  p.validate();
  noise.validate();
  if (grid.empty()) throw InvalidParameter("EIT detuning grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw InvalidParameter("EIT detuning grid must be ascending");

  EitProfile out;
  out.linewidth = spin_linewidth(noise, dB);
  const std::vector<double> weights = comb.weights();
  std::vector<double> shifts = comb.shifts();
  for (double& s : shifts) s += p.two_photon_offset;
  out.narrow_grid = grid.front() > shifts.front() || grid.back() < shifts.back();

  LambdaParams line = p;
  double gauss_fwhm = 0.0;
  if (p.broadening == SpinBroadening::Voigt) {
    line.spin_dephasing = 0.5 * noise.gamma0;
    gauss_fwhm = out.linewidth - noise.gamma0;
  } else {
    line.spin_dephasing = 0.5 * out.linewidth;
  }
  LambdaParams off = line;
  off.rabi_coupling = 0.0;
  const double norm = averaged_susceptibility(0.0, off).imag();
  if (!(norm > 0.0)) throw ComputationError("EIT: zero absorption without coupling field");

  // Field-noise kernel: trapezoid nodes over +-6 sigma on a step resolving the
  // narrowest feature of the per-class response.
  std::vector<double> offsets{0.0};
  std::vector<double> kernel{1.0};
  const double sigma = gauss_fwhm * kFwhmToSigma;
  if (sigma > 0.0) {
    const double inhom_sigma = std::max(p.optical_inhom_fwhm * kFwhmToSigma, p.optical_dephasing);
    const double feature = line.spin_dephasing +
                           0.25 * p.rabi_coupling * p.rabi_coupling / (inhom_sigma + p.optical_dephasing);
    const double step = std::max(std::min(sigma, std::max(feature, 1e-3)) / 6.0, sigma / 2000.0);
    const int half = static_cast<int>(std::ceil(6.0 * sigma / step));
    offsets.clear();
    kernel.clear();
    double total = 0.0;
    for (int j = -half; j <= half; ++j) {
      const double u = j * step;
      offsets.push_back(u);
      kernel.push_back(std::exp(-0.5 * u * u / (sigma * sigma)));
      total += kernel.back();
    }
    for (double& k : kernel) k /= total;
  }

  const std::size_t n = grid.size();
  out.detuning.assign(grid.begin(), grid.end());
  out.alpha_off.assign(n, 1.0);
  out.alpha_on.assign(n, 0.0);
  out.transmission.assign(n, 1.0);
  for (std::size_t g = 0; g < n; ++g) {
    double acc = 0.0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
      if (weights[c] == 0.0) continue;
      double cls = 0.0;
      for (std::size_t j = 0; j < offsets.size(); ++j)
        cls += kernel[j] * averaged_susceptibility(grid[g] - shifts[c] - offsets[j], line).imag();
      acc += weights[c] * cls;
    }
    out.alpha_on[g] = acc / norm;
    out.transmission[g] = std::exp(out.alpha_off[g] - out.alpha_on[g]);
  }
  out.amplitude = eit_amplitude(out);
  return out;
}

double eit_amplitude(const EitProfile& profile) {
  if (profile.detuning.empty()) throw InvalidParameter("EIT profile is empty");
  std::size_t best = 0;
  double best_contrast = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.detuning.size(); ++k) {
    const double off = profile.alpha_off[k];
    const double contrast = off > 0.0 ? (off - profile.alpha_on[k]) / off
                                      : -std::numeric_limits<double>::infinity();
    if (contrast > best_contrast) {
      best_contrast = contrast;
      best = k;
    }
  }
  if (!(profile.alpha_off[best] > 0.0))
    throw ComputationError("EIT amplitude undefined: alpha_off is zero");
  return std::clamp(best_contrast, 0.0, 1.0);
}

std::vector<SweepRow> amplitude_vs_field(const ZefozPoint& point, const NoiseModel& noise,
                                         const LambdaParams& p, const CombModel& comb,
                                         const FieldGrid& sweep, const IonModel* exact,
                                         const TransitionSelector& sel) {
  sweep.validate();
  int free_axes = 0;
  for (const auto& a : sweep.axes) free_axes += a.free() ? 1 : 0;
  if (free_axes > 1) throw InvalidParameter("amplitude sweep must be one-dimensional");

  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    SweepRow row;
    row.field = sweep.point(k);
    const FieldVector dB = row.field - point.field;
    row.omega12 = quadratic_model(point, dB);
    row.omega12_exact = exact ? transition_frequency(*exact, row.field, sel)
                              : std::numeric_limits<double>::quiet_NaN();
    CombModel local = comb;
    if (!local.spacing) local.reference_field = row.field.norm();
    // Window of one and a half comb spacings around the centre resonance.
    const double span = 1.5 * local.resolved_spacing();
    std::vector<double> grid;
    constexpr int kWindow = 121;
    for (int j = 0; j < kWindow; ++j)
      grid.push_back(p.two_photon_offset - span + 2.0 * span * j / (kWindow - 1));
    const EitProfile profile = eit_profile(local, p, noise, dB, grid);
    row.linewidth = profile.linewidth;
    row.amplitude = profile.amplitude;
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  const std::size_t n = values.size();
  std::size_t k = 1;
  while (k + 1 < n) {
    if (values[k] > values[k - 1]) {
      std::size_t end = k;
      while (end + 1 < n && values[end + 1] == values[k]) ++end;
      if (end + 1 < n && values[end + 1] < values[k]) out.push_back(k + (end - k) / 2);
      k = end + 1;
    } else {
      ++k;
    }
  }
  return out;
}

double full_width_half_max(std::span<const double> x, std::span<const double> y,
                           double baseline) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidParameter("FWHM needs matching samples");
  const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = baseline + 0.5 * (y[peak] - baseline);
  std::size_t lo = peak;
  while (lo > 0 && y[lo - 1] >= half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < y.size() && y[hi + 1] >= half) ++hi;
  if (lo == 0 || hi + 1 == y.size()) throw ComputationError("FWHM: half maximum outside the grid");
  auto cross = [&](std::size_t a, std::size_t b) {
    return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
  };
  return cross(hi, hi + 1) - cross(lo - 1, lo);
}

}  // namespace zefoz
