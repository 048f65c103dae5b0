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
#include <numbers>

#include "oracles.hpp"
#include "zefoz/eit.hpp"
#include "zefoz/error.hpp"
#include "zefoz/faddeeva.hpp"

using namespace zefoz;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

// w(z) = (i/pi) int exp(-t^2) / (z - t) dt for Im z > 0, dense trapezoid.
std::complex<double> faddeeva_quadrature(std::complex<double> z) {
  const double h = 1e-3;
  std::complex<double> s = 0.0;
  for (double t = -12.0; t <= 12.0; t += h) s += std::exp(-t * t) / (z - t);
  return std::complex<double>(0, 1) / std::numbers::pi * s * h;
}

// Gaussian average of chi over probe detuning, dense trapezoid.
std::complex<double> averaged_quadrature(double d2, const LambdaParams& p) {
  const double sigma = p.optical_inhom_fwhm / (2 * std::sqrt(2 * std::log(2.0)));
  const double h = std::min(sigma, p.optical_dephasing) / 40;
  std::complex<double> s = 0.0;
  double wsum = 0.0;
  for (double x = -10 * sigma; x <= 10 * sigma; x += h) {
    const double w = std::exp(-0.5 * x * x / (sigma * sigma));
    s += w * susceptibility(x, d2, p);
    wsum += w;
  }
  return s / wsum;
}

NoiseModel reference_noise() { return NoiseModel{}; }

double eq6(const NoiseModel& n, const FieldVector& d) {
  double g = n.gamma0;
  for (int a = 0; a < 3; ++a)
    g += std::abs(n.curvatures[a]) * 1e-3 * n.delta_b[a] *
         std::sqrt(2 * n.delta_b[a] * n.delta_b[a] + 4 * d[a] * d[a]);
  return g;
}

}  // namespace

TEST_CASE("Faddeeva function") {
  CHECK(std::abs(faddeeva({0, 0}) - 1.0) < 1e-13);
  for (double y : {0.01, 0.3, 1.0, 4.0, 30.0}) {
    // exp(y^2) erfc(y) overflows for large y; use the asymptotic series there
    const double expect = y < 10 ? std::exp(y * y) * std::erfc(y)
                                 : (1 - 0.5 / (y * y) + 0.75 / std::pow(y, 4) - 1.875 / std::pow(y, 6)) /
                                       (y * std::sqrt(M_PI));
    CHECK(std::abs(faddeeva({0, y}) - expect) < 1e-12 * std::max(1.0, expect));
  }
  for (auto z : {std::complex<double>(1.5, 0.2), {-3.0, 1.0}, {0.4, 2.5}, {7.0, 0.05}}) {
    CHECK(std::abs(faddeeva(z) - faddeeva_quadrature(z)) < 1e-6);
  }
  CHECK_THROWS_AS(faddeeva({0, -1}), InvalidParameter);
}

TEST_CASE("Gauss-Hermite rule") {
  for (int n : {1, 5, 64}) {
    const auto [x, w] = gauss_hermite(n);
    double s0 = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
      s0 += w[k];
      s2 += w[k] * x[k] * x[k];
    }
    CHECK(s0 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    if (n > 1) CHECK(s2 == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-12));
  }
}

TEST_CASE("spin linewidth") {
  const NoiseModel n = reference_noise();
  CHECK(spin_linewidth(n, {}) == doctest::Approx(eq6(n, {})).epsilon(1e-14));
  CHECK(std::abs(spin_linewidth(n, {}) - 0.911) < 1e-3);
  CHECK(std::abs(spin_linewidth(n, {0, 0, 7}) - 3.26) < 0.02);
  CHECK(spin_linewidth(n, {0, 0, 7}) > 2.8);
  NoiseModel zero;
  zero.gamma0 = 0;
  zero.delta_b = {0, 0, 0};
  CHECK(spin_linewidth(zero, {3, -4, 7}) == 0.0);
  auto g = oracle::rng(9);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 500; ++t) {
    const FieldVector d{u(g), u(g), u(g)};
    CHECK(spin_linewidth(n, d) > spin_linewidth(n, {}));
    CHECK(spin_linewidth(n, d) == doctest::Approx(eq6(n, d)).epsilon(1e-13));
    FieldVector more = d;
    more.z *= 1.5;
    CHECK(spin_linewidth(n, more) >= spin_linewidth(n, d));
  }
  NoiseModel bad;
  bad.gamma0 = -1;
  CHECK_THROWS_AS(spin_linewidth(bad, {}), InvalidParameter);
}

TEST_CASE("susceptibility limits") {
  LambdaParams p;
  p.rabi_coupling = 2.0;
  p.optical_dephasing = 1.0;
  p.spin_dephasing = 0.0;
  CHECK(susceptibility(0.7, 0.0, p) == std::complex<double>(0.0));

  p.rabi_coupling = 0.0;
  CHECK(susceptibility(0.0, 0.0, p).imag() == doctest::Approx(1.0));
  CHECK(susceptibility(1.0, 3.0, p).imag() == doctest::Approx(0.5));  // FWHM 2 gamma_ge

  // window FWHM Omega^2 / (2 gamma_ge) for weak coupling, from a dense scan
  p.rabi_coupling = 0.1;
  const auto d2 = linspace(-0.05, 0.05, 200001);
  std::vector<double> dip(d2.size());
  for (std::size_t k = 0; k < d2.size(); ++k) dip[k] = 1.0 - susceptibility(0.0, d2[k], p).imag();
  CHECK(full_width_half_max(d2, dip, 0.0) == doctest::Approx(0.01 / 2.0).epsilon(1e-3));

  p.rabi_coupling = 0.0;
  p.optical_dephasing = 0.0;
  CHECK_THROWS_AS(susceptibility(0, 0, p), ComputationError);
}

TEST_CASE("susceptibility parity in probe detuning") {
  LambdaParams p;
  p.rabi_coupling = 2.0;
  p.optical_dephasing = 0.7;
  p.spin_dephasing = 0.3;
  for (double dp : {0.1, 0.9, 3.0, 40.0}) {
    const auto a = susceptibility(dp, 0.0, p), b = susceptibility(-dp, 0.0, p);
    CHECK(std::abs(a.real() + b.real()) < 1e-9);
    CHECK(std::abs(a.imag() - b.imag()) < 1e-9);
  }
}

TEST_CASE("inhomogeneous average against dense quadrature") {
  LambdaParams p;
  p.rabi_coupling = 3.0;
  p.optical_dephasing = 0.25;
  p.spin_dephasing = 0.4;
  for (double d2 : {-3.0, -0.2, 0.0, 0.5, 2.0}) {
    const auto ref = averaged_quadrature(d2, p);
    const auto exact = averaged_susceptibility(d2, p);
    CHECK(std::abs(exact - ref) < 1e-6 * std::abs(ref) + 1e-9);
    LambdaParams gh = p;
    gh.inhom_method = InhomogeneousMethod::GaussHermite;
    gh.quadrature_nodes = 64;
    // 64 nodes under-resolve a 0.25 MHz pole against a 35 MHz Gaussian
    const double coarse = std::abs(averaged_susceptibility(d2, gh) - ref);
    gh.quadrature_nodes = 512;
    const double fine = std::abs(averaged_susceptibility(d2, gh) - ref);
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(fine < coarse);
  }
  // wide homogeneous line: Gauss-Hermite converges to the exact result
  p.optical_dephasing = 20.0;
  LambdaParams gh = p;
  gh.inhom_method = InhomogeneousMethod::GaussHermite;
  CHECK(std::abs(averaged_susceptibility(0.3, gh) - averaged_susceptibility(0.3, p)) < 1e-8);
}

TEST_CASE("comb model") {
  CombModel c;
  c.reference_field = 63.6;
  CHECK(c.resolved_spacing() == doctest::Approx(0.04006 * 63.6));
  double sum = 0.0;
  for (double w : c.weights()) sum += w;
  CHECK(sum == 1.0);
  CHECK(c.weights()[4] == doctest::Approx(70.0 / 256));
  c.spacing = 2.8;
  const auto s = c.shifts();
  CHECK(s.front() == doctest::Approx(-11.2));
  CHECK(s.back() == doctest::Approx(11.2));
  c.n_lines = 4;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c.n_lines = 3;
  c.scheme = CombWeights::Custom;
  c.custom_weights = {0.5, 0.6, 0.1};
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("nine-peak comb at the ZEFOZ point") {
  CombModel comb;
  comb.spacing = 2.8;
  const auto grid = linspace(-20, 20, 801);
  const auto prof = eit_profile(comb, LambdaParams{}, reference_noise(), {}, grid);
  const auto peaks = local_maxima(prof.transmission);
  REQUIRE(peaks.size() == 9);
  for (std::size_t k = 1; k < peaks.size(); ++k)
    CHECK(std::abs(grid[peaks[k]] - grid[peaks[k - 1]] - 2.8) <= 0.1);
  CHECK_FALSE(prof.narrow_grid);
  CHECK(prof.amplitude > 0.0);
  CHECK(prof.amplitude <= 1.0);
  CHECK(prof.linewidth == doctest::Approx(spin_linewidth(reference_noise(), {})));
}

TEST_CASE("comb merges 7 mT away from the ZEFOZ point") {
  CombModel comb;
  comb.spacing = 2.8;
  const auto grid = linspace(-30, 30, 1201);
  const auto prof = eit_profile(comb, LambdaParams{}, reference_noise(), {0, 0, 7}, grid);
  CHECK(local_maxima(prof.transmission).size() == 1);
  const double w = full_width_half_max(grid, prof.transmission, 1.0);
  CHECK(w == doctest::Approx(12.0).epsilon(0.25));
}

TEST_CASE("profile invariants") {
  CombModel comb;
  comb.spacing = 2.8;
  const auto grid = linspace(-15, 15, 601);  // symmetric
  for (auto broadening : {SpinBroadening::Voigt, SpinBroadening::Lorentzian}) {
    LambdaParams p;
    p.broadening = broadening;
    const auto prof = eit_profile(comb, p, reference_noise(), {0.5, 0, 1}, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::abs(prof.alpha_on[k] - prof.alpha_on[grid.size() - 1 - k]) < 1e-9);
      CHECK(prof.alpha_off[k] == 1.0);
      CHECK(prof.transmission[k] == doctest::Approx(std::exp(prof.alpha_off[k] - prof.alpha_on[k])));
    }
    // transparency bound at the comb resonances
    const auto res = comb.shifts();
    const auto at = eit_profile(comb, p, reference_noise(), {}, res);
    for (std::size_t k = 0; k < res.size(); ++k) {
      CHECK(at.alpha_on[k] >= -1e-9);
      CHECK(at.alpha_on[k] <= at.alpha_off[k] + 1e-9);
    }
  }
}

TEST_CASE("a comb with one populated class is a shifted single line") {
  CombModel comb;
  comb.spacing = 2.8;
  comb.n_lines = 5;
  comb.scheme = CombWeights::Custom;
  comb.custom_weights = {0, 0, 0, 1, 0};
  CombModel single;
  single.spacing = 2.8;
  single.n_lines = 1;
  const auto grid = linspace(-8, 8, 161);
  std::vector<double> shifted(grid);
  for (double& g : shifted) g -= 2.8;
  const auto a = eit_profile(comb, LambdaParams{}, reference_noise(), {}, grid);
  const auto b = eit_profile(single, LambdaParams{}, reference_noise(), {}, shifted);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(a.alpha_on[k] - b.alpha_on[k]) < 1e-12);
}

TEST_CASE("EIT amplitude limits") {
  CombModel one;
  one.spacing = 2.8;
  one.n_lines = 1;
  NoiseModel quiet;
  quiet.gamma0 = 0;
  quiet.delta_b = {0, 0, 0};
  const auto grid = linspace(-1, 1, 21);
  const auto ideal = eit_profile(one, LambdaParams{}, quiet, {}, grid);
  CHECK(ideal.alpha_on[10] < 1e-12);
  CHECK(ideal.amplitude == doctest::Approx(1.0));

  LambdaParams dark;
  dark.rabi_coupling = 0.0;
  CHECK(eit_profile(one, dark, reference_noise(), {}, grid).amplitude == 0.0);

  // strong spin dephasing, gamma_gs >> Omega^2 / gamma_ge
  NoiseModel noisy;
  noisy.gamma0 = 200.0;
  LambdaParams weak;
  weak.broadening = SpinBroadening::Lorentzian;
  weak.rabi_coupling = 1.0;
  CHECK(eit_profile(one, weak, noisy, {}, grid).amplitude < 0.05);
}

TEST_CASE("amplitude peaks at the ZEFOZ point") {
  ZefozPoint z;
  z.field = {0, 0, 63.6};
  z.omega0 = 2087.5;
  z.curvature = Eigen::Vector3d(-52.7, -52.7, 185.3).asDiagonal();
  CombModel comb;
  comb.spacing = 2.8;
  const FieldGrid sweep = line_grid(2, 53.6, 73.6, 41, z.field);
  const auto rows = amplitude_vs_field(z, reference_noise(), LambdaParams{}, comb, sweep);
  std::size_t best = 0;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].amplitude > rows[best].amplitude) best = k;
  CHECK(rows[best].field.z == doctest::Approx(63.6));
  for (std::size_t k = 1; k <= best; ++k) CHECK(rows[k].amplitude >= rows[k - 1].amplitude);
  for (std::size_t k = best + 1; k < rows.size(); ++k) CHECK(rows[k].amplitude <= rows[k - 1].amplitude);
  for (const auto& r : rows) CHECK(std::isnan(r.omega12_exact));

  const FieldGrid point = line_grid(2, 63.6, 63.6, 1, z.field);
  const auto single = amplitude_vs_field(z, reference_noise(), LambdaParams{}, comb, point);
  REQUIRE(single.size() == 1);
  CHECK(single[0].omega12 == z.omega0);
  CHECK(single[0].linewidth == spin_linewidth(reference_noise(), {}));
  CHECK(single[0].amplitude == doctest::Approx(rows[best].amplitude).epsilon(1e-9));
}

TEST_CASE("sweep frequencies match diagonalization near the ZEFOZ point") {
  const IonModel model;
  FieldGrid bounds;
  bounds.axes[2] = {30, 100, 71};
  const auto r = zefoz_search(model, {}, {0, 0, 50}, bounds, 1e-6);
  REQUIRE(r.found());
  const auto& z = r.points.front();
  const FieldGrid sweep = line_grid(2, z.field.z - 2, z.field.z + 2, 9, z.field);
  const auto rows = amplitude_vs_field(z, with_curvatures({}, z), LambdaParams{}, CombModel{}, sweep, &model);
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(std::abs(rows[k].omega12 - rows[k].omega12_exact) < 0.05);
    if (rows[k].omega12_exact < rows[argmin].omega12_exact) argmin = k;
  }
  CHECK(argmin == 4);
}

TEST_CASE("local maxima and FWHM helpers") {
  const std::vector<double> v{0, 1, 0, 2, 2, 2, 0, 3, 3, 4};
  const auto m = local_maxima(v);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == 1);
  CHECK(m[1] == 4);
  const auto x = linspace(-10, 10, 2001);
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = 1.0 + std::exp(-x[k] * x[k] / 2);
  CHECK(full_width_half_max(x, y, 1.0) == doctest::Approx(2 * std::sqrt(2 * std::log(2.0))).epsilon(1e-4));
}
