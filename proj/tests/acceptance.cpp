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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "zefoz/eit.hpp"
#include "zefoz/field_map.hpp"
#include "zefoz/spin_system.hpp"
#include "zefoz/transitions.hpp"

using namespace zefoz;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

const IonModel kModel{};
const TransitionSelector kPair{Manifold::Ground, 8, 10};

ZefozSearchResult reference_search() {
  FieldGrid bounds;
  bounds.axes[2] = {30, 100, 71};
  return zefoz_search(kModel, kPair, {0, 0, 50}, bounds, 1e-6);
}

ZefozPoint located() {
  static const ZefozPoint p = [] {
    const auto r = reference_search();
    return r.found() ? r.points.front() : ZefozPoint{};
  }();
  return p;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto r = reference_search();
  const double dt = seconds_since(t0);
  if (!r.found()) return {false, "no stationary point found"};
  const auto& p = r.points.front();
  const bool ok = std::abs(p.field.x) < 1e-9 && std::abs(p.field.y) < 1e-9 &&
                  std::abs(p.field.z - 63.6) <= 1.0 && std::abs(p.omega0 - 2087) <= 10 && dt < 5.0;
  return {ok, fmt("B = (%.3g, %.3g, %.4f) mT, omega0 = %.3f MHz, %zu point(s), %.3f s", p.field.x, p.field.y,
                  p.field.z, p.omega0, r.points.size(), dt)};
}

Outcome criterion2() {
  const ZefozPoint p = located();
  const double expected[3] = {-52.7, -52.7, 185.3};
  const double got[3] = {p.s2x(), p.s2y(), p.s2z()};
  bool ok = p.hessian_signature == std::array<int, 3>{-1, -1, 1};
  for (int a = 0; a < 3; ++a) ok = ok && std::abs(got[a] - expected[a]) <= 0.03 * std::abs(expected[a]);
  return {ok, fmt("S2 = (%.2f, %.2f, %.2f) kHz/mT^2, signature (%+d, %+d, %+d)", got[0], got[1], got[2],
                  p.hessian_signature[0], p.hessian_signature[1], p.hessian_signature[2])};
}

double amplitude_of(const std::vector<Component>& comp, double mi, double ms) {
  for (const auto& c : comp)
    if (c.m_i == mi && c.m_s == ms) return std::abs(c.amplitude);
  return 0.0;
}

Outcome criterion3() {
  const ZefozPoint p = located();
  const auto g = solve_levels(kModel.ground, p.field);
  const auto e = solve_levels(kModel.excited, p.field);
  bool ok = true;
  std::string detail;
  for (int label : {8, 10}) {
    const auto comp = state_composition(g, label, 0.0);
    const double a = amplitude_of(comp, 2.5, 0.5), b = amplitude_of(comp, 3.5, -0.5);
    ok = ok && std::abs(a - M_SQRT1_2) <= 1e-3 && std::abs(b - M_SQRT1_2) <= 1e-3;
    detail += fmt("|%dg>: %.5f (5/2,+1/2) %.5f (7/2,-1/2); ", label, a, b);
  }
  const double c = amplitude_of(state_composition(e, 9, 0.0), 3.5, 0.5);
  ok = ok && c > 0.999;
  detail += fmt("|9e>: %.6f (7/2,+1/2)", c);
  return {ok, detail};
}

Outcome criterion4() {
  const ZefozPoint p = located();
  const auto table = transition_table(solve_levels(kModel.ground, p.field),
                                      solve_levels(kModel.excited, p.field), TransitionOperator{}, {});
  const auto systems = find_lambda_systems(table, 0.01, 0.01, 0.01);
  for (const auto& s : systems) {
    if (s.ground_a == 8 && s.ground_b == 10 && s.excited == 9) {
      const bool ok = std::abs(s.strength_a - 0.125) <= 1e-6 && std::abs(s.strength_b - 0.125) <= 1e-6;
      return {ok, fmt("(8g, 10g, 9e) strengths %.9f, %.9f; %zu system(s) total", s.strength_a, s.strength_b,
                      systems.size())};
    }
  }
  return {false, fmt("(8g, 10g, 9e) missing among %zu system(s)", systems.size())};
}

Outcome criterion5() {
  // The Hellmann-Feynman z-gradient of either line equals g_par mu_B / 2 of
  // the excited state, 1.26 MHz/mT: the lower edge of 1.33 +- 0.07. The
  // comparison allows 1e-9 MHz/mT of rounding at that edge.
  const ZefozPoint p = located();
  bool ok = true;
  std::string detail;
  for (int g : {8, 10}) {
    const auto grad = frequency_gradient(kModel, p.field, {Manifold::Optical, g, 9});
    const double gz = std::abs(grad.value[2]);
    ok = ok && gz >= 1.33 - 0.07 - 1e-9 && gz <= 1.33 + 0.07 && grad.consistent();
    detail += fmt("line %dg-9e: %.9f MHz/mT (FD %.9f); ", g, grad.value[2], grad.finite_difference[2]);
  }
  return {ok, detail + "1.26 is the lower tolerance edge"};
}

Outcome criterion6() {
  const NoiseModel n;
  const double g0 = spin_linewidth(n, {});
  const double g7 = spin_linewidth(n, {0, 0, 7});
  const bool ok = std::abs(g0 - 0.911) <= 1e-3 && std::abs(g7 - 3.26) <= 0.02;
  return {ok, fmt("Gamma(0) = %.5f MHz, Gamma(0,0,7 mT) = %.5f MHz", g0, g7)};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  CombModel comb;
  comb.spacing = 2.8;
  const NoiseModel noise;
  const LambdaParams params;
  const auto grid = linspace(-30, 30, 1201);
  const auto at0 = eit_profile(comb, params, noise, {}, grid);
  const auto peaks = local_maxima(at0.transmission);
  double worst = 0.0;
  for (std::size_t k = 1; k < peaks.size(); ++k)
    worst = std::max(worst, std::abs(grid[peaks[k]] - grid[peaks[k - 1]] - 2.8));
  const auto at7 = eit_profile(comb, params, noise, {0, 0, 7}, grid);
  const auto peaks7 = local_maxima(at7.transmission);
  const double fwhm = full_width_half_max(grid, at7.transmission, 1.0);
  const double dt = seconds_since(t0);
  const bool ok = peaks.size() == 9 && worst <= 0.1 && peaks7.size() == 1 && std::abs(fwhm - 12) <= 3 && dt < 10;
  return {ok, fmt("dB = 0: %zu maxima, max spacing error %.3f MHz; dBz = 7 mT: %zu maximum, FWHM %.2f MHz; "
                  "%.2f s",
                  peaks.size(), worst, peaks7.size(), fwhm, dt)};
}

Outcome criterion8() {
  const ZefozPoint p = located();
  CombModel comb;
  comb.spacing = 2.8;
  const double step = 0.5;
  const FieldGrid sweep = line_grid(2, 54, 74, 41, p.field);
  const auto rows = amplitude_vs_field(p, with_curvatures({}, p), LambdaParams{}, comb, sweep, &kModel, kPair);
  std::size_t amax = 0, wmin = 0, wmin_exact = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].amplitude > rows[amax].amplitude) amax = k;
    if (rows[k].omega12 < rows[wmin].omega12) wmin = k;
    if (rows[k].omega12_exact < rows[wmin_exact].omega12_exact) wmin_exact = k;
  }
  const double za = rows[amax].field.z, zw = rows[wmin].field.z, zx = rows[wmin_exact].field.z;
  const bool ok = std::abs(za - 63.6) <= step && std::abs(zw - 63.6) <= step && std::abs(zx - 63.6) <= step;
  return {ok, fmt("argmax amplitude %.2f mT, argmin omega12 %.2f mT (exact %.2f mT), step %.1f mT", za, zw, zx,
                  step)};
}

Outcome criterion9() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> label(1, 16);

  double worst_grad = 0.0;
  int samples = 0;
  while (samples < 1000) {
    IonModel m;
    m.ground.g_parallel = 2.0 + u(rng);
    m.ground.g_perp = 2.5 + u(rng);
    m.ground.hyperfine_axial = -590 + 200 * u(rng);
    m.ground.hyperfine_transverse = -789 + 200 * u(rng);
    m.ground.quadrupole = 5 * u(rng);
    const FieldVector b{20 * u(rng), 20 * u(rng), 60 + 40 * u(rng)};
    const TransitionSelector sel{Manifold::Ground, label(rng), label(rng)};
    const auto g = frequency_gradient(m, b, sel);
    if (g.degenerate) continue;
    worst_grad = std::max(worst_grad, g.discrepancy);
    ++samples;
  }

  double worst_unitary = 0.0, worst_sum = 0.0;
  for (int t = 0; t < 200; ++t) {
    const FieldVector b{50 * u(rng), 50 * u(rng), 100 * u(rng)};
    const auto g = solve_levels(kModel.ground, b);
    const auto e = solve_levels(kModel.excited, b);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(16, 16);
    worst_unitary = std::max(worst_unitary, (g.vectors.adjoint() * g.vectors - id).cwiseAbs().maxCoeff());
    worst_unitary = std::max(worst_unitary, (e.vectors.adjoint() * e.vectors - id).cwiseAbs().maxCoeff());
    const TransitionOperator op;
    const auto table = transition_table(g, e, op, {});
    const Eigen::MatrixXcd o = op.full(g.basis);
    for (int gl = 1; gl <= 16; ++gl) {
      double sum = 0.0;
      for (int el = 1; el <= 16; ++el) sum += table[(gl - 1) * 16 + el - 1].strength;
      const Eigen::VectorXcd v = g.vector(gl);
      worst_sum = std::max(worst_sum, std::abs(sum - (v.adjoint() * o.adjoint() * o * v)(0, 0).real()));
    }
  }

  const ZefozPoint p = located();
  double worst_model = 0.0;
  const double h = 1.0 / std::sqrt(3.0);  // grid corners at |dB| = 2 mT
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k) {
        const FieldVector d{i * h, j * h, k * h};
        worst_model = std::max(worst_model, std::abs(quadratic_model(p, d) - transition_frequency(kModel, p.field + d, kPair)));
      }
  const double dt = seconds_since(t0);
  const bool ok = worst_grad < 1e-4 && worst_unitary < 1e-10 && worst_sum < 1e-10 && worst_model < 0.05 && dt < 60;
  return {ok, fmt("HF-FD %.2e MHz/mT (1000 samples), unitarity %.1e, sum rule %.1e, quadratic model %.4f MHz "
                  "(5x5x5), %.2f s",
                  worst_grad, worst_unitary, worst_sum, worst_model, dt)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 ZEFOZ location", criterion1},       {"2 curvatures", criterion2},
      {"3 eigenstate composition", criterion3}, {"4 Lambda-system discovery", criterion4},
      {"5 optical gradient", criterion5},     {"6 linewidth model", criterion6},
      {"7 comb structure", criterion7},       {"8 amplitude vs field", criterion8},
      {"9 numerical hygiene", criterion9}};
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
