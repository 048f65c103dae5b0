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

#include "zefoz/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "zefoz/error.hpp"

namespace zefoz {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double scale = 0.0;
  std::array<double, kTerms> coeff{};  // coeff[n-1] multiplies Z^(n-1)

  WeidemanTable() {
    const int m = 2 * kTerms;
    scale = std::sqrt(kTerms / std::numbers::sqrt2);
    std::array<double, 2 * m> samples{};  // g(k) for k = -m+1 .. m-1, shifted by m
    for (int k = -m + 1; k <= m - 1; ++k) {
      const double t = scale * std::tan(0.5 * k * std::numbers::pi / m);
      samples[static_cast<std::size_t>(k + m)] = std::exp(-t * t) * (scale * scale + t * t);
    }
    for (int n = 1; n <= kTerms; ++n) {
      double acc = 0.0;
      for (int k = -m + 1; k <= m - 1; ++k)
        acc += samples[static_cast<std::size_t>(k + m)] * std::cos(std::numbers::pi * k * n / m);
      coeff[static_cast<std::size_t>(n - 1)] = acc / (2.0 * m);
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
  if (z.imag() < 0.0) throw InvalidParameter("faddeeva: only Im z >= 0 is supported");
  const auto& t = table();
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> denom = t.scale - i * z;
  const std::complex<double> big_z = (t.scale + i * z) / denom;
  std::complex<double> p = 0.0;
  for (int n = kTerms - 1; n >= 0; --n) p = p * big_z + t.coeff[static_cast<std::size_t>(n)];
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  if (n < 1) throw InvalidParameter("Gauss-Hermite order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(n));
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()[k];
    const double v = es.eigenvectors()(0, k);
    weights[k] = mu0 * v * v;
  }
  return {nodes, weights};
}

}  // namespace zefoz
