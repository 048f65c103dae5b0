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

#ifndef ZEFOZ_FADDEEVA_HPP
#define ZEFOZ_FADDEEVA_HPP

#include <complex>
#include <utility>
#include <vector>

namespace zefoz {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0, by Weideman's
/// rational expansion with 40 terms (relative error ~1e-14).
std::complex<double> faddeeva(std::complex<double> z);

/// Gauss-Hermite nodes and weights for the weight exp(-x^2) (Golub-Welsch).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

}  // namespace zefoz

#endif
