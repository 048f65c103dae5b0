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

#include "zefoz/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "zefoz/error.hpp"

namespace zefoz {

namespace {

int multiplicity(double j) { return static_cast<int>(std::lround(2.0 * j)) + 1; }

// Rotate the phase so the largest component is real and non-negative. Near
// ties resolve to the lowest basis index.
void fix_gauge(Eigen::Ref<Eigen::VectorXcd> v) {
  double largest = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) largest = std::max(largest, std::abs(v[k]));
  if (largest == 0.0) return;
  Eigen::Index pick = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) >= largest * (1.0 - 1e-9)) {
      pick = k;
      break;
    }
  }
  const cplx phase = std::conj(v[pick]) / std::abs(v[pick]);
  v *= phase;
  v[pick] = cplx(v[pick].real(), 0.0);
}

}  // namespace

double FieldVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

bool FieldVector::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

bool is_half_integer_multiple(double v) {
  if (!std::isfinite(v)) return false;
  const double twice = 2.0 * v;
  return std::abs(twice - std::round(twice)) < 1e-12;
}

void SpinParams::validate() const {
  std::ostringstream err;
  if (!is_half_integer_multiple(electron_spin) || electron_spin < 0.5)
    err << "electron spin S = " << electron_spin << " must be a multiple of 1/2 and >= 1/2; ";
  if (!is_half_integer_multiple(nuclear_spin) || nuclear_spin < 0.0)
    err << "nuclear spin I = " << nuclear_spin << " must be a multiple of 1/2 and >= 0; ";
  if (!(bohr_magneton > 0.0) || !std::isfinite(bohr_magneton))
    err << "mu_B = " << bohr_magneton << " must be positive; ";
  for (double v : {g_parallel, g_perp, hyperfine_axial, hyperfine_transverse, quadrupole}) {
    if (!std::isfinite(v)) {
      err << "spin Hamiltonian parameters must be finite; ";
      break;
    }
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw InvalidParameter("invalid spin parameters: " + msg.substr(0, msg.size() - 2));
}

int SpinParams::dimension() const {
  return multiplicity(electron_spin) * multiplicity(nuclear_spin);
}

SpinParams nd_ylf_ground() {
  SpinParams p;
  p.g_parallel = 1.987;
  p.g_perp = 2.554;
  p.hyperfine_axial = -590.0;
  p.hyperfine_transverse = -789.0;
  return p;
}

SpinParams nd_ylf_excited() {
  SpinParams p;
  p.g_parallel = 0.18;
  p.g_perp = 0.0;  // not reported
  p.hyperfine_axial = -257.0;
  p.hyperfine_transverse = -456.0;
  return p;
}

SpinBasis::SpinBasis(double electron_spin, double nuclear_spin)
    : s_(electron_spin),
      i_(nuclear_spin),
      n_electron_(multiplicity(electron_spin)),
      n_nuclear_(multiplicity(nuclear_spin)) {}

int SpinBasis::index(double m_i, double m_s) const {
  const int ii = static_cast<int>(std::lround(i_ - m_i));
  const int is = static_cast<int>(std::lround(s_ - m_s));
  if (ii < 0 || ii >= n_nuclear_ || is < 0 || is >= n_electron_)
    throw InvalidParameter("basis state out of range");
  return ii * n_electron_ + is;
}

double SpinBasis::m_i(int index) const { return i_ - index / n_electron_; }
double SpinBasis::m_s(int index) const { return s_ - index % n_electron_; }

Eigen::MatrixXcd SpinMatrices::plus() const { return x + cplx(0, 1) * y; }
Eigen::MatrixXcd SpinMatrices::minus() const { return x - cplx(0, 1) * y; }

SpinMatrices spin_matrices(double j) {
  const int d = multiplicity(j);
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    // <m+1| J+ |m>, row k-1 holds m+1.
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXcd jm = jp.adjoint();
  SpinMatrices out;
  out.x = 0.5 * (jp + jm);
  out.y = cplx(0.0, -0.5) * (jp - jm);
  out.z = jz;
  return out;
}

Eigen::MatrixXcd electron_operator(const SpinBasis& basis, const Eigen::MatrixXcd& op) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(basis.nuclear_multiplicity(),
                                                         basis.nuclear_multiplicity());
  return Eigen::kroneckerProduct(id, op).eval();
}

Eigen::MatrixXcd nuclear_operator(const SpinBasis& basis, const Eigen::MatrixXcd& op) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(basis.electron_multiplicity(),
                                                         basis.electron_multiplicity());
  return Eigen::kroneckerProduct(op, id).eval();
}

HermitianMatrix::HermitianMatrix(SpinBasis basis, Eigen::MatrixXcd values)
    : basis_(basis), values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() != basis_.dimension())
    throw InvalidParameter("Hamiltonian dimension does not match the spin basis");
}

double HermitianMatrix::hermiticity_residual() const {
  if (values_.size() == 0) return 0.0;
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  return (values_ - values_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

std::array<Eigen::MatrixXcd, 3> field_derivatives(const SpinParams& params) {
  params.validate();
  const SpinBasis basis(params.electron_spin, params.nuclear_spin);
  const SpinMatrices s = spin_matrices(params.electron_spin);
  const double perp = params.g_perp * params.bohr_magneton;
  const double par = params.g_parallel * params.bohr_magneton;
  return {perp * electron_operator(basis, s.x), perp * electron_operator(basis, s.y),
          par * electron_operator(basis, s.z)};
}

HermitianMatrix build_hamiltonian(const SpinParams& params, const FieldVector& field) {
  params.validate();
  if (!field.finite()) throw InvalidParameter("field components must be finite");

  const SpinBasis basis(params.electron_spin, params.nuclear_spin);
  const SpinMatrices s = spin_matrices(params.electron_spin);
  const SpinMatrices n = spin_matrices(params.nuclear_spin);
  const double mu = params.bohr_magneton;
  const double ii1 = params.nuclear_spin * (params.nuclear_spin + 1.0);
  const int dn = basis.nuclear_multiplicity();

  Eigen::MatrixXcd h = params.g_parallel * mu * field.z * electron_operator(basis, s.z);
  h += params.g_perp * mu *
       (field.x * electron_operator(basis, s.x) + field.y * electron_operator(basis, s.y));
  h += params.hyperfine_axial * Eigen::kroneckerProduct(n.z, s.z).eval();
  h += params.hyperfine_transverse *
       (Eigen::kroneckerProduct(n.x, s.x) + Eigen::kroneckerProduct(n.y, s.y)).eval();
  const Eigen::MatrixXcd quad =
      n.z * n.z - (ii1 / 3.0) * Eigen::MatrixXcd::Identity(dn, dn);
  h += params.quadrupole * nuclear_operator(basis, quad);

  // Symmetrize so the result is exactly Hermitian.
  Eigen::MatrixXcd herm = 0.5 * (h + h.adjoint());
  return HermitianMatrix(basis, std::move(herm));
}

double LevelSet::energy(int label) const {
  if (label < 1 || label > size()) throw InvalidParameter("level label out of range");
  return energies[label - 1];
}

Eigen::VectorXcd LevelSet::vector(int label) const {
  if (label < 1 || label > size()) throw InvalidParameter("level label out of range");
  return vectors.col(label - 1);
}

LevelSet diagonalize(const HermitianMatrix& h) {
  const double residual = h.hermiticity_residual();
  if (residual > kHermiticityTolerance) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (relative residual " << residual << ")";
    throw InvalidParameter(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.values());
  if (solver.info() != Eigen::Success) throw ComputationError("eigen-decomposition failed");

  LevelSet out;
  out.basis = h.basis();
  out.energies = solver.eigenvalues();
  out.vectors = solver.eigenvectors();

  // Degenerate clusters: re-orthonormalize; any rotation inside is allowed.
  const int n = out.size();
  int begin = 0;
  while (begin < n) {
    int end = begin + 1;
    while (end < n && out.energies[end] - out.energies[end - 1] < kDegeneracyGap) ++end;
    if (end - begin > 1) {
      Eigen::MatrixXcd block = out.vectors.middleCols(begin, end - begin);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
      out.vectors.middleCols(begin, end - begin) =
          qr.householderQ() * Eigen::MatrixXcd::Identity(n, end - begin);
    }
    begin = end;
  }
  for (int k = 0; k < n; ++k) fix_gauge(out.vectors.col(k));
  return out;
}

LevelSet solve_levels(const SpinParams& params, const FieldVector& field) {
  return diagonalize(build_hamiltonian(params, field));
}

std::vector<Component> state_composition(const LevelSet& levels, int label,
                                         double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0))
    throw InvalidParameter("composition threshold must lie in [0, 1)");
  const Eigen::VectorXcd v = levels.vector(label);
  std::vector<int> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  std::vector<Component> out;
  for (int k : order) {
    if (std::abs(v[k]) <= threshold) break;
    out.push_back({levels.basis.m_i(k), levels.basis.m_s(k), v[k]});
  }
  return out;
}

}  // namespace zefoz
