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

#ifndef ZEFOZ_SPIN_SYSTEM_HPP
#define ZEFOZ_SPIN_SYSTEM_HPP

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace zefoz {

using cplx = std::complex<double>;

/// Applied dc field in mT; z is the crystal c-axis.
struct FieldVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  double norm() const;
  bool finite() const;

  friend FieldVector operator+(FieldVector a, const FieldVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend FieldVector operator-(FieldVector a, const FieldVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend FieldVector operator*(double s, FieldVector a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend bool operator==(const FieldVector&, const FieldVector&) = default;
};

/// Effective spin Hamiltonian parameters for one electronic state. Energies
/// in MHz, mu_B in MHz/mT.
struct SpinParams {
  double electron_spin = 0.5;
  double nuclear_spin = 3.5;
  double g_parallel = 0.0;
  double g_perp = 0.0;
  double hyperfine_axial = 0.0;       // A
  double hyperfine_transverse = 0.0;  // B
  double quadrupole = 0.0;            // P
  double bohr_magneton = 14.0;

  /// Throws InvalidParameter on non-half-integer spins, S < 1/2, I < 0,
  /// mu_B <= 0 or non-finite values.
  void validate() const;
  int dimension() const;

  friend bool operator==(const SpinParams&, const SpinParams&) = default;
};

// 143Nd3+ in YLiF4, 4I9/2(1) ground and 4F3/2(1) excited doublets.
SpinParams nd_ylf_ground();
SpinParams nd_ylf_excited();

bool is_half_integer_multiple(double v);

/// Product basis |M_I, M_S>, M_I descending outer, M_S descending inner.
class SpinBasis {
 public:
  SpinBasis() = default;
  SpinBasis(double electron_spin, double nuclear_spin);

  int dimension() const { return n_nuclear_ * n_electron_; }
  int electron_multiplicity() const { return n_electron_; }
  int nuclear_multiplicity() const { return n_nuclear_; }
  double electron_spin() const { return s_; }
  double nuclear_spin() const { return i_; }

  int index(double m_i, double m_s) const;
  double m_i(int index) const;
  double m_s(int index) const;

  friend bool operator==(const SpinBasis&, const SpinBasis&) = default;

 private:
  double s_ = 0.5;
  double i_ = 0.0;
  int n_electron_ = 2;
  int n_nuclear_ = 1;
};

/// Cartesian spin matrices for spin j in the descending-m basis.
struct SpinMatrices {
  Eigen::MatrixXcd x, y, z;
  Eigen::MatrixXcd plus() const;
  Eigen::MatrixXcd minus() const;
};
SpinMatrices spin_matrices(double j);

/// op ⊗ 1 on the nuclear factor, i.e. an electron-spin operator in the
/// product basis.
Eigen::MatrixXcd electron_operator(const SpinBasis& basis, const Eigen::MatrixXcd& op);
Eigen::MatrixXcd nuclear_operator(const SpinBasis& basis, const Eigen::MatrixXcd& op);

class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  HermitianMatrix(SpinBasis basis, Eigen::MatrixXcd values);

  const Eigen::MatrixXcd& values() const { return values_; }
  const SpinBasis& basis() const { return basis_; }
  int dimension() const { return static_cast<int>(values_.rows()); }
  cplx trace() const { return values_.trace(); }
  /// max |H - H^dagger| relative to max(1, max |H|).
  double hermiticity_residual() const;

 private:
  SpinBasis basis_;
  Eigen::MatrixXcd values_;
};

/// dH/dB_i for i = x, y, z (MHz/mT). The Hamiltonian is linear in the field.
std::array<Eigen::MatrixXcd, 3> field_derivatives(const SpinParams& params);

HermitianMatrix build_hamiltonian(const SpinParams& params, const FieldVector& field);

/// Eigenvalues ascending with their eigenvectors as columns. Labels are
/// 1-based and ascending in energy.
struct LevelSet {
  SpinBasis basis;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;

  int size() const { return static_cast<int>(energies.size()); }
  double energy(int label) const;
  Eigen::VectorXcd vector(int label) const;
};

inline constexpr double kDegeneracyGap = 1e-6;       // MHz
inline constexpr double kHermiticityTolerance = 1e-12;

LevelSet diagonalize(const HermitianMatrix& h);

/// Convenience: build_hamiltonian followed by diagonalize.
LevelSet solve_levels(const SpinParams& params, const FieldVector& field);

struct Component {
  double m_i;
  double m_s;
  cplx amplitude;
};

/// Basis components of one level with |amplitude| > threshold, strongest
/// first.
std::vector<Component> state_composition(const LevelSet& levels, int label,
                                         double threshold);

}  // namespace zefoz

#endif
