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

#ifndef ZEFOZ_FIELD_MAP_HPP
#define ZEFOZ_FIELD_MAP_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "zefoz/spin_system.hpp"

namespace zefoz {

enum class Manifold { Ground, Excited, Optical };

/// Ground and excited parameter sets plus the optical frequency origin (MHz)
/// added to every optical transition.
struct IonModel {
  SpinParams ground = nd_ylf_ground();
  SpinParams excited = nd_ylf_excited();
  double optical_origin = 0.0;

  const SpinParams& params(Manifold m) const;
  friend bool operator==(const IonModel&, const IonModel&) = default;
};

/// Pair of 1-based level labels. For optical transitions level_i is the
/// ground label and level_j the excited label.
struct TransitionSelector {
  Manifold manifold = Manifold::Ground;
  int level_i = 8;
  int level_j = 10;

  void validate(const IonModel& model) const;
  friend bool operator==(const TransitionSelector&, const TransitionSelector&) = default;
};

struct DerivativeOptions {
  double gradient_step = 0.01;  // mT
  double hessian_step = 0.5;    // mT
  int richardson_levels = 1;     // step halvings extrapolated, gradients and Hessians
  double min_step = 1e-4;          // mT
  double degeneracy_gap = 1e-3;    // MHz
  double consistency_tolerance = 1e-4;  // MHz/mT
  friend bool operator==(const DerivativeOptions&, const DerivativeOptions&) = default;
};

/// E_j - E_i in MHz (plus the optical origin for optical selectors).
double transition_frequency(const IonModel& model, const FieldVector& field,
                            const TransitionSelector& sel);

struct GradientResult {
  Eigen::Vector3d value;              // MHz/mT
  Eigen::Vector3d hellmann_feynman;
  Eigen::Vector3d finite_difference;
  // A selected level is within degeneracy_gap of a neighbour; value is then
  // the finite-difference estimate.
  bool degenerate = false;
  double discrepancy = 0.0;  // max |HF - FD|
  bool consistent() const;
  double consistency_tolerance = 1e-4;
};

GradientResult frequency_gradient(const IonModel& model, const FieldVector& field,
                                  const TransitionSelector& sel,
                                  const DerivativeOptions& options = {});

/// Hellmann-Feynman gradient only (no finite-difference cross-check).
Eigen::Vector3d hellmann_feynman_gradient(const IonModel& model, const FieldVector& field,
                                          const TransitionSelector& sel);

/// Quadratic-form coefficients C (kHz/mT^2) of the local expansion
///   w(B0 + dB) = w(B0) + grad . dB + dB^T C dB,
/// i.e. half the matrix of second derivatives. At a stationary point the
/// diagonal holds the curvatures S2x, S2y, S2z. Central second differences
/// refined by Richardson extrapolation over step halvings.
Eigen::Matrix3d frequency_hessian(const IonModel& model, const FieldVector& field,
                                  const TransitionSelector& sel,
                                  const DerivativeOptions& options = {});

struct FieldAxis {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double value(int k) const;
  bool free() const { return count > 1 && stop > start; }
  friend bool operator==(const FieldAxis&, const FieldAxis&) = default;
};

struct FieldGrid {
  std::array<FieldAxis, 3> axes;

  void validate() const;
  bool contains(const FieldVector& b, double slack = 1e-9) const;
  std::size_t size() const;
  FieldVector point(std::size_t flat_index) const;
  friend bool operator==(const FieldGrid&, const FieldGrid&) = default;
};

/// A one-dimensional grid along one axis with the other two components fixed.
FieldGrid line_grid(int axis, double start, double stop, int count,
                    const FieldVector& base = {});

struct ZefozPoint {
  FieldVector field;
  double omega0 = 0.0;             // MHz
  double gradient_residual = 0.0;  // MHz/mT
  Eigen::Matrix3d curvature = Eigen::Matrix3d::Zero();  // kHz/mT^2
  std::array<int, 3> hessian_signature{0, 0, 0};

  double s2x() const { return curvature(0, 0); }
  double s2y() const { return curvature(1, 1); }
  double s2z() const { return curvature(2, 2); }
};

struct ZefozSearchOptions {
  DerivativeOptions derivatives;
  int max_iterations = 60;
  double merge_distance = 1e-3;  // mT
};

struct ZefozSearchResult {
  std::vector<ZefozPoint> points;  // sorted by gradient residual
  bool found() const { return !points.empty(); }
};

/// All stationary points of the selected transition frequency inside bounds.
/// Axes whose grid spans a single value stay fixed. Gradient sign changes on
/// the coarse grid bracket candidates; damped Newton on grad w = 0 refines
/// them, so saddles are found as readily as extrema.
ZefozSearchResult zefoz_search(const IonModel& model, const TransitionSelector& sel,
                               const FieldVector& initial_field, const FieldGrid& bounds,
                               double tol, const ZefozSearchOptions& options = {});

/// w0 + sum_i S2i dB_i^2, with the kHz -> MHz conversion.
double quadratic_model(const ZefozPoint& point, const FieldVector& dB);

struct LevelDiagram {
  std::vector<FieldVector> fields;
  // energies(point, curve); curve c starts as level c+1 at the first point.
  Eigen::MatrixXd energies;
  std::vector<double> min_overlap;   // per point, against the previous one
  std::vector<bool> coarse_warning;  // min_overlap < 0.6
};

inline constexpr double kTrackingOverlapWarning = 0.6;

/// Energies along a one-dimensional field grid, with curves followed by
/// eigenvector overlap so that crossing levels keep their identity.
LevelDiagram level_diagram(const IonModel& model, const FieldGrid& grid, Manifold manifold);

/// Assignment maximizing the summed weights; result[row] = column.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

}  // namespace zefoz

#endif
