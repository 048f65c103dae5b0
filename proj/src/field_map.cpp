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

#include "zefoz/field_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "zefoz/error.hpp"

namespace zefoz {

namespace {

FieldVector unit(int axis) {
  FieldVector e;
  e[axis] = 1.0;
  return e;
}

int sign_of(double v, double zero) { return v > zero ? 1 : (v < -zero ? -1 : 0); }

bool near_degenerate(const LevelSet& levels, int label, double gap) {
  const int k = label - 1;
  if (k > 0 && levels.energies[k] - levels.energies[k - 1] < gap) return true;
  if (k + 1 < levels.size() && levels.energies[k + 1] - levels.energies[k] < gap) return true;
  return false;
}

double expectation(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& v) {
  return v.dot(op * v).real();
}

struct PairLevels {
  LevelSet lower;  // ground levels, or the manifold's levels
  LevelSet upper;  // excited levels for optical, otherwise same as lower
};

PairLevels pair_levels(const IonModel& model, const FieldVector& field,
                       const TransitionSelector& sel) {
  PairLevels out;
  if (sel.manifold == Manifold::Optical) {
    out.lower = solve_levels(model.ground, field);
    out.upper = solve_levels(model.excited, field);
  } else {
    out.lower = solve_levels(model.params(sel.manifold), field);
    out.upper = out.lower;
  }
  return out;
}

double frequency_from(const PairLevels& p, const IonModel& model, const TransitionSelector& sel) {
  const double w = p.upper.energy(sel.level_j) - p.lower.energy(sel.level_i);
  return sel.manifold == Manifold::Optical ? w + model.optical_origin : w;
}

// Extrapolates central differences taken at steps h, h/2, h/4, ... whose
// error series runs in h^2.
double richardson(std::vector<double> table) {
  const int levels = static_cast<int>(table.size());
  for (int m = 1; m < levels; ++m) {
    const double factor = std::pow(4.0, m);
    for (int k = levels - 1; k >= m; --k) table[k] = (factor * table[k] - table[k - 1]) / (factor - 1.0);
  }
  return table.back();
}

// Full matrix of second derivatives d2w/dBa dBb in MHz/mT^2 for the axes in
// `mask`; other entries are left at zero.
Eigen::Matrix3d second_derivatives(const IonModel& model, const FieldVector& field,
                                   const TransitionSelector& sel, const DerivativeOptions& opt,
                                   const std::array<bool, 3>& mask) {
  if (opt.richardson_levels < 0) throw InvalidParameter("richardson_levels must be >= 0");
  const double finest = opt.hessian_step / std::pow(2.0, opt.richardson_levels);
  if (!(opt.hessian_step > 0.0) || finest < opt.min_step) {
    std::ostringstream msg;
    msg << "Hessian step collapsed to " << finest << " mT (minimum " << opt.min_step << " mT)";
    throw ComputationError(msg.str());
  }
  auto f = [&](const FieldVector& b) { return transition_frequency(model, b, sel); };
  const double f0 = f(field);
  const int levels = opt.richardson_levels + 1;

  Eigen::Matrix3d result = Eigen::Matrix3d::Zero();
  for (int a = 0; a < 3; ++a) {
    if (!mask[a]) continue;
    for (int b = a; b < 3; ++b) {
      if (!mask[b]) continue;
      std::vector<double> table(static_cast<std::size_t>(levels));
      for (int k = 0; k < levels; ++k) {
        const double h = opt.hessian_step / std::pow(2.0, k);
        if (a == b) {
          const FieldVector d = h * unit(a);
          table[k] = (f(field + d) - 2.0 * f0 + f(field - d)) / (h * h);
        } else {
          const FieldVector da = h * unit(a);
          const FieldVector db = h * unit(b);
          table[k] = (f(field + da + db) - f(field + da - db) - f(field - da + db) +
                      f(field - da - db)) /
                     (4.0 * h * h);
        }
      }
      result(a, b) = result(b, a) = richardson(table);
    }
  }
  return result;
}

std::array<int, 3> signature_of(const Eigen::Matrix3d& c) {
  return {sign_of(c(0, 0), 1e-6), sign_of(c(1, 1), 1e-6), sign_of(c(2, 2), 1e-6)};
}

}  // namespace

const SpinParams& IonModel::params(Manifold m) const {
  if (m == Manifold::Optical) throw InvalidParameter("optical manifold has no single parameter set");
  return m == Manifold::Ground ? ground : excited;
}

void TransitionSelector::validate(const IonModel& model) const {
  int dim_i = 0;
  int dim_j = 0;
  if (manifold == Manifold::Optical) {
    dim_i = model.ground.dimension();
    dim_j = model.excited.dimension();
  } else {
    dim_i = dim_j = model.params(manifold).dimension();
  }
  if (level_i < 1 || level_i > dim_i || level_j < 1 || level_j > dim_j) {
    std::ostringstream msg;
    msg << "transition labels (" << level_i << ", " << level_j << ") out of range";
    throw InvalidParameter(msg.str());
  }
}

double transition_frequency(const IonModel& model, const FieldVector& field,
                            const TransitionSelector& sel) {
  sel.validate(model);
  return frequency_from(pair_levels(model, field, sel), model, sel);
}

bool GradientResult::consistent() const {
  return degenerate || discrepancy < consistency_tolerance;
}

Eigen::Vector3d hellmann_feynman_gradient(const IonModel& model, const FieldVector& field,
                                          const TransitionSelector& sel) {
  sel.validate(model);
  const PairLevels p = pair_levels(model, field, sel);
  const SpinParams& lower_params =
      sel.manifold == Manifold::Optical ? model.ground : model.params(sel.manifold);
  const SpinParams& upper_params =
      sel.manifold == Manifold::Optical ? model.excited : model.params(sel.manifold);
  const auto d_lower = field_derivatives(lower_params);
  const auto d_upper = field_derivatives(upper_params);
  const Eigen::VectorXcd vi = p.lower.vector(sel.level_i);
  const Eigen::VectorXcd vj = p.upper.vector(sel.level_j);
  Eigen::Vector3d g;
  for (int a = 0; a < 3; ++a) g[a] = expectation(d_upper[a], vj) - expectation(d_lower[a], vi);
  return g;
}

GradientResult frequency_gradient(const IonModel& model, const FieldVector& field,
                                  const TransitionSelector& sel,
                                  const DerivativeOptions& options) {
  if (!(options.gradient_step >= options.min_step))
    throw InvalidParameter("gradient step below the minimum field step");
  sel.validate(model);
  GradientResult out;
  out.consistency_tolerance = options.consistency_tolerance;
  out.hellmann_feynman = hellmann_feynman_gradient(model, field, sel);

  if (options.richardson_levels < 0) throw InvalidParameter("richardson_levels must be >= 0");
  const int levels = options.richardson_levels + 1;
  if (options.gradient_step / std::pow(2.0, levels - 1) < options.min_step)
    throw InvalidParameter("gradient step below the minimum field step");
  for (int a = 0; a < 3; ++a) {
    std::vector<double> table(static_cast<std::size_t>(levels));
    for (int k = 0; k < levels; ++k) {
      const double h = options.gradient_step / std::pow(2.0, k);
      const FieldVector d = h * unit(a);
      table[k] = (transition_frequency(model, field + d, sel) - transition_frequency(model, field - d, sel)) /
                 (2.0 * h);
    }
    out.finite_difference[a] = richardson(table);
  }
  const PairLevels p = pair_levels(model, field, sel);
  out.degenerate = near_degenerate(p.lower, sel.level_i, options.degeneracy_gap) ||
                   near_degenerate(p.upper, sel.level_j, options.degeneracy_gap);
  out.discrepancy = (out.hellmann_feynman - out.finite_difference).cwiseAbs().maxCoeff();
  out.value = out.degenerate ? out.finite_difference : out.hellmann_feynman;
  return out;
}

Eigen::Matrix3d frequency_hessian(const IonModel& model, const FieldVector& field,
                                  const TransitionSelector& sel,
                                  const DerivativeOptions& options) {
  sel.validate(model);
  return 500.0 * second_derivatives(model, field, sel, options, {true, true, true});
}

double FieldAxis::value(int k) const {
  if (count <= 1) return start;
  return start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
}

void FieldGrid::validate() const {
  for (const auto& a : axes) {
    if (a.count < 1) throw InvalidParameter("field grid axis needs count >= 1");
    if (!(a.stop >= a.start)) throw InvalidParameter("field grid axis needs stop >= start");
    if (!std::isfinite(a.start) || !std::isfinite(a.stop))
      throw InvalidParameter("field grid bounds must be finite");
  }
}

bool FieldGrid::contains(const FieldVector& b, double slack) const {
  for (int a = 0; a < 3; ++a) {
    if (b[a] < axes[a].start - slack || b[a] > axes[a].stop + slack) return false;
  }
  return true;
}

std::size_t FieldGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
  return n;
}

FieldVector FieldGrid::point(std::size_t flat_index) const {
  // x fastest.
  FieldVector b;
  for (int a = 0; a < 3; ++a) {
    const auto n = static_cast<std::size_t>(axes[a].count);
    b[a] = axes[a].value(static_cast<int>(flat_index % n));
    flat_index /= n;
  }
  return b;
}

FieldGrid line_grid(int axis, double start, double stop, int count, const FieldVector& base) {
  if (axis < 0 || axis > 2) throw InvalidParameter("axis must be 0, 1 or 2");
  FieldGrid g;
  for (int a = 0; a < 3; ++a) g.axes[a] = {base[a], base[a], 1};
  g.axes[axis] = {start, stop, count};
  return g;
}

ZefozSearchResult zefoz_search(const IonModel& model, const TransitionSelector& sel,
                               const FieldVector& initial_field, const FieldGrid& bounds,
                               double tol, const ZefozSearchOptions& options) {
  if (!(tol > 0.0)) throw InvalidParameter("search tolerance must be positive");
  bounds.validate();
  sel.validate(model);
  if (!initial_field.finite() || !bounds.contains(initial_field))
    throw InvalidParameter("initial field lies outside the search bounds");

  std::array<bool, 3> free{};
  std::vector<int> free_axes;
  for (int a = 0; a < 3; ++a) {
    free[a] = bounds.axes[a].free();
    if (free[a]) free_axes.push_back(a);
  }
  const int nf = static_cast<int>(free_axes.size());

  auto gradient = [&](const FieldVector& b) -> Eigen::Vector3d {
    const TransitionSelector& s = sel;
    const PairLevels p = pair_levels(model, b, s);
    if (near_degenerate(p.lower, s.level_i, options.derivatives.degeneracy_gap) ||
        near_degenerate(p.upper, s.level_j, options.derivatives.degeneracy_gap))
      return frequency_gradient(model, b, s, options.derivatives).value;
    return hellmann_feynman_gradient(model, b, s);
  };
  auto clamp_to_bounds = [&](FieldVector b) {
    for (int a = 0; a < 3; ++a)
      b[a] = std::clamp(b[a], bounds.axes[a].start, bounds.axes[a].stop);
    return b;
  };

  // Seeds: the initial field plus the centre of every grid cell in which each
  // free gradient component changes sign (or touches zero).
  std::vector<FieldVector> seeds{initial_field};
  if (nf > 0) {
    const std::size_t total = bounds.size();
    std::vector<Eigen::Vector3d> grads(total);
    for (std::size_t k = 0; k < total; ++k) grads[k] = gradient(bounds.point(k));

    std::array<std::size_t, 3> stride{1, 1, 1};
    stride[1] = static_cast<std::size_t>(bounds.axes[0].count);
    stride[2] = stride[1] * static_cast<std::size_t>(bounds.axes[1].count);

    std::array<int, 3> cells{};
    for (int a = 0; a < 3; ++a) cells[a] = free[a] ? bounds.axes[a].count - 1 : 1;
    for (int cz = 0; cz < cells[2]; ++cz)
      for (int cy = 0; cy < cells[1]; ++cy)
        for (int cx = 0; cx < cells[0]; ++cx) {
          const std::array<int, 3> c{cx, cy, cz};
          Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
          Eigen::Vector3d hi = -lo;
          for (int corner = 0; corner < (1 << 3); ++corner) {
            std::size_t idx = 0;
            bool skip = false;
            for (int a = 0; a < 3; ++a) {
              const int bit = (corner >> a) & 1;
              if (bit && !free[a]) { skip = true; break; }
              idx += static_cast<std::size_t>(c[a] + bit) * stride[a];
            }
            if (skip) continue;
            lo = lo.cwiseMin(grads[idx]);
            hi = hi.cwiseMax(grads[idx]);
          }
          bool bracket = true;
          for (int a : free_axes) bracket = bracket && lo[a] <= 0.0 && hi[a] >= 0.0;
          if (!bracket) continue;
          FieldVector centre;
          for (int a = 0; a < 3; ++a) {
            const auto& ax = bounds.axes[a];
            centre[a] = free[a] ? 0.5 * (ax.value(c[a]) + ax.value(c[a] + 1)) : ax.start;
          }
          seeds.push_back(centre);
        }
  }

  std::vector<ZefozPoint> found;
  for (const FieldVector& seed : seeds) {
    FieldVector x = clamp_to_bounds(seed);
    Eigen::Vector3d g = gradient(x);
    int boundary_hits = 0;
    bool converged = g.norm() < tol;
    for (int it = 0; it < options.max_iterations && !converged && nf > 0; ++it) {
      const Eigen::Matrix3d hess = second_derivatives(model, x, sel, options.derivatives, free);
      Eigen::MatrixXd hf(nf, nf);
      Eigen::VectorXd gf(nf);
      for (int r = 0; r < nf; ++r) {
        gf[r] = g[free_axes[r]];
        for (int c = 0; c < nf; ++c) hf(r, c) = hess(free_axes[r], free_axes[c]);
      }
      Eigen::VectorXd step(nf);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(hf, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const bool singular = sv[0] == 0.0 || sv[nf - 1] / sv[0] < 1e-10;
      if (!singular) {
        step = -svd.solve(gf);
      } else {
        // Coordinate steps on the diagonal when the Hessian is near-singular.
        for (int r = 0; r < nf; ++r) {
          const double d = hf(r, r);
          step[r] = std::abs(d) > 1e-9 ? -gf[r] / d : -std::copysign(0.1, gf[r]);
        }
      }
      double lambda = 1.0;
      FieldVector best = x;
      Eigen::Vector3d best_g = g;
      for (int damp = 0; damp < 10; ++damp, lambda *= 0.5) {
        FieldVector trial = x;
        for (int r = 0; r < nf; ++r) trial[free_axes[r]] += lambda * step[r];
        trial = clamp_to_bounds(trial);
        const Eigen::Vector3d tg = gradient(trial);
        if (tg.norm() < best_g.norm()) {
          best = trial;
          best_g = tg;
          break;
        }
      }
      if (best == x) break;  // no descent in |grad|
      bool on_boundary = false;
      for (int a : free_axes)
        on_boundary = on_boundary || best[a] == bounds.axes[a].start || best[a] == bounds.axes[a].stop;
      if (on_boundary && ++boundary_hits >= 3) break;
      x = best;
      g = best_g;
      converged = g.norm() < tol;
    }
    if (!converged) continue;

    bool duplicate = false;
    for (auto& p : found) {
      if ((p.field - x).norm() < options.merge_distance) {
        duplicate = true;
        if (g.norm() < p.gradient_residual) {
          p.field = x;
          p.gradient_residual = g.norm();
        }
        break;
      }
    }
    if (duplicate) continue;
    ZefozPoint p;
    p.field = x;
    p.gradient_residual = g.norm();
    found.push_back(p);
  }

  for (auto& p : found) {
    p.omega0 = transition_frequency(model, p.field, sel);
    p.curvature = frequency_hessian(model, p.field, sel, options.derivatives);
    p.hessian_signature = signature_of(p.curvature);
  }
  std::stable_sort(found.begin(), found.end(), [](const ZefozPoint& a, const ZefozPoint& b) {
    if (a.gradient_residual != b.gradient_residual) return a.gradient_residual < b.gradient_residual;
    return std::tie(a.field.x, a.field.y, a.field.z) < std::tie(b.field.x, b.field.y, b.field.z);
  });
  return {found};
}

double quadratic_model(const ZefozPoint& point, const FieldVector& dB) {
  return point.omega0 + 1e-3 * (point.s2x() * dB.x * dB.x + point.s2y() * dB.y * dB.y +
                                point.s2z() * dB.z * dB.z);
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
  // Hungarian algorithm with potentials on cost = -weight.
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw InvalidParameter("assignment needs a square matrix");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) result[p[j] - 1] = j - 1;
  return result;
}

LevelDiagram level_diagram(const IonModel& model, const FieldGrid& grid, Manifold manifold) {
  grid.validate();
  const SpinParams& params = model.params(manifold);
  int axis = 2;
  int n_free = 0;
  for (int a = 0; a < 3; ++a) {
    if (grid.axes[a].free()) {
      axis = a;
      ++n_free;
    }
  }
  if (n_free > 1) throw InvalidParameter("level diagram needs a one-dimensional grid");

  const auto derivs = field_derivatives(params);
  const Eigen::MatrixXcd& along = derivs[axis];
  const int count = grid.axes[axis].count;
  const int dim = params.dimension();

  LevelDiagram out;
  out.energies.resize(count, dim);
  out.min_overlap.assign(static_cast<std::size_t>(count), 1.0);
  out.coarse_warning.assign(static_cast<std::size_t>(count), false);

  Eigen::MatrixXcd previous;  // columns ordered by curve
  for (int k = 0; k < count; ++k) {
    FieldVector b;
    for (int a = 0; a < 3; ++a) b[a] = grid.axes[a].start;
    b[axis] = grid.axes[axis].value(k);
    out.fields.push_back(b);

    LevelSet levels = solve_levels(params, b);
    // Inside degenerate clusters pick the basis that diagonalizes dH/dB along
    // the sweep, which is the one continuously connected to nearby fields.
    int begin = 0;
    while (begin < dim) {
      int end = begin + 1;
      while (end < dim && levels.energies[end] - levels.energies[end - 1] < kDegeneracyGap) ++end;
      if (end - begin > 1) {
        const Eigen::MatrixXcd block = levels.vectors.middleCols(begin, end - begin);
        const Eigen::MatrixXcd projected = block.adjoint() * along * block;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (projected + projected.adjoint()));
        levels.vectors.middleCols(begin, end - begin) = block * es.eigenvectors();
      }
      begin = end;
    }

    if (k == 0) {
      out.energies.row(0) = levels.energies.transpose();
      previous = levels.vectors;
      continue;
    }
    const Eigen::MatrixXd overlap = (previous.adjoint() * levels.vectors).cwiseAbs();
    const std::vector<int> assign = max_weight_assignment(overlap);
    Eigen::MatrixXcd current(dim, dim);
    double worst = 1.0;
    for (int c = 0; c < dim; ++c) {
      const int l = assign[static_cast<std::size_t>(c)];
      out.energies(k, c) = levels.energies[l];
      current.col(c) = levels.vectors.col(l);
      worst = std::min(worst, overlap(c, l));
    }
    out.min_overlap[static_cast<std::size_t>(k)] = worst;
    out.coarse_warning[static_cast<std::size_t>(k)] = worst < kTrackingOverlapWarning;
    previous = std::move(current);
  }
  return out;
}

}  // namespace zefoz
