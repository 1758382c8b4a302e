#pragma once

#include <span>
#include <vector>

#include "skinfx/common.hpp"

namespace skinfx {

/// Axis-aligned rectangle in the complex plane.
struct Window {
  double re_min;
  double re_max;
  double im_min;
  double im_max;
};

struct PseudospectrumGrid {
  Eigen::VectorXd re_axis;
  Eigen::VectorXd im_axis;
  Eigen::MatrixXd sigma_min;  // (re index, im index)
  std::vector<double> eps_levels;

  /// Node (i, j) belongs to the eps-pseudospectrum iff sigma_min < eps.
  bool inside(double eps, Eigen::Index i, Eigen::Index j) const { return sigma_min(i, j) < eps; }
};

double smallest_singular_value(const Eigen::MatrixXcd& A);

/// sigma_min(A - lambda I) on a resolution x resolution grid over the window.
PseudospectrumGrid pseudospectrum(const Eigen::MatrixXcd& A, const Window& window, int resolution,
                                  std::vector<double> eps_levels);

/// Eigenvalue bounding box with both half-widths inflated by 50% and padded by
/// the largest eps.
Window default_window(const Eigen::VectorXcd& eigenvalues, double max_eps);

struct LevelSegment {
  double eps;
  int segment_id;
  Complex p0;
  Complex p1;
};

/// Marching-squares contour of sigma_min = eps.
std::vector<LevelSegment> level_set(const PseudospectrumGrid& grid, double eps);

/// ||v||_inf / ||v||_2.
template <typename Derived>
double localization_metric(const Eigen::MatrixBase<Derived>& v) {
  const double two = v.norm();
  if (two == 0.0) throw ValidationError("localization of the zero vector");
  return v.cwiseAbs().maxCoeff() / two;
}

/// Singular values in decreasing order divided by the largest.
Eigen::VectorXd eigenmatrix_singular_values(const Eigen::MatrixXcd& vectors);

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace skinfx
