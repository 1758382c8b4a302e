#include "skinfx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skinfx {

double smallest_singular_value(const Eigen::MatrixXcd& A) {
  if (A.size() == 0) throw ValidationError("empty matrix");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues().minCoeff();
}

PseudospectrumGrid pseudospectrum(const Eigen::MatrixXcd& A, const Window& window, int resolution,
                                  std::vector<double> eps_levels) {
  if (A.rows() != A.cols()) throw ValidationError("pseudospectrum needs a square matrix");
  if (resolution < 2) throw ValidationError("resolution must be at least 2");
  if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min)) {
    throw ValidationError("degenerate window");
  }
  PseudospectrumGrid grid;
  grid.re_axis = Eigen::VectorXd::LinSpaced(resolution, window.re_min, window.re_max);
  grid.im_axis = Eigen::VectorXd::LinSpaced(resolution, window.im_min, window.im_max);
  grid.sigma_min.resize(resolution, resolution);
  std::sort(eps_levels.begin(), eps_levels.end());
  grid.eps_levels = std::move(eps_levels);
  const Eigen::Index n = A.rows();
  parallel_for(static_cast<std::size_t>(resolution) * resolution, [&](std::size_t node) {
    const auto i = static_cast<Eigen::Index>(node % resolution);
    const auto j = static_cast<Eigen::Index>(node / resolution);
    Eigen::MatrixXcd shifted = A;
    shifted.diagonal().array() -= Complex(grid.re_axis(i), grid.im_axis(j));
    grid.sigma_min(i, j) = n == 0 ? 0.0 : smallest_singular_value(shifted);
  });
  return grid;
}

Window default_window(const Eigen::VectorXcd& eigenvalues, double max_eps) {
  if (eigenvalues.size() == 0) throw ValidationError("no eigenvalues");
  const double re_lo = eigenvalues.real().minCoeff(), re_hi = eigenvalues.real().maxCoeff();
  const double im_lo = eigenvalues.imag().minCoeff(), im_hi = eigenvalues.imag().maxCoeff();
  const double pad = std::max(max_eps, 0.0);
  double re_half = 1.5 * 0.5 * (re_hi - re_lo) + pad;
  double im_half = 1.5 * 0.5 * (im_hi - im_lo) + pad;
  // Keep the window two-dimensional when the spectrum is a single point or
  // a real segment and no eps is given.
  const double floor = 1e-6 * std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  re_half = std::max(re_half, floor);
  im_half = std::max(im_half, floor);
  const double re_mid = 0.5 * (re_lo + re_hi), im_mid = 0.5 * (im_lo + im_hi);
  return {re_mid - re_half, re_mid + re_half, im_mid - im_half, im_mid + im_half};
}

std::vector<LevelSegment> level_set(const PseudospectrumGrid& grid, double eps) {
  std::vector<LevelSegment> out;
  const Eigen::Index nr = grid.re_axis.size();
  const Eigen::Index ni = grid.im_axis.size();
  auto node = [&](Eigen::Index i, Eigen::Index j) { return Complex(grid.re_axis(i), grid.im_axis(j)); };
  auto cross = [&](Complex p, Complex q, double fp, double fq) { return p + (fp / (fp - fq)) * (q - p); };
  int id = 0;
  for (Eigen::Index i = 0; i + 1 < nr; ++i) {
    for (Eigen::Index j = 0; j + 1 < ni; ++j) {
      // Corners counter-clockwise from the lower left.
      const Complex p[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
      const double f[4] = {grid.sigma_min(i, j) - eps, grid.sigma_min(i + 1, j) - eps,
                           grid.sigma_min(i + 1, j + 1) - eps, grid.sigma_min(i, j + 1) - eps};
      Complex hits[4];
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((f[a] < 0.0) != (f[b] < 0.0)) {
          hits[count] = cross(p[a], p[b], f[a], f[b]);
          ++count;
        }
      }
      if (count == 2) {
        out.push_back({eps, id++, hits[0], hits[1]});
      } else if (count == 4) {
        // Saddle: decide the pairing from the cell-centre average.
        const double centre = 0.25 * (f[0] + f[1] + f[2] + f[3]);
        const bool corner0_in = f[0] < 0.0;
        if ((centre < 0.0) == corner0_in) {
          out.push_back({eps, id++, hits[0], hits[1]});
          out.push_back({eps, id++, hits[2], hits[3]});
        } else {
          out.push_back({eps, id++, hits[3], hits[0]});
          out.push_back({eps, id++, hits[1], hits[2]});
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd eigenmatrix_singular_values(const Eigen::MatrixXcd& vectors) {
  if (vectors.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(vectors);
  Eigen::VectorXd s = svd.singularValues();
  if (s(0) > 0.0) s /= s(0);
  return s;
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) throw ValidationError("hausdorff distance of an empty set");
  auto directed = [](std::span<const Complex> from, std::span<const Complex> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace skinfx
