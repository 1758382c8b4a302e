#include "skinfx/capmat.hpp"

#include <algorithm>

#include "skinfx/eigensolve.hpp"
#include "skinfx/spectral.hpp"

namespace skinfx {

GaugeCapacitanceMatrix build_gauge_capacitance(const ChainSpec& chain) {
  chain.validate();
  const auto n = static_cast<Eigen::Index>(chain.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = chain.gammas[i] * chain.lengths[i];
    if (i + 1 < n) {
      const double right = gauge_kernel(x) / chain.spacings[i];
      C(i, i) += right;
      C(i, i + 1) = -right;
    }
    if (i > 0) {
      const double left = gauge_kernel(-x) / chain.spacings[i - 1];
      C(i, i) += left;
      C(i, i - 1) = -left;
    }
  }
  GaugeCapacitanceMatrix out;
  out.entries = C.cast<Complex>();
  out.kind = MatrixKind::finite;
  return out;
}

GaugeCapacitanceMatrix build_quasiperiodic_capacitance(const UnitCellSpec& cell, Complex alpha) {
  cell.validate();
  const auto k = static_cast<Eigen::Index>(cell.size());
  const double L = cell.period();
  const Complex ahead = std::exp(Complex(0.0, -1.0) * alpha * L);
  const Complex behind = std::exp(Complex(0.0, 1.0) * alpha * L);
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double x = cell.gamma * cell.lengths[i];
    const double right = gauge_kernel(x) / cell.spacings[i];
    const double left = gauge_kernel(-x) / cell.spacings[(i + k - 1) % k];
    C(i, i) += right + left;
    if (i + 1 < k) {
      C(i, i + 1) -= right;
    } else {
      C(i, 0) -= ahead * right;
    }
    if (i > 0) {
      C(i, i - 1) -= left;
    } else {
      C(0, k - 1) -= behind * left;
    }
  }
  GaugeCapacitanceMatrix out;
  out.entries = C;
  out.kind = MatrixKind::quasiperiodic;
  out.alpha = alpha;
  return out;
}

Eigen::VectorXd volume_matrix(const ChainSpec& chain) {
  return Eigen::Map<const Eigen::VectorXd>(chain.lengths.data(), static_cast<Eigen::Index>(chain.size()));
}

Eigen::VectorXd volume_matrix(const UnitCellSpec& cell) {
  return Eigen::Map<const Eigen::VectorXd>(cell.lengths.data(), static_cast<Eigen::Index>(cell.size()));
}

namespace {

SpectralResult finish(const Eigen::MatrixXcd& C, const Eigen::VectorXd& weights, EigenDecomposition dec) {
  SpectralResult out;
  out.lambdas = std::move(dec.values);
  out.vectors = std::move(dec.vectors);
  const Eigen::Index n = C.rows();
  out.localization.resize(n);
  out.residuals.resize(n);
  const double scale = std::max(C.norm(), 1e-300);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto v = out.vectors.col(k);
    out.localization(k) = localization_metric(v);
    out.residuals(k) = (C * v - out.lambdas(k) * (weights.cast<Complex>().asDiagonal() * v)).norm() / scale;
  }
  return out;
}

}  // namespace

SpectralResult solve_spectrum(const Eigen::MatrixXcd& C, const Eigen::VectorXd& volumes, double delta,
                              double v_b) {
  if (C.rows() != C.cols() || C.rows() != volumes.size()) throw ValidationError("size mismatch");
  if ((volumes.array() <= 0.0).any()) throw ValidationError("volume matrix must be positive");
  const Eigen::MatrixXcd A = volumes.cwiseInverse().asDiagonal() * C;
  SpectralResult out = finish(C, volumes, eigen_decompose(A));
  out.omegas.resize(out.lambdas.size());
  for (Eigen::Index k = 0; k < out.lambdas.size(); ++k) {
    out.omegas(k) = v_b * sqrt_right_half(delta * out.lambdas(k));
  }
  return out;
}

SpectralResult solve_spectrum(const GaugeCapacitanceMatrix& C, const Eigen::VectorXd& volumes,
                              double delta, double v_b) {
  return solve_spectrum(C.entries, volumes, delta, v_b);
}

SpectralResult solve_chain(const ChainSpec& chain) {
  return solve_spectrum(build_gauge_capacitance(chain), volume_matrix(chain), chain.delta, chain.v_b);
}

SpectralResult solve_material_spectrum(const Eigen::MatrixXcd& C, const Eigen::VectorXd& volumes,
                                       std::span<const Complex> speeds, double delta) {
  const Eigen::Index n = C.rows();
  if (C.cols() != n || volumes.size() != n || static_cast<Eigen::Index>(speeds.size()) != n) {
    throw ValidationError("size mismatch");
  }
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = delta * speeds[i] * speeds[i] / volumes(i);
  const Eigen::MatrixXcd A = d.asDiagonal() * C;
  // Residual measured on the scaled problem A v = lambda v.
  SpectralResult out = finish(A, Eigen::VectorXd::Ones(n), eigen_decompose(A));
  out.omegas.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.omegas(k) = sqrt_right_half(out.lambdas(k));
  return out;
}

std::vector<Complex> reconstruct_mode(const ChainSpec& chain, const Eigen::VectorXcd& eigvec,
                                      std::span<const double> grid) {
  chain.validate();
  if (eigvec.size() != static_cast<Eigen::Index>(chain.size())) throw ValidationError("size mismatch");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ValidationError("grid points must be sorted");
  const auto pos = resonator_positions(chain);
  const std::size_t n = pos.size();
  std::vector<Complex> out;
  out.reserve(grid.size());
  std::size_t j = 0;  // first resonator whose right end is >= x
  for (double x : grid) {
    while (j < n && pos[j].right < x) ++j;
    if (j == n) {
      out.push_back(eigvec(n - 1));
    } else if (x >= pos[j].left) {
      out.push_back(eigvec(j));
    } else if (j == 0) {
      out.push_back(eigvec(0));
    } else {
      const double t = (x - pos[j - 1].right) / (pos[j].left - pos[j - 1].right);
      out.push_back((1.0 - t) * eigvec(j - 1) + t * eigvec(j));
    }
  }
  return out;
}

}  // namespace skinfx
