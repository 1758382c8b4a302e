#pragma once

#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

#include "skinfx/common.hpp"
#include "skinfx/geometry.hpp"

namespace skinfx {

/// e^z - 1 without cancellation for small |z|.
inline Complex expm1(Complex z) {
  const double a = z.real();
  const double b = z.imag();
  const double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

/// g(x) = x / (1 - e^{-x}), continuous through x = 0 where g = 1.
/// Then x/(1 - e^{x}) = -g(-x) and g(x) + g(-x) = x coth(x/2).
template <typename Scalar>
Scalar gauge_kernel(Scalar x) {
  using std::abs;
  if (abs(x) < 1e-6) return Scalar(1) + x / Scalar(2) + x * x / Scalar(12);
  if constexpr (std::is_floating_point_v<Scalar>) {
    return x / -std::expm1(-x);
  } else {
    return x / -skinfx::expm1(-x);
  }
}

enum class MatrixKind { finite, quasiperiodic };

struct GaugeCapacitanceMatrix {
  Eigen::MatrixXcd entries;
  MatrixKind kind = MatrixKind::finite;
  Complex alpha{0.0, 0.0};  // quasiperiodicity; meaningful when kind is quasiperiodic

  Eigen::Index size() const { return entries.rows(); }
};

/// Tridiagonal C^gamma of a finite chain. Row i uses its own gauge gamma_i and
/// length l_i, so a chain with mixed signs gives the interface matrix.
GaugeCapacitanceMatrix build_gauge_capacitance(const ChainSpec& chain);

/// K x K matrix C^{gamma,alpha}. The corner (K,1) carries e^{-i alpha L} and
/// (1,K) carries e^{+i alpha L}; for K = 1 every term lands on the one entry.
GaugeCapacitanceMatrix build_quasiperiodic_capacitance(const UnitCellSpec& cell, Complex alpha);

/// diag(l_1, ..., l_N) stored as a vector.
Eigen::VectorXd volume_matrix(const ChainSpec& chain);
Eigen::VectorXd volume_matrix(const UnitCellSpec& cell);

struct SpectralResult {
  Eigen::VectorXcd lambdas;
  Eigen::VectorXcd omegas;
  Eigen::MatrixXcd vectors;       // columns, max-modulus 1
  Eigen::VectorXd localization;   // ||v||_inf / ||v||_2
  Eigen::VectorXd residuals;      // ||C v - lambda V v||_2 / ||C||_F
};

/// Solves C a = lambda V a through V^{-1} C and maps omega = v_b sqrt(delta lambda)
/// on the branch with non-negative real part.
SpectralResult solve_spectrum(const Eigen::MatrixXcd& C, const Eigen::VectorXd& volumes, double delta,
                              double v_b);
SpectralResult solve_spectrum(const GaugeCapacitanceMatrix& C, const Eigen::VectorXd& volumes,
                              double delta, double v_b);
/// Convenience: build C^gamma for the chain and solve with its own delta, v_b.
SpectralResult solve_chain(const ChainSpec& chain);

/// Per-resonator complex speeds: lambdas are eigenvalues of
/// diag(delta v_i^2 / l_i) C and omegas their right-half-plane square roots.
SpectralResult solve_material_spectrum(const Eigen::MatrixXcd& C, const Eigen::VectorXd& volumes,
                                       std::span<const Complex> speeds, double delta);

/// u(x) = sum_j a_j V_j(x): a_j on resonator j, linear across gaps, and constant
/// beyond the outermost resonators. grid must be sorted ascending.
std::vector<Complex> reconstruct_mode(const ChainSpec& chain, const Eigen::VectorXcd& eigvec,
                                      std::span<const double> grid);

}  // namespace skinfx
