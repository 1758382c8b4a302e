#pragma once

#include "skinfx/common.hpp"

namespace skinfx {

/// Eigenvalues sorted by (Re, Im) with matching eigenvector columns.
struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

/// Diagonal similarity scaling (powers of two) that equalises row and column
/// norms: on return A holds D^{-1} A D and the result holds diag(D).
template <typename Scalar>
Eigen::VectorXd balance_in_place(Matrix<Scalar>& A) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  bool done = false;
  for (int sweep = 0; !done && sweep < 200; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale(i) *= f;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
  return scale;
}

/// Scales each column to unit max-modulus and rotates its phase so that the
/// first entry of largest modulus is real and positive.
void normalize_columns_inf(Eigen::MatrixXcd& vectors);

/// Dense non-symmetric eigendecomposition with balancing. Real input uses the
/// real Schur path so that real eigenvalues have exactly zero imaginary part.
/// Throws NumericalError when the QR iteration does not converge.
EigenDecomposition eigen_decompose(const Eigen::MatrixXcd& A, bool compute_vectors = true);

}  // namespace skinfx
