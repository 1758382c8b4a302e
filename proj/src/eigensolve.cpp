#include "skinfx/eigensolve.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace skinfx {

void normalize_columns_inf(Eigen::MatrixXcd& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    auto col = vectors.col(k);
    const double top = col.cwiseAbs().maxCoeff();
    if (top == 0.0) continue;
    Eigen::Index pivot = 0;
    while (std::abs(col(pivot)) < top * (1.0 - 1e-12)) ++pivot;
    const Complex phase = std::abs(col(pivot)) / col(pivot);
    col *= phase / top;
    col(pivot) = Complex(std::abs(col(pivot)), 0.0);
  }
}

EigenDecomposition eigen_decompose(const Eigen::MatrixXcd& A, bool compute_vectors) {
  if (A.rows() != A.cols()) throw ValidationError("eigen_decompose needs a square matrix");
  const Eigen::Index n = A.rows();
  Eigen::VectorXcd values(n);
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd scale;

  if (A.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::MatrixXd B = A.real();
    scale = balance_in_place(B);
    Eigen::EigenSolver<Eigen::MatrixXd> es(B, compute_vectors);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = es.eigenvalues();
    if (compute_vectors) vectors = es.eigenvectors();
  } else {
    Eigen::MatrixXcd B = A;
    scale = balance_in_place(B);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B, compute_vectors);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = es.eigenvalues();
    if (compute_vectors) vectors = es.eigenvectors();
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return lex_less(values(a), values(b)); });

  EigenDecomposition out;
  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.values(k) = values(order[k]);
  if (compute_vectors) {
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) out.vectors.col(k) = scale.asDiagonal() * vectors.col(order[k]);
    normalize_columns_inf(out.vectors);
  }
  return out;
}

}  // namespace skinfx
