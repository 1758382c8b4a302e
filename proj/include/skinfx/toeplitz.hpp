#pragma once

#include <span>
#include <string>
#include <vector>

#include "skinfx/common.hpp"

namespace skinfx {

/// f(z) = b + a z + c / z: a on the subdiagonal, b on the diagonal, c on the
/// superdiagonal.
struct TridiagonalSymbol {
  Complex a;
  Complex b;
  Complex c;

  Complex operator()(Complex z) const { return b + a * z + c / z; }
};

/// Symbol of the uniform gauge chain with lengths ell and spacings s. Its
/// perturbed Toeplitz matrix is exactly C^gamma.
TridiagonalSymbol skin_symbol(double gamma, double ell, double s);

Eigen::MatrixXcd toeplitz_matrix(const TridiagonalSymbol& sym, int n);
/// T_N with the corner diagonal entries replaced by -c (top) and -a (bottom),
/// so that every row sums to zero when a + b + c = 0.
Eigen::MatrixXcd perturbed_toeplitz_matrix(const TridiagonalSymbol& sym, int n);

struct Eigenpair {
  Complex value;
  Eigen::VectorXcd vector;
};

/// b + 2 s cos(k pi / (N+1)), k = 1..N, where s = c sqrt(a/c) so that s^2 = ac.
/// With ac = 0 every eigenvalue is b.
Eigen::VectorXcd toeplitz_eigenvalues(const TridiagonalSymbol& sym, int n);

/// Closed-form eigenpairs of T_N in k order. Vector entries are
/// rho^i sin(i k pi/(N+1)) with rho = sqrt(a/c). Requires ac != 0.
std::vector<Eigenpair> toeplitz_eigenpairs(const TridiagonalSymbol& sym, int n);

/// Closed-form eigenpairs of the perturbed matrix when a + b + c = 0:
/// (0, ones) followed by b + 2 s cos((k-1) pi / N), k = 2..N.
std::vector<Eigenpair> perturbed_toeplitz_eigenpairs(const TridiagonalSymbol& sym, int n);

/// f(e^{i theta_m}), theta_m = 2 pi m / M. M >= 8 is needed for a useful
/// winding number; smaller M is accepted for inspection.
std::vector<Complex> symbol_curve(const TridiagonalSymbol& sym, int m);

/// Raised when a point sits on the curve, where the winding number is undefined.
class OnEssentialSpectrum : public ValidationError {
 public:
  OnEssentialSpectrum() : ValidationError("on essential spectrum") {}
};

/// Winding of the closed polyline around lam.
int winding_number(std::span<const Complex> curve, Complex lam);
/// Winding of the symbol curve, refining the sampling until the value has
/// repeated twice.
int winding_number(const TridiagonalSymbol& sym, Complex lam);

struct SpectrumClass {
  enum Kind { essential, winding, resolvent } kind;
  int winding_number = 0;

  std::string label() const;
};

/// Membership of lam in the spectrum of the semi-infinite Toeplitz operator.
SpectrumClass operator_spectrum_classify(const TridiagonalSymbol& sym, Complex lam);

struct DecayEntry {
  double kappa_hat;   // max_i |a_i| e^{gamma ell (i-1)/2}
  double bound;       // (1 + e^{gamma ell / 2})^2
  bool pass;
  bool kernel_mode;   // constant vector: not expected to decay
};

/// Checks |a_i| <= kappa e^{-gamma ell (i-1)/2} with the max-modulus
/// normalisation applied to each column. Requires gamma ell > 0.
std::vector<DecayEntry> decay_bound_check(const Eigen::MatrixXcd& vectors, double gamma, double ell);

struct CorrespondenceReport {
  std::vector<int> matches;       // matches[k-2]: index into the T_N pairs for mu_k, k = 2..N
  int unmatched = 0;              // mu_1 = 0 is never matched
  bool injective = true;
  double max_eigenvalue_gap = 0;  // max |mu - lambda| over matched pairs
  double max_vector_distance = 0; // phase-aligned distance of unit vectors
};

CorrespondenceReport eigenpair_correspondence(const TridiagonalSymbol& sym, int n);

}  // namespace skinfx
