#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "skinfx/bands.hpp"
#include "skinfx/geometry.hpp"
#include "skinfx/spectral.hpp"

namespace skinfx {

/// A point alpha + i beta of the generalised Brillouin zone of one band.
struct GBZPoint {
  double alpha;
  double beta;
  double lambda;  // real and positive
  int band_index; // 0-based
};

struct GBZCurve {
  std::vector<GBZPoint> points;
  std::vector<double> missing_alphas;  // samples where no root was bracketed
};

/// Band eigenvalues at complex alpha in a fixed labelling: the closed forms
/// for a unit-length monomer or dimer (minus branch first), the sorted dense
/// spectrum otherwise.
Eigen::VectorXcd cell_band_eigenvalues(const UnitCellSpec& cell, Complex alpha);

/// For alpha_m = -pi/L + 2 pi m / (M L), m = 1..M, finds beta with
/// Im lambda(alpha + i beta) = 0 and Re lambda > 0 by bracketing and bisection
/// over [-|gamma| l, |gamma| l] (widened once).
GBZCurve gbz_curve(const UnitCellSpec& cell, int band_index, int alpha_samples);

struct RecoveredQuasiperiodicity {
  int mode_index = 0;
  Complex omega;
  Complex alpha_hat;
  double residual = 0.0;
  std::optional<Complex> mirror;  // equally good point -Re alpha + i Im alpha
  bool clipped = false;
};

/// All band frequencies at a complex alpha.
using ComplexBandFunction = std::function<Eigen::VectorXcd(Complex alpha)>;

/// Frequencies of the cell's bands (closed forms where available) with the
/// cell's delta, v_b and optional speeds.
ComplexBandFunction frequency_bands(const UnitCellSpec& cell);

/// Y* x [-B, B] with B = max(|gamma| max l, 0.5).
Window default_recovery_window(const UnitCellSpec& cell);

/// argmin over the window of min_i |omega - omega_i(alpha)|: 64 x 64 grid,
/// Nelder-Mead, then a Newton polish on the nearest sheet.
RecoveredQuasiperiodicity recover_quasiperiodicity(Complex omega, const UnitCellSpec& cell,
                                                   const ComplexBandFunction& bands,
                                                   std::optional<Window> window = std::nullopt,
                                                   int mode_index = 0);

/// Recovers every mode of the finite chain except the kernel mode (the one
/// eigenvalue of smallest modulus when it is below 1e-9 of the largest).
/// The bands use the chain's delta and v_b.
std::vector<RecoveredQuasiperiodicity> recover_chain(const ChainSpec& chain, const UnitCellSpec& cell,
                                                     std::optional<Window> window = std::nullopt);

struct ConvergenceRow {
  int cells;
  double max_distance;
};

/// Distance of the finite-chain eigenvalues (kernel excluded) to the union of
/// the GBZ band polylines sampled at 1024 points.
std::vector<ConvergenceRow> convergence_study(const UnitCellSpec& cell, std::span<const int> sizes);

}  // namespace skinfx
