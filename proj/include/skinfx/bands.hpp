#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skinfx/common.hpp"
#include "skinfx/geometry.hpp"

namespace skinfx {

/// Band eigenvalues at one quasiperiodicity, sorted by (Re, Im).
struct BandSample {
  Complex alpha;
  Eigen::VectorXcd lambdas;
  Eigen::VectorXcd omegas;
};

/// Periodic dimer with unit resonator lengths.
struct DimerParams {
  double s1 = 1.0;
  double s2 = 1.0;
  double gamma = 0.0;

  double period() const { return 2.0 + s1 + s2; }
  /// The corresponding two-resonator unit cell.
  UnitCellSpec cell() const;
};

/// Contrast and background speed used to turn band eigenvalues into frequencies.
struct FrequencyScale {
  double delta = 1e-3;
  double v_b = 1.0;
};

/// Closed-form dimer band eigenvalues, principal square root. The entries of
/// `branches` keep the (minus, plus) branch order before sorting.
BandSample dimer_bands(const DimerParams& p, Complex alpha, const FrequencyScale& scale = {});
Eigen::Vector2cd dimer_branches(const DimerParams& p, Complex alpha);

/// lambda^alpha of the unit-length monomer with spacing s, L = 1 + s.
Complex monomer_band(double s, double gamma, Complex alpha);

/// Gauge at which the dimer bands coalesce at alpha = pi/L. Zero when s1 = s2;
/// ValidationError("no exceptional point") when 6 s1 s2 - s1^2 - s2^2 <= 0.
double critical_gamma(double s1, double s2);

struct ExceptionalPointReport {
  Complex discriminant;  // tr^2 - 4 det of C^{gamma,alpha}
  double threshold;      // 1e-8 ||C||_F^2
  bool coalesced;
  double eigenvector_angle;  // principal angle between the two eigenvectors
};

ExceptionalPointReport exceptional_point_check(const DimerParams& p, Complex alpha);

struct VorticityResult {
  double nu;        // rounded to a half-integer when within 1e-3, raw otherwise
  double raw;
  bool quantized;
  int samples;      // samples used after any refinement
  std::string warning;
};

/// Maps a real quasiperiodicity to the band frequencies of a two-band system.
using BandFunction = std::function<Eigen::VectorXcd(double alpha)>;

/// (1/2 pi) times the unwrapped change of arg(omega_2 - omega_1) over
/// [-pi/L, pi/L], with labels fixed by sorting at -pi/L and followed by
/// continuity. Samples are doubled when a step turns by more than pi/2.
VorticityResult band_difference_winding(const BandFunction& bands, double period, int samples);

/// Dimer vorticity from the closed-form frequency bands.
VorticityResult vorticity(const DimerParams& p, int samples = 1024, const FrequencyScale& scale = {});

/// Eigenvalues of diag(delta v_i^2 / l_i) C^{0,alpha}; omegas are their
/// right-half-plane square roots. Requires gamma = 0.
BandSample material_band_eigs(const UnitCellSpec& cell, Complex alpha, std::span<const Complex> speeds,
                              double delta);

/// Dense band eigenvalues of V^{-1} C^{gamma,alpha} with the cell's delta and
/// v_b, or the material problem when the cell carries speeds.
BandSample cell_bands(const UnitCellSpec& cell, Complex alpha);

/// Real-alpha sweep over [-pi/L, pi/L] at `samples` points.
struct BandSweep {
  std::vector<BandSample> samples;
  /// labels[m][i]: continuity-tracked band index of sorted entry i of sample m.
  std::vector<std::vector<int>> labels;
};

BandSweep band_sweep(const UnitCellSpec& cell, int samples);

}  // namespace skinfx
