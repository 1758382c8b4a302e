#include "skinfx/gbz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "skinfx/capmat.hpp"
#include "skinfx/eigensolve.hpp"

namespace skinfx {

namespace {

bool unit_dimer(const UnitCellSpec& cell) {
  return cell.size() == 2 && cell.lengths[0] == 1.0 && cell.lengths[1] == 1.0;
}

struct Root {
  double beta;
  double lambda;
};

// Roots of Im lambda(alpha + i beta) with Re lambda > 0 on [-half, half].
std::vector<Root> scan_roots(const std::function<Complex(double)>& at, double half, bool& degenerate) {
  constexpr int intervals = 64;
  std::array<double, intervals + 1> beta{};
  std::array<Complex, intervals + 1> value{};
  double scale = 0.0, im_max = 0.0;
  for (int j = 0; j <= intervals; ++j) {
    beta[j] = -half + 2.0 * half * j / intervals;
    value[j] = at(beta[j]);
    scale = std::max(scale, std::abs(value[j]));
    im_max = std::max(im_max, std::abs(value[j].imag()));
  }
  degenerate = im_max <= 1e-12 * scale;
  std::vector<Root> roots;
  if (degenerate) return roots;
  for (int j = 0; j < intervals; ++j) {
    double lo = beta[j], hi = beta[j + 1];
    double flo = value[j].imag(), fhi = value[j + 1].imag();
    if (flo == 0.0) {
      hi = lo;
    } else if (fhi == 0.0) {
      if (j + 1 < intervals) continue;  // picked up as the next interval's left end
      lo = hi;
    } else if ((flo < 0.0) == (fhi < 0.0)) {
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = at(mid).imag();
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double b = 0.5 * (lo + hi);
    const Complex lam = at(b);
    // A sign change across a square-root branch cut is not a root.
    if (std::abs(lam.imag()) <= 1e-8 * std::abs(lam) && lam.real() > 0.0) roots.push_back({b, lam.real()});
  }
  return roots;
}

std::optional<Root> gbz_root(const UnitCellSpec& cell, int band, double alpha, double half,
                             std::optional<double> previous, bool allow_neighbours) {
  auto at = [&](double beta) { return cell_band_eigenvalues(cell, Complex(alpha, beta))(band); };
  bool degenerate = false;
  std::vector<Root> roots = scan_roots(at, half, degenerate);
  if (!degenerate && roots.empty()) roots = scan_roots(at, 2.0 * half, degenerate);
  if (degenerate) {
    // Im lambda vanishes for every beta: take the limit of the neighbouring roots.
    if (!allow_neighbours) return std::nullopt;
    const double h = 1e-6 * kPi / cell.period();
    const auto left = gbz_root(cell, band, alpha - h, half, previous, false);
    const auto right = gbz_root(cell, band, alpha + h, half, previous, false);
    if (!left || !right) return std::nullopt;
    const double b = 0.5 * (left->beta + right->beta);
    const Complex lam = at(b);
    if (!(lam.real() > 0.0) || std::abs(lam.imag()) > 1e-8 * std::abs(lam)) return std::nullopt;
    return Root{b, lam.real()};
  }
  if (roots.empty()) return std::nullopt;
  const double target = previous.value_or(0.0);
  return *std::min_element(roots.begin(), roots.end(), [&](const Root& x, const Root& y) {
    return std::abs(x.beta - target) < std::abs(y.beta - target);
  });
}

// Minimises f over a rectangle with Nelder-Mead; trial points are clamped.
struct Simplex {
  std::array<Complex, 3> p;
  std::array<double, 3> f;
};

Complex clamp_to(const Window& w, Complex z) {
  return {std::clamp(z.real(), w.re_min, w.re_max), std::clamp(z.imag(), w.im_min, w.im_max)};
}

Complex nelder_mead(const std::function<double(Complex)>& f, Complex start, double step, const Window& w) {
  Simplex s;
  s.p = {clamp_to(w, start), clamp_to(w, start + step), clamp_to(w, start + Complex(0.0, step))};
  for (int i = 0; i < 3; ++i) s.f[i] = f(s.p[i]);
  for (int it = 0; it < 4000; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    const double size = std::max(std::abs(s.p[worst] - s.p[best]), std::abs(s.p[mid] - s.p[best]));
    if (s.f[worst] - s.f[best] <= 1e-16 && size <= 1e-14 * (1.0 + std::abs(s.p[best]))) break;
    if (size <= 1e-15 * (1.0 + std::abs(s.p[best]))) break;
    const Complex centroid = 0.5 * (s.p[best] + s.p[mid]);
    const Complex xr = clamp_to(w, centroid + (centroid - s.p[worst]));
    const double fr = f(xr);
    if (fr < s.f[best]) {
      const Complex xe = clamp_to(w, centroid + 2.0 * (centroid - s.p[worst]));
      const double fe = f(xe);
      if (fe < fr) {
        s.p[worst] = xe;
        s.f[worst] = fe;
      } else {
        s.p[worst] = xr;
        s.f[worst] = fr;
      }
      continue;
    }
    if (fr < s.f[mid]) {
      s.p[worst] = xr;
      s.f[worst] = fr;
      continue;
    }
    const Complex xc = fr < s.f[worst] ? centroid + 0.5 * (xr - centroid) : centroid + 0.5 * (s.p[worst] - centroid);
    const double fc = f(xc);
    if (fc < std::min(fr, s.f[worst])) {
      s.p[worst] = xc;
      s.f[worst] = fc;
      continue;
    }
    for (int i : {mid, worst}) {
      s.p[i] = s.p[best] + 0.5 * (s.p[i] - s.p[best]);
      s.f[i] = f(s.p[i]);
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (s.f[i] < s.f[best]) best = i;
  }
  return s.p[best];
}

struct Candidate {
  Complex alpha;
  double value;
};

// Newton iteration on the sheet nearest to omega; only improving steps are kept.
Candidate polish(const ComplexBandFunction& bands, Complex omega, Candidate c, const Window& w) {
  auto nearest = [&](const Eigen::VectorXcd& v, Complex target) {
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v(i) - target) < std::abs(v(k) - target)) k = i;
    }
    return v(k);
  };
  for (int it = 0; it < 40; ++it) {
    const Complex here = nearest(bands(c.alpha), omega);
    const double h = 1e-7 * (1.0 + std::abs(c.alpha));
    const Complex fwd = nearest(bands(c.alpha + h), here);
    const Complex bwd = nearest(bands(c.alpha - h), here);
    const Complex slope = (fwd - bwd) / (2.0 * h);
    if (slope == 0.0) break;
    const Complex next = clamp_to(w, c.alpha - (here - omega) / slope);
    const double value = std::abs(omega - nearest(bands(next), omega));
    if (!(value < c.value)) break;
    c = {next, value};
  }
  return c;
}

bool on_boundary(const Window& w, Complex z) {
  const double tol = 1e-12 * std::max({1.0, w.re_max - w.re_min, w.im_max - w.im_min});
  return std::abs(z.real() - w.re_min) <= tol || std::abs(z.real() - w.re_max) <= tol ||
         std::abs(z.imag() - w.im_min) <= tol || std::abs(z.imag() - w.im_max) <= tol;
}

double distance_to_segment(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

Eigen::VectorXcd to_frequencies(const Eigen::VectorXcd& lambdas, double delta, double v_b) {
  Eigen::VectorXcd w(lambdas.size());
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) w(k) = v_b * sqrt_right_half(delta * lambdas(k));
  return w;
}

}  // namespace

Eigen::VectorXcd cell_band_eigenvalues(const UnitCellSpec& cell, Complex alpha) {
  if (cell.size() == 1) {
    const Eigen::MatrixXcd C = build_quasiperiodic_capacitance(cell, alpha).entries;
    return Eigen::VectorXcd::Constant(1, C(0, 0) / cell.lengths[0]);
  }
  if (unit_dimer(cell)) return dimer_branches({cell.spacings[0], cell.spacings[1], cell.gamma}, alpha);
  const Eigen::MatrixXcd C = build_quasiperiodic_capacitance(cell, alpha).entries;
  return eigen_decompose(volume_matrix(cell).cwiseInverse().asDiagonal() * C, false).values;
}

GBZCurve gbz_curve(const UnitCellSpec& cell, int band_index, int alpha_samples) {
  cell.validate();
  if (alpha_samples < 16) throw ValidationError("gbz needs at least 16 alpha samples");
  if (band_index < 0 || band_index >= static_cast<int>(cell.size())) throw ValidationError("no such band");
  const double L = cell.period();
  const double ell = *std::max_element(cell.lengths.begin(), cell.lengths.end());
  const double half = std::max(std::abs(cell.gamma) * ell, 1e-3);
  GBZCurve curve;
  std::optional<double> previous;
  for (int m = 1; m <= alpha_samples; ++m) {
    const double alpha = -kPi / L + 2.0 * kPi * m / (alpha_samples * L);
    const auto root = gbz_root(cell, band_index, alpha, half, previous, true);
    if (!root) {
      curve.missing_alphas.push_back(alpha);
      continue;
    }
    curve.points.push_back({alpha, root->beta, root->lambda, band_index});
    previous = root->beta;
  }
  return curve;
}

ComplexBandFunction frequency_bands(const UnitCellSpec& cell) {
  if (cell.speeds) {
    return [cell](Complex alpha) { return material_band_eigs(cell, alpha, *cell.speeds, cell.delta).omegas; };
  }
  return [cell](Complex alpha) { return to_frequencies(cell_band_eigenvalues(cell, alpha), cell.delta, cell.v_b); };
}

Window default_recovery_window(const UnitCellSpec& cell) {
  const double edge = kPi / cell.period();
  const double ell = *std::max_element(cell.lengths.begin(), cell.lengths.end());
  const double half = std::max(std::abs(cell.gamma) * ell, 0.5);
  return {-edge, edge, -half, half};
}

RecoveredQuasiperiodicity recover_quasiperiodicity(Complex omega, const UnitCellSpec& cell,
                                                   const ComplexBandFunction& bands, std::optional<Window> window,
                                                   int mode_index) {
  cell.validate();
  const Window w = window.value_or(default_recovery_window(cell));
  if (!(w.re_max > w.re_min) || !(w.im_max > w.im_min)) throw ValidationError("degenerate window");
  auto objective = [&](Complex alpha) {
    const Eigen::VectorXcd v = bands(alpha);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i) best = std::min(best, std::abs(omega - v(i)));
    return best;
  };

  constexpr int grid = 64;
  Eigen::MatrixXd values(grid, grid);
  auto node = [&](int i, int j) {
    return Complex(w.re_min + (w.re_max - w.re_min) * i / (grid - 1), w.im_min + (w.im_max - w.im_min) * j / (grid - 1));
  };
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) values(i, j) = objective(node(i, j));
  }
  // Grid local minima, best first.
  std::vector<Candidate> starts;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di) {
        for (int dj = -1; dj <= 1 && local; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && a < grid && b >= 0 && b < grid && values(a, b) < values(i, j)) local = false;
        }
      }
      if (local) starts.push_back({node(i, j), values(i, j)});
    }
  }
  std::sort(starts.begin(), starts.end(), [](const Candidate& x, const Candidate& y) { return x.value < y.value; });
  if (starts.size() > 4) starts.resize(4);

  const double step = std::min(w.re_max - w.re_min, w.im_max - w.im_min) / (grid - 1);
  auto refine = [&](Complex start) {
    const Complex a = nelder_mead(objective, start, step, w);
    return polish(bands, omega, {a, objective(a)}, w);
  };
  Candidate best{starts.front().alpha, starts.front().value};
  for (const auto& s : starts) {
    const Candidate c = refine(s.alpha);
    if (c.value < best.value) best = c;
  }

  RecoveredQuasiperiodicity r;
  r.mode_index = mode_index;
  r.omega = omega;
  // Minima come in mirror pairs about the imaginary axis; prefer Re alpha >= 0.
  const Complex mirror_start = clamp_to(w, Complex(-best.alpha.real(), best.alpha.imag()));
  const Candidate mirror = refine(mirror_start);
  if (mirror.value < best.value - 1e-12) {
    best = mirror;
  } else if (std::abs(mirror.value - best.value) <= 1e-12 && std::abs(mirror.alpha - best.alpha) > 1e-9) {
    if (best.alpha.real() < 0.0 && mirror.alpha.real() >= 0.0) {
      r.mirror = best.alpha;
      best = mirror;
    } else {
      r.mirror = mirror.alpha;
    }
  }
  r.alpha_hat = best.alpha;
  r.residual = best.value;
  r.clipped = on_boundary(w, best.alpha);
  return r;
}

std::vector<RecoveredQuasiperiodicity> recover_chain(const ChainSpec& chain, const UnitCellSpec& cell_in,
                                                     std::optional<Window> window) {
  chain.validate();
  UnitCellSpec cell = cell_in;
  cell.delta = chain.delta;
  cell.v_b = chain.v_b;
  cell.validate();
  const GaugeCapacitanceMatrix C = build_gauge_capacitance(chain);
  const SpectralResult spec = chain.speeds
                                  ? solve_material_spectrum(C.entries, volume_matrix(chain), *chain.speeds, chain.delta)
                                  : solve_spectrum(C, volume_matrix(chain), chain.delta, chain.v_b);
  const Eigen::Index n = spec.lambdas.size();
  Eigen::Index kernel = 0;
  spec.lambdas.cwiseAbs().minCoeff(&kernel);
  const bool has_kernel = std::abs(spec.lambdas(kernel)) <= 1e-9 * spec.lambdas.cwiseAbs().maxCoeff();
  std::vector<int> modes;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(has_kernel && k == kernel)) modes.push_back(static_cast<int>(k));
  }
  const ComplexBandFunction bands = frequency_bands(cell);
  std::vector<RecoveredQuasiperiodicity> out(modes.size());
  parallel_for(modes.size(), [&](std::size_t i) {
    out[i] = recover_quasiperiodicity(spec.omegas(modes[i]), cell, bands, window, modes[i]);
  });
  return out;
}

std::vector<ConvergenceRow> convergence_study(const UnitCellSpec& cell, std::span<const int> sizes) {
  cell.validate();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || (i > 0 && sizes[i] <= sizes[i - 1])) throw ValidationError("sizes must be increasing");
  }
  constexpr int samples = 1024;
  const double step = 2.0 * kPi / (samples * cell.period());
  // Segments joining consecutive GBZ samples of each band.
  std::vector<std::pair<Complex, Complex>> segments;
  for (int b = 0; b < static_cast<int>(cell.size()); ++b) {
    const GBZCurve curve = gbz_curve(cell, b, samples);
    for (std::size_t m = 0; m < curve.points.size(); ++m) {
      const Complex p(curve.points[m].lambda, 0.0);
      segments.push_back({p, p});
      if (m + 1 < curve.points.size() && curve.points[m + 1].alpha - curve.points[m].alpha < 1.5 * step) {
        segments.push_back({p, Complex(curve.points[m + 1].lambda, 0.0)});
      }
    }
  }
  if (segments.empty()) throw NumericalError("empty generalised Brillouin zone");
  std::vector<ConvergenceRow> rows(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    const ChainSpec chain = periodic_chain(cell, sizes[i]);
    const Eigen::MatrixXcd A =
        volume_matrix(chain).cwiseInverse().asDiagonal() * build_gauge_capacitance(chain).entries;
    const Eigen::VectorXcd lambdas = eigen_decompose(A, false).values;
    Eigen::Index kernel = 0;
    lambdas.cwiseAbs().minCoeff(&kernel);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
      if (k == kernel) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : segments) best = std::min(best, distance_to_segment(lambdas(k), a, b));
      worst = std::max(worst, best);
    }
    rows[i] = {sizes[i], worst};
  });
  return rows;
}

}  // namespace skinfx
