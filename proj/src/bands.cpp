#include "skinfx/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skinfx/capmat.hpp"
#include "skinfx/eigensolve.hpp"

namespace skinfx {

namespace {

void sort_sample(BandSample& s) {
  const Eigen::Index n = s.lambdas.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return lex_less(s.lambdas(a), s.lambdas(b)); });
  Eigen::VectorXcd l(n), w(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    l(k) = s.lambdas(order[k]);
    w(k) = s.omegas(order[k]);
  }
  s.lambdas = std::move(l);
  s.omegas = std::move(w);
}

Eigen::VectorXcd frequencies(const Eigen::VectorXcd& lambdas, const FrequencyScale& scale) {
  Eigen::VectorXcd w(lambdas.size());
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) w(k) = scale.v_b * sqrt_right_half(scale.delta * lambdas(k));
  return w;
}

// perm[label] = index into `next` minimising the total distance to `prev`.
std::vector<int> follow(const Eigen::VectorXcd& prev, const Eigen::VectorXcd& next) {
  const int n = static_cast<int>(prev.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 6) {
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (int i = 0; i < n; ++i) cost += std::abs(prev(i) - next(perm[i]));
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (!used[j] && (pick < 0 || std::abs(prev(i) - next(j)) < std::abs(prev(i) - next(pick)))) pick = j;
    }
    used[pick] = true;
    perm[i] = pick;
  }
  return perm;
}

}  // namespace

UnitCellSpec DimerParams::cell() const {
  UnitCellSpec c;
  c.lengths = {1.0, 1.0};
  c.spacings = {s1, s2};
  c.gamma = gamma;
  return c;
}

Eigen::Vector2cd dimer_branches(const DimerParams& p, Complex alpha) {
  if (!(p.s1 > 0.0) || !(p.s2 > 0.0)) throw ValidationError("non-positive spacing");
  const double g = p.gamma;
  const double sum = p.s1 + p.s2;
  const double diff = p.s1 - p.s2;
  const double d = std::cosh(g) * diff * diff + sum * sum;
  const Complex inner = 4.0 * p.s1 * p.s2 * std::cosh(Complex(g, 0.0) - Complex(0.0, 1.0) * alpha * p.period()) + d;
  const Complex root = std::sqrt(2.0) * std::exp(0.5 * g) * std::sqrt(inner);
  // g(-gamma) = gamma / (e^gamma - 1), finite through gamma = 0.
  const double pref = gauge_kernel(-g) / (2.0 * p.s1 * p.s2);
  const double base = (std::exp(g) + 1.0) * sum;
  return {pref * (base - root), pref * (base + root)};
}

BandSample dimer_bands(const DimerParams& p, Complex alpha, const FrequencyScale& scale) {
  BandSample s;
  s.alpha = alpha;
  s.lambdas = dimer_branches(p, alpha);
  s.omegas = frequencies(s.lambdas, scale);
  sort_sample(s);
  return s;
}

Complex monomer_band(double s, double gamma, Complex alpha) {
  if (!(s > 0.0)) throw ValidationError("non-positive spacing");
  const double L = 1.0 + s;
  const Complex forward = std::exp(Complex(0.0, 1.0) * L * alpha);
  const Complex backward = std::exp(Complex(0.0, -1.0) * L * alpha);
  const double eg = std::exp(gamma);
  return gauge_kernel(-gamma) / s * (eg + 1.0 - forward - eg * backward);
}

double critical_gamma(double s1, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw ValidationError("non-positive spacing");
  if (s1 == s2) return 0.0;
  const double denom = 6.0 * s1 * s2 - s1 * s1 - s2 * s2;
  if (denom <= 0.0) throw ValidationError("no exceptional point");
  return std::acosh((s1 + s2) * (s1 + s2) / denom);
}

ExceptionalPointReport exceptional_point_check(const DimerParams& p, Complex alpha) {
  const Eigen::MatrixXcd C = build_quasiperiodic_capacitance(p.cell(), alpha).entries;
  const Complex tr = C.trace();
  const Complex det = C(0, 0) * C(1, 1) - C(0, 1) * C(1, 0);
  ExceptionalPointReport r;
  r.discriminant = tr * tr - 4.0 * det;
  r.threshold = 1e-8 * C.squaredNorm();
  r.coalesced = std::abs(r.discriminant) < r.threshold;
  // Eigenvectors (C01, lambda - C00) of the two roots; unit lengths, V = I.
  const Complex root = std::sqrt(r.discriminant);
  const Complex l1 = 0.5 * (tr - root), l2 = 0.5 * (tr + root);
  Eigen::Vector2cd u, v;
  if (std::abs(C(0, 1)) >= std::abs(C(1, 0))) {
    u << C(0, 1), l1 - C(0, 0);
    v << C(0, 1), l2 - C(0, 0);
  } else {
    u << l1 - C(1, 1), C(1, 0);
    v << l2 - C(1, 1), C(1, 0);
  }
  const double cosine = std::min(1.0, std::abs(u.normalized().dot(v.normalized())));
  // asin of the sine keeps resolution when the vectors are nearly parallel.
  r.eigenvector_angle = std::asin(std::sqrt(std::max(0.0, (1.0 - cosine) * (1.0 + cosine))));
  return r;
}

VorticityResult band_difference_winding(const BandFunction& bands, double period, int samples) {
  if (samples < 2) throw ValidationError("need at least 2 samples");
  if (!(period > 0.0)) throw ValidationError("non-positive period");
  const double edge = kPi / period;
  for (int refinement = 0; refinement <= 6; ++refinement, samples *= 2) {
    Eigen::VectorXcd prev = bands(-edge);
    if (prev.size() != 2) throw ValidationError("band difference winding needs two bands");
    if (lex_less(prev(1), prev(0))) std::swap(prev(0), prev(1));
    Complex diff = prev(1) - prev(0);
    double total = 0.0;
    bool tracked = true;
    for (int m = 1; m <= samples && tracked; ++m) {
      const Eigen::VectorXcd raw = bands(-edge + 2.0 * edge * m / samples);
      const auto perm = follow(prev, raw);
      Eigen::VectorXcd next(2);
      next << raw(perm[0]), raw(perm[1]);
      const Complex d = next(1) - next(0);
      if (d == 0.0 || diff == 0.0) {
        tracked = false;
        break;
      }
      const double step = std::arg(d / diff);
      if (std::abs(step) > 0.5 * kPi) {
        tracked = false;
        break;
      }
      total += step;
      diff = d;
      prev = next;
    }
    if (!tracked) continue;
    VorticityResult r;
    r.raw = total / (2.0 * kPi);
    const double half = std::round(2.0 * r.raw) / 2.0;
    r.quantized = std::abs(r.raw - half) <= 1e-3;
    r.nu = r.quantized ? half + 0.0 : r.raw;
    r.samples = samples;
    if (!r.quantized) r.warning = "winding not within 1e-3 of a half-integer; raw value reported";
    return r;
  }
  throw NumericalError("band tracking failed after 6 refinements");
}

VorticityResult vorticity(const DimerParams& p, int samples, const FrequencyScale& scale) {
  if (samples < 64) throw ValidationError("vorticity needs at least 64 samples");
  if (p.gamma == 0.0) throw ValidationError("vorticity undefined at gamma = 0");
  const double denom = 6.0 * p.s1 * p.s2 - p.s1 * p.s1 - p.s2 * p.s2;
  if (denom > 0.0 && std::abs(p.gamma) - critical_gamma(p.s1, p.s2) == 0.0) {
    throw ValidationError("vorticity undefined at the critical gamma");
  }
  return band_difference_winding(
      [&](double alpha) { return frequencies(dimer_branches(p, alpha), scale); }, p.period(), samples);
}

BandSample material_band_eigs(const UnitCellSpec& cell, Complex alpha, std::span<const Complex> speeds,
                              double delta) {
  if (cell.gamma != 0.0) throw ValidationError("material bands need gamma = 0");
  if (speeds.size() != cell.size()) throw ValidationError("inconsistent list lengths");
  const Eigen::MatrixXcd C = build_quasiperiodic_capacitance(cell, alpha).entries;
  const Eigen::VectorXd V = volume_matrix(cell);
  Eigen::VectorXcd d(C.rows());
  for (Eigen::Index i = 0; i < C.rows(); ++i) d(i) = delta * speeds[i] * speeds[i] / V(i);
  BandSample s;
  s.alpha = alpha;
  s.lambdas = eigen_decompose(d.asDiagonal() * C, false).values;
  s.omegas.resize(s.lambdas.size());
  for (Eigen::Index k = 0; k < s.lambdas.size(); ++k) s.omegas(k) = sqrt_right_half(s.lambdas(k));
  return s;
}

BandSample cell_bands(const UnitCellSpec& cell, Complex alpha) {
  if (cell.speeds) return material_band_eigs(cell, alpha, *cell.speeds, cell.delta);
  const Eigen::MatrixXcd C = build_quasiperiodic_capacitance(cell, alpha).entries;
  BandSample s;
  s.alpha = alpha;
  s.lambdas = eigen_decompose(volume_matrix(cell).cwiseInverse().asDiagonal() * C, false).values;
  s.omegas = frequencies(s.lambdas, {cell.delta, cell.v_b});
  return s;
}

BandSweep band_sweep(const UnitCellSpec& cell, int samples) {
  cell.validate();
  if (samples < 2) throw ValidationError("need at least 2 samples");
  const double edge = kPi / cell.period();
  BandSweep sweep;
  sweep.samples.resize(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t m) {
    sweep.samples[m] = cell_bands(cell, -edge + 2.0 * edge * static_cast<double>(m) / (samples - 1));
  });
  const int k = static_cast<int>(cell.size());
  std::vector<int> first(k);
  std::iota(first.begin(), first.end(), 0);
  sweep.labels.push_back(first);
  // tracked(label) holds the lambda currently carrying each label.
  Eigen::VectorXcd tracked = sweep.samples[0].lambdas;
  for (int m = 1; m < samples; ++m) {
    const auto perm = follow(tracked, sweep.samples[m].lambdas);
    std::vector<int> labels(k);
    for (int label = 0; label < k; ++label) {
      labels[perm[label]] = label;
      tracked(label) = sweep.samples[m].lambdas(perm[label]);
    }
    sweep.labels.push_back(std::move(labels));
  }
  return sweep;
}

}  // namespace skinfx
