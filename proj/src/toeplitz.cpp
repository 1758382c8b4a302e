#include "skinfx/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skinfx/capmat.hpp"

namespace skinfx {

namespace {

void require_size(int n) {
  if (n < 1) throw ValidationError("matrix size must be at least 1");
}

// Coupling s with s^2 = ac, chosen so that the vector formulas hold exactly.
Complex coupling(const TridiagonalSymbol& sym) {
  if (sym.c == 0.0 || sym.a == 0.0) return 0.0;
  return sym.c * std::sqrt(sym.a / sym.c);
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

}  // namespace

TridiagonalSymbol skin_symbol(double gamma, double ell, double s) {
  if (ell <= 0.0 || s <= 0.0) throw ValidationError("non-positive length or spacing");
  const double x = gamma * ell;
  const double p = gauge_kernel(x) / s;
  const double q = gauge_kernel(-x) / s;
  return {-q, p + q, -p};
}

Eigen::MatrixXcd toeplitz_matrix(const TridiagonalSymbol& sym, int n) {
  require_size(n);
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    T(i, i) = sym.b;
    if (i > 0) T(i, i - 1) = sym.a;
    if (i + 1 < n) T(i, i + 1) = sym.c;
  }
  return T;
}

Eigen::MatrixXcd perturbed_toeplitz_matrix(const TridiagonalSymbol& sym, int n) {
  Eigen::MatrixXcd T = toeplitz_matrix(sym, n);
  if (n == 1) {
    T(0, 0) = 0.0;
    return T;
  }
  T(0, 0) = -sym.c;
  T(n - 1, n - 1) = -sym.a;
  return T;
}

Eigen::VectorXcd toeplitz_eigenvalues(const TridiagonalSymbol& sym, int n) {
  require_size(n);
  const Complex s = coupling(sym);
  Eigen::VectorXcd out(n);
  for (int k = 1; k <= n; ++k) out(k - 1) = sym.b + 2.0 * s * std::cos(k * kPi / (n + 1));
  return out;
}

std::vector<Eigenpair> toeplitz_eigenpairs(const TridiagonalSymbol& sym, int n) {
  require_size(n);
  if (sym.a * sym.c == 0.0) throw ValidationError("eigenvectors need ac != 0");
  const Complex rho = std::sqrt(sym.a / sym.c);
  const Eigen::VectorXcd values = toeplitz_eigenvalues(sym, n);
  std::vector<Eigenpair> out;
  out.reserve(n);
  for (int k = 1; k <= n; ++k) {
    const double theta = k * kPi / (n + 1);
    Eigen::VectorXcd v(n);
    Complex power = 1.0;
    for (int i = 1; i <= n; ++i) {
      power *= rho;
      v(i - 1) = power * std::sin(i * theta);
    }
    out.push_back({values(k - 1), std::move(v)});
  }
  return out;
}

std::vector<Eigenpair> perturbed_toeplitz_eigenpairs(const TridiagonalSymbol& sym, int n) {
  require_size(n);
  if (sym.a * sym.c == 0.0) throw ValidationError("perturbed eigenpairs need ac != 0");
  const double scale = std::max({std::abs(sym.a), std::abs(sym.b), std::abs(sym.c)});
  if (std::abs(sym.a + sym.b + sym.c) > 1e-12 * scale) {
    throw ValidationError("perturbed eigenpairs need a + b + c = 0");
  }
  const Complex rho = std::sqrt(sym.a / sym.c);
  const Complex s = coupling(sym);
  std::vector<Eigenpair> out;
  out.reserve(n);
  out.push_back({0.0, Eigen::VectorXcd::Ones(n)});
  for (int k = 2; k <= n; ++k) {
    const double theta = (k - 1) * kPi / n;
    Eigen::VectorXcd v(n);
    Complex power = 1.0;
    for (int j = 1; j <= n; ++j) {
      v(j - 1) = sym.a * power * (std::sin(j * theta) - rho * std::sin((j - 1) * theta));
      power *= rho;
    }
    out.push_back({sym.b + 2.0 * s * std::cos(theta), std::move(v)});
  }
  return out;
}

std::vector<Complex> symbol_curve(const TridiagonalSymbol& sym, int m) {
  if (m < 1) throw ValidationError("need at least one sample");
  std::vector<Complex> out;
  out.reserve(m);
  for (int j = 0; j < m; ++j) out.push_back(sym(std::polar(1.0, 2.0 * kPi * j / m)));
  return out;
}

int winding_number(std::span<const Complex> curve, Complex lam) {
  if (curve.empty()) throw ValidationError("empty curve");
  double re_min = curve[0].real(), re_max = re_min, im_min = curve[0].imag(), im_max = im_min;
  for (const auto& p : curve) {
    re_min = std::min(re_min, p.real());
    re_max = std::max(re_max, p.real());
    im_min = std::min(im_min, p.imag());
    im_max = std::max(im_max, p.imag());
  }
  const double diameter = std::hypot(re_max - re_min, im_max - im_min);
  const std::size_t m = curve.size();
  double dist = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Complex p0 = curve[j];
    const Complex p1 = curve[(j + 1) % m];
    dist = std::min(dist, point_segment_distance(lam, p0, p1));
    total += std::arg((p1 - lam) / (p0 - lam));
  }
  if (dist <= 1e-9 * diameter || dist == 0.0) throw OnEssentialSpectrum();
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int winding_number(const TridiagonalSymbol& sym, Complex lam) {
  int m = 64;
  int previous = winding_number(symbol_curve(sym, m), lam);
  int repeats = 0;
  while (repeats < 2) {
    if (m >= (1 << 22)) throw NumericalError("winding number did not stabilise");
    m *= 2;
    const int current = winding_number(symbol_curve(sym, m), lam);
    repeats = current == previous ? repeats + 1 : 0;
    previous = current;
  }
  return previous;
}

std::string SpectrumClass::label() const {
  switch (kind) {
    case essential:
      return "essential";
    case winding:
      return "winding(" + std::to_string(winding_number) + ")";
    default:
      return "resolvent";
  }
}

SpectrumClass operator_spectrum_classify(const TridiagonalSymbol& sym, Complex lam) {
  // lam lies on f(S^1) iff a z^2 + (b - lam) z + c has a root on |z| = 1.
  const Complex A = sym.a;
  const Complex B = sym.b - lam;
  const Complex C = sym.c;
  std::vector<Complex> roots;
  if (A != 0.0) {
    const Complex disc = std::sqrt(B * B - 4.0 * A * C);
    const Complex q = -0.5 * (B + (std::real(std::conj(B) * disc) >= 0.0 ? disc : -disc));
    if (q != 0.0) {
      roots = {q / A, C / q};
    } else {
      roots = {0.0, 0.0};
    }
  } else if (B != 0.0) {
    roots = {-C / B};
  } else if (C == 0.0) {
    return {SpectrumClass::essential, 0};
  }
  for (const auto& z : roots) {
    if (std::abs(std::abs(z) - 1.0) <= 1e-9) return {SpectrumClass::essential, 0};
  }
  try {
    const int w = winding_number(sym, lam);
    if (w != 0) return {SpectrumClass::winding, w};
    return {SpectrumClass::resolvent, 0};
  } catch (const OnEssentialSpectrum&) {
    return {SpectrumClass::essential, 0};
  }
}

std::vector<DecayEntry> decay_bound_check(const Eigen::MatrixXcd& vectors, double gamma, double ell) {
  const double x = gamma * ell;
  if (!(x > 0.0)) throw ValidationError("decay check needs gamma * ell > 0");
  const double bound = std::pow(1.0 + std::exp(0.5 * x), 2);
  std::vector<DecayEntry> out;
  out.reserve(vectors.cols());
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    const auto v = vectors.col(k);
    const double top = v.cwiseAbs().maxCoeff();
    if (top == 0.0) throw ValidationError("zero vector");
    double kappa = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      kappa = std::max(kappa, std::abs(v(i)) / top * std::exp(0.5 * x * static_cast<double>(i)));
    }
    const bool kernel = ((v.array() - v(0)).abs() <= 1e-8 * top).all();
    out.push_back({kappa, bound, kappa <= bound, kernel});
  }
  return out;
}

CorrespondenceReport eigenpair_correspondence(const TridiagonalSymbol& sym, int n) {
  const auto perturbed = perturbed_toeplitz_eigenpairs(sym, n);
  const auto plain = toeplitz_eigenpairs(sym, n);
  CorrespondenceReport report;
  report.unmatched = 1;
  std::vector<bool> used(plain.size(), false);
  for (int k = 1; k < n; ++k) {
    int best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double gap = std::abs(perturbed[k].value - plain[i].value);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < 0) {
      report.injective = false;
      ++report.unmatched;
      report.matches.push_back(-1);
      continue;
    }
    used[best] = true;
    report.matches.push_back(best);
    report.max_eigenvalue_gap = std::max(report.max_eigenvalue_gap, best_gap);
    const Eigen::VectorXcd u = perturbed[k].vector.normalized();
    const Eigen::VectorXcd w = plain[best].vector.normalized();
    const double overlap = std::min(1.0, std::abs(u.dot(w)));
    report.max_vector_distance = std::max(report.max_vector_distance, std::sqrt(2.0 - 2.0 * overlap));
  }
  return report;
}

}  // namespace skinfx
