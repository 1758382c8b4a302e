#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skinfx/bands.hpp"
#include "skinfx/capmat.hpp"
#include "skinfx/gbz.hpp"
#include "skinfx/geometry.hpp"
#include "skinfx/io.hpp"
#include "skinfx/spectral.hpp"

using namespace skinfx;
using nlohmann::json;

namespace {

std::string num(double x) { return format_number(x); }

// Emits the primary dataset to --out (plus extras and a manifest) or stdout.
class Output {
 public:
  Output(std::string command, std::string path) : command_(std::move(command)), path_(std::move(path)) {}

  json& parameters() { return manifest_.parameters; }
  bool to_file() const { return !path_.empty(); }

  /// Sibling file name: "spec.csv" + "vectors" -> "spec.vectors.csv".
  std::string sibling(const std::string& tag) const {
    std::filesystem::path p(path_);
    const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
    p.replace_extension();
    return p.string() + "." + tag + ext;
  }

  void emit(const CsvTable& table) {
    if (!to_file()) {
      std::cout << table.str();
      return;
    }
    write_file_atomic(path_, table.str());
    manifest_.outputs.push_back(path_);
  }

  void emit_extra(const std::string& tag, const CsvTable& table) {
    if (!to_file()) return;
    const std::string p = sibling(tag);
    write_file_atomic(p, table.str());
    manifest_.outputs.push_back(p);
  }

  void finish(std::chrono::steady_clock::time_point start) {
    if (!to_file()) return;
    manifest_.command = command_;
    manifest_.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(path_ + ".manifest.json", manifest_.to_json().dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string path_;
  RunManifest manifest_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad number \"" + item + "\" in list");
    }
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

ChainSpec load_chain(const std::string& path) { return chain_from_config(read_text_file(path)); }
UnitCellSpec load_cell(const std::string& path) { return cell_from_config(read_text_file(path)); }

SpectralResult chain_spectrum(const ChainSpec& chain) {
  const GaugeCapacitanceMatrix C = build_gauge_capacitance(chain);
  if (chain.speeds) return solve_material_spectrum(C.entries, volume_matrix(chain), *chain.speeds, chain.delta);
  return solve_spectrum(C, volume_matrix(chain), chain.delta, chain.v_b);
}

void emit_spectrum(Output& out, const SpectralResult& r) {
  CsvTable table({"index", "lambda_re", "lambda_im", "omega_re", "omega_im", "localization"});
  for (Eigen::Index k = 0; k < r.lambdas.size(); ++k) {
    table.add_row({std::to_string(k + 1), num(r.lambdas(k).real()), num(r.lambdas(k).imag()), num(r.omegas(k).real()),
                   num(r.omegas(k).imag()), num(r.localization(k))});
  }
  out.emit(table);
  CsvTable vectors({"mode", "site", "re", "im"});
  for (Eigen::Index k = 0; k < r.vectors.cols(); ++k) {
    for (Eigen::Index i = 0; i < r.vectors.rows(); ++i) {
      vectors.add_row({std::to_string(k + 1), std::to_string(i + 1), num(r.vectors(i, k).real()), num(r.vectors(i, k).imag())});
    }
  }
  out.emit_extra("vectors", vectors);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauge capacitance matrices and the non-Hermitian skin effect"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("skinfx ") + kVersion);

  std::string config, cell_path, out_path, eps_text, window_text, sizes_text;
  int grid = 0, resolution = 0, samples = 0, alpha_samples = 0, n = 0;
  double s1 = 0, s2 = 0, gamma = 0, length = 1, spacing = 1, delta = 1e-3, v_b = 1;

  auto* capmat = app.add_subcommand("capmat", "dump the gauge capacitance matrix");
  capmat->add_option("--config", config, "chain configuration")->required();
  capmat->add_option("--out", out_path);

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, frequencies and eigenvectors");
  spectrum->add_option("--config", config)->required();
  spectrum->add_option("--out", out_path);

  auto* modes = app.add_subcommand("modes", "eigenmodes sampled in physical space");
  modes->add_option("--config", config)->required();
  modes->add_option("--grid", grid, "number of sample points")->required()->check(CLI::Range(2, 1000000));
  modes->add_option("--out", out_path);

  auto* interface = app.add_subcommand("interface", "spectrum of the two-gauge interface chain");
  interface->add_option("--n", n, "resonators on each side of the interface site")->required();
  interface->add_option("--gamma", gamma)->required();
  interface->add_option("--length", length)->required();
  interface->add_option("--spacing", spacing)->required();
  interface->add_option("--delta", delta);
  interface->add_option("--v-b", v_b);
  interface->add_option("--out", out_path);

  auto* pseudo = app.add_subcommand("pseudospectrum", "smallest singular values on a grid");
  pseudo->add_option("--config", config)->required();
  pseudo->add_option("--eps", eps_text, "comma-separated eps levels")->required();
  pseudo->add_option("--res", resolution)->required();
  pseudo->add_option("--window", window_text, "re_min,re_max,im_min,im_max");
  pseudo->add_option("--out", out_path);

  auto* bands = app.add_subcommand("bands", "real-alpha band sweep");
  bands->add_option("--cell", cell_path)->required();
  bands->add_option("--samples", samples)->required();
  bands->add_option("--out", out_path);

  auto* exceptional = app.add_subcommand("exceptional", "critical gauge of a dimer");
  exceptional->add_option("--s1", s1)->required();
  exceptional->add_option("--s2", s2)->required();

  auto* vort = app.add_subcommand("vorticity", "winding of the dimer band difference");
  vort->add_option("--s1", s1)->required();
  vort->add_option("--s2", s2)->required();
  vort->add_option("--gamma", gamma)->required();
  samples = 1024;
  vort->add_option("--samples", samples);

  auto* gbz = app.add_subcommand("gbz", "generalised Brillouin zone");
  gbz->add_option("--cell", cell_path)->required();
  gbz->add_option("--alpha-samples", alpha_samples)->required();
  gbz->add_option("--out", out_path);

  auto* recover = app.add_subcommand("recover", "quasiperiodicity of each finite-chain mode");
  recover->add_option("--config", config)->required();
  recover->add_option("--cell", cell_path)->required();
  recover->add_option("--out", out_path);

  auto* convergence = app.add_subcommand("convergence", "distance of finite spectra to the GBZ bands");
  convergence->add_option("--cell", cell_path)->required();
  convergence->add_option("--sizes", sizes_text, "comma-separated cell counts")->required();
  convergence->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  Output out(sub->get_name(), out_path);
  try {
    if (sub == capmat) {
      const ChainSpec chain = load_chain(config);
      out.parameters() = {{"config", chain_to_config(chain)}};
      const Eigen::MatrixXcd C = build_gauge_capacitance(chain).entries;
      CsvTable table({"row", "col", "re", "im"});
      for (Eigen::Index i = 0; i < C.rows(); ++i) {
        for (Eigen::Index j = 0; j < C.cols(); ++j) {
          table.add_row({std::to_string(i + 1), std::to_string(j + 1), num(C(i, j).real()), num(C(i, j).imag())});
        }
      }
      out.emit(table);
    } else if (sub == spectrum) {
      const ChainSpec chain = load_chain(config);
      out.parameters() = {{"config", chain_to_config(chain)}};
      emit_spectrum(out, chain_spectrum(chain));
    } else if (sub == modes) {
      const ChainSpec chain = load_chain(config);
      out.parameters() = {{"config", chain_to_config(chain)}, {"grid", grid}};
      const SpectralResult r = chain_spectrum(chain);
      const auto pos = resonator_positions(chain);
      const double lo = -chain.lengths.front();
      const double hi = pos.back().right + chain.lengths.back();
      std::vector<double> xs(grid);
      for (int g = 0; g < grid; ++g) xs[g] = lo + (hi - lo) * g / (grid - 1);
      CsvTable table({"mode", "x", "re", "im"});
      for (Eigen::Index k = 0; k < r.vectors.cols(); ++k) {
        const auto u = reconstruct_mode(chain, r.vectors.col(k), xs);
        for (int g = 0; g < grid; ++g) {
          table.add_row({std::to_string(k + 1), num(xs[g]), num(u[g].real()), num(u[g].imag())});
        }
      }
      out.emit(table);
    } else if (sub == interface) {
      const ChainSpec chain = interface_chain(n, gamma, {length, spacing, delta, v_b});
      out.parameters() = {{"n", n}, {"gamma", gamma}, {"config", chain_to_config(chain)}};
      emit_spectrum(out, chain_spectrum(chain));
    } else if (sub == pseudo) {
      const ChainSpec chain = load_chain(config);
      const std::vector<double> eps = parse_list(eps_text);
      const Eigen::MatrixXcd A = volume_matrix(chain).cwiseInverse().asDiagonal() * build_gauge_capacitance(chain).entries;
      Window w;
      if (window_text.empty()) {
        w = default_window(chain_spectrum(chain).lambdas, *std::max_element(eps.begin(), eps.end()));
      } else {
        const auto v = parse_list(window_text);
        if (v.size() != 4) throw ValidationError("--window needs four numbers");
        w = {v[0], v[1], v[2], v[3]};
      }
      out.parameters() = {{"config", chain_to_config(chain)},
                          {"eps", eps},
                          {"resolution", resolution},
                          {"window", {w.re_min, w.re_max, w.im_min, w.im_max}},
                          {"norm", "2-norm, membership sigma_min < eps"}};
      const PseudospectrumGrid ps = pseudospectrum(A, w, resolution, eps);
      CsvTable table({"re", "im", "sigma_min"});
      for (Eigen::Index j = 0; j < ps.im_axis.size(); ++j) {
        for (Eigen::Index i = 0; i < ps.re_axis.size(); ++i) {
          table.add_row({num(ps.re_axis(i)), num(ps.im_axis(j)), num(ps.sigma_min(i, j))});
        }
      }
      out.emit(table);
      CsvTable levels({"eps", "segment_id", "re", "im"});
      for (double e : ps.eps_levels) {
        for (const auto& s : level_set(ps, e)) {
          levels.add_row({num(e), std::to_string(s.segment_id), num(s.p0.real()), num(s.p0.imag())});
          levels.add_row({num(e), std::to_string(s.segment_id), num(s.p1.real()), num(s.p1.imag())});
        }
      }
      out.emit_extra("levels", levels);
    } else if (sub == bands) {
      const UnitCellSpec cell = load_cell(cell_path);
      out.parameters() = {{"cell", cell_to_config(cell)}, {"samples", samples}};
      const BandSweep sweep = band_sweep(cell, samples);
      CsvTable table({"alpha_re", "alpha_im", "band_index", "lambda_re", "lambda_im", "omega_re", "omega_im"});
      for (std::size_t m = 0; m < sweep.samples.size(); ++m) {
        const BandSample& s = sweep.samples[m];
        for (Eigen::Index i = 0; i < s.lambdas.size(); ++i) {
          table.add_row({num(s.alpha.real()), num(s.alpha.imag()), std::to_string(sweep.labels[m][i] + 1),
                         num(s.lambdas(i).real()), num(s.lambdas(i).imag()), num(s.omegas(i).real()),
                         num(s.omegas(i).imag())});
        }
      }
      out.emit(table);
    } else if (sub == exceptional) {
      try {
        // Truncated, not rounded, to five decimals.
        std::printf("gamma_c=%.5f\n", std::trunc(critical_gamma(s1, s2) * 1e5) / 1e5);
      } catch (const ValidationError& e) {
        if (std::string(e.what()) != "no exceptional point") throw;
        std::printf("none\n");
      }
    } else if (sub == vort) {
      const VorticityResult r = vorticity({s1, s2, gamma}, samples);
      if (r.quantized) {
        std::printf("nu=%.1f\n", r.nu);
      } else {
        std::printf("nu=%.6f\n", r.nu);
        std::cerr << "warning: " << r.warning << "\n";
      }
    } else if (sub == gbz) {
      const UnitCellSpec cell = load_cell(cell_path);
      out.parameters() = {{"cell", cell_to_config(cell)},
                          {"alpha_samples", alpha_samples},
                          {"convention", "corner (K,1) carries exp(-i alpha L), (1,K) carries exp(+i alpha L)"}};
      CsvTable table({"alpha", "beta", "lambda", "band_index"});
      std::size_t missing = 0;
      for (int b = 0; b < static_cast<int>(cell.size()); ++b) {
        const GBZCurve curve = gbz_curve(cell, b, alpha_samples);
        missing += curve.missing_alphas.size();
        for (const auto& p : curve.points) {
          table.add_row({num(p.alpha), num(p.beta), num(p.lambda), std::to_string(p.band_index + 1)});
        }
      }
      if (missing) std::cerr << "note: " << missing << " alpha samples had no real positive root\n";
      out.parameters()["missing_samples"] = missing;
      out.emit(table);
    } else if (sub == recover) {
      const ChainSpec chain = load_chain(config);
      const UnitCellSpec cell = load_cell(cell_path);
      const Window w = default_recovery_window(cell);
      out.parameters() = {{"config", chain_to_config(chain)},
                          {"cell", cell_to_config(cell)},
                          {"window", {w.re_min, w.re_max, w.im_min, w.im_max}},
                          {"convention", "corner (K,1) carries exp(-i alpha L), (1,K) carries exp(+i alpha L)"}};
      const auto rows = recover_chain(chain, cell, w);
      CsvTable table({"mode_index", "omega_re", "omega_im", "alpha_re", "alpha_im", "residual"});
      for (const auto& r : rows) {
        table.add_row({std::to_string(r.mode_index + 1), num(r.omega.real()), num(r.omega.imag()),
                       num(r.alpha_hat.real()), num(r.alpha_hat.imag()), num(r.residual)});
        if (r.clipped) std::cerr << "warning: mode " << r.mode_index + 1 << " clipped at the window edge\n";
      }
      out.emit(table);
    } else if (sub == convergence) {
      const UnitCellSpec cell = load_cell(cell_path);
      std::vector<int> sizes;
      for (double v : parse_list(sizes_text)) {
        if (v != static_cast<int>(v)) throw ValidationError("sizes must be integers");
        sizes.push_back(static_cast<int>(v));
      }
      out.parameters() = {{"cell", cell_to_config(cell)}, {"sizes", sizes}};
      CsvTable table({"N", "max_distance"});
      for (const auto& row : convergence_study(cell, sizes)) table.add_row({std::to_string(row.cells), num(row.max_distance)});
      out.emit(table);
    }
    out.finish(start);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
