#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skinfx/common.hpp"

namespace skinfx {

/// Finite chain of N resonators: lengths l_i, gaps s_i between i and i+1,
/// per-resonator gauge gammas, contrast delta, background speed v_b, and
/// optional per-resonator complex speeds.
struct ChainSpec {
  std::vector<double> lengths;
  std::vector<double> spacings;
  std::vector<double> gammas;
  double delta = 1e-3;
  double v_b = 1.0;
  std::optional<std::vector<Complex>> speeds;

  std::size_t size() const { return lengths.size(); }
  /// Throws ValidationError when an invariant is violated.
  void validate() const;
};

/// One period of an infinite chain. spacings has K entries; the last one
/// links the cell to its translate. delta and v_b are only used when band
/// eigenvalues are mapped to frequencies.
struct UnitCellSpec {
  std::vector<double> lengths;
  std::vector<double> spacings;
  double gamma = 0.0;
  double delta = 1e-3;
  double v_b = 1.0;
  std::optional<std::vector<Complex>> speeds;

  std::size_t size() const { return lengths.size(); }
  /// Cell length L = sum of lengths and spacings.
  double period() const;
  void validate() const;
};

struct Interval {
  double left;
  double right;
};

ChainSpec chain_from_json(const nlohmann::json& doc);
ChainSpec chain_from_config(std::string_view text);
/// Explicit-list form; chain_from_json(chain_to_config(c)) == c.
nlohmann::json chain_to_config(const ChainSpec& chain);

UnitCellSpec cell_from_json(const nlohmann::json& doc);
UnitCellSpec cell_from_config(std::string_view text);
nlohmann::json cell_to_config(const UnitCellSpec& cell);

/// Reads a whole file; throws ValidationError when it cannot be opened.
std::string read_text_file(const std::string& path);

/// (x_i^L, x_i^R) with x_1^L = 0.
std::vector<Interval> resonator_positions(const ChainSpec& chain);

/// Uniform parameters shared by every resonator of a generated chain.
struct ChainTemplate {
  double length = 1.0;
  double spacing = 1.0;
  double delta = 1e-3;
  double v_b = 1.0;
};

/// 2n+1 resonators with gauge -gamma on the first n and +gamma on the rest,
/// which puts the bulk modes on the interface at site n+1.
ChainSpec interface_chain(int n, double gamma, const ChainTemplate& tmpl = {});

/// Uniform chain of N identical resonators.
ChainSpec uniform_chain(int n, double gamma, const ChainTemplate& tmpl = {});

/// Finite truncation made of `cells` copies of the cell (the closing spacing
/// of the last copy is dropped). Speeds are repeated when present.
ChainSpec periodic_chain(const UnitCellSpec& cell, int cells);

}  // namespace skinfx
