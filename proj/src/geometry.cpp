#include "skinfx/geometry.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace skinfx {

namespace {

using nlohmann::json;

void check_positive_list(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw ValidationError(std::string("non-finite ") + what);
    if (x <= 0.0) throw ValidationError(std::string("non-positive ") + what);
  }
}

void check_positive(double x, const char* what) {
  if (!std::isfinite(x) || x <= 0.0) throw ValidationError(std::string("non-positive ") + what);
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed) {
  if (!doc.is_object()) throw ValidationError("malformed document: expected an object");
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key())) throw ValidationError("unknown key \"" + item.key() + "\"");
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("malformed document: \"" + key + "\" must be a number");
  return v.get<double>();
}

std::vector<double> number_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ValidationError("malformed document: \"" + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

std::vector<Complex> complex_list(const json& v) {
  if (!v.is_array()) throw ValidationError("malformed document: \"speeds\" must be an array");
  std::vector<Complex> out;
  for (const auto& p : v) {
    if (p.is_number()) {
      out.emplace_back(p.get<double>(), 0.0);
    } else if (p.is_array() && p.size() == 2) {
      out.emplace_back(number(p[0], "speeds"), number(p[1], "speeds"));
    } else {
      throw ValidationError("malformed document: speeds entries must be [re, im] pairs");
    }
  }
  return out;
}

json complex_list_json(const std::vector<Complex>& zs) {
  json out = json::array();
  for (const auto& z : zs) out.push_back({z.real(), z.imag()});
  return out;
}

// Either "<plural>" (array) or "<singular>" (scalar repeated `count` times).
std::vector<double> list_or_scalar(const json& doc, const std::string& plural,
                                   const std::string& singular, std::optional<std::size_t> count) {
  const bool has_list = doc.contains(plural);
  const bool has_scalar = doc.contains(singular);
  if (has_list && has_scalar) {
    throw ValidationError("malformed document: both \"" + plural + "\" and \"" + singular + "\" given");
  }
  if (has_list) return number_list(doc.at(plural), plural);
  if (has_scalar) {
    if (!count) throw ValidationError("malformed document: \"" + singular + "\" needs \"N\" or a list");
    return std::vector<double>(*count, number(doc.at(singular), singular));
  }
  throw ValidationError("malformed document: missing \"" + plural + "\"");
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

void ChainSpec::validate() const {
  const std::size_t n = lengths.size();
  if (n == 0) throw ValidationError("empty chain");
  if (spacings.size() + 1 != n || gammas.size() != n) throw ValidationError("inconsistent list lengths");
  check_positive_list(lengths, "length");
  check_positive_list(spacings, "spacing");
  for (double g : gammas) {
    if (!std::isfinite(g)) throw ValidationError("non-finite gamma");
  }
  check_positive(delta, "delta");
  check_positive(v_b, "v_b");
  if (speeds && speeds->size() != n) throw ValidationError("inconsistent list lengths");
}

double UnitCellSpec::period() const {
  double total = 0.0;
  for (double x : lengths) total += x;
  for (double x : spacings) total += x;
  return total;
}

void UnitCellSpec::validate() const {
  const std::size_t k = lengths.size();
  if (k == 0) throw ValidationError("empty cell");
  if (spacings.size() != k) throw ValidationError("inconsistent list lengths");
  check_positive_list(lengths, "length");
  check_positive_list(spacings, "spacing");
  if (!std::isfinite(gamma)) throw ValidationError("non-finite gamma");
  check_positive(delta, "delta");
  check_positive(v_b, "v_b");
  if (speeds && speeds->size() != k) throw ValidationError("inconsistent list lengths");
}

ChainSpec chain_from_json(const json& doc) {
  reject_unknown_keys(doc, {"N", "lengths", "length", "spacings", "spacing", "gammas", "gamma", "delta",
                            "v_b", "speeds"});
  std::optional<std::size_t> count;
  if (doc.contains("N")) {
    const json& nv = doc.at("N");
    if (!nv.is_number_integer() || nv.get<long long>() < 1) {
      throw ValidationError("malformed document: \"N\" must be a positive integer");
    }
    count = static_cast<std::size_t>(nv.get<long long>());
  }
  ChainSpec chain;
  chain.lengths = list_or_scalar(doc, "lengths", "length", count);
  if (count && chain.lengths.size() != *count) throw ValidationError("inconsistent list lengths");
  const std::size_t n = chain.lengths.size();
  if (n == 0) throw ValidationError("empty chain");
  if (n == 1 && !doc.contains("spacings") && !doc.contains("spacing")) {
    chain.spacings = {};
  } else {
    chain.spacings = list_or_scalar(doc, "spacings", "spacing", n - 1);
  }
  chain.gammas = list_or_scalar(doc, "gammas", "gamma", n);
  if (doc.contains("delta")) chain.delta = number(doc.at("delta"), "delta");
  if (doc.contains("v_b")) chain.v_b = number(doc.at("v_b"), "v_b");
  if (doc.contains("speeds")) chain.speeds = complex_list(doc.at("speeds"));
  chain.validate();
  return chain;
}

ChainSpec chain_from_config(std::string_view text) { return chain_from_json(parse_text(text)); }

json chain_to_config(const ChainSpec& chain) {
  json doc = {{"lengths", chain.lengths},
              {"spacings", chain.spacings},
              {"gammas", chain.gammas},
              {"delta", chain.delta},
              {"v_b", chain.v_b}};
  if (chain.speeds) doc["speeds"] = complex_list_json(*chain.speeds);
  return doc;
}

UnitCellSpec cell_from_json(const json& doc) {
  reject_unknown_keys(doc, {"cell", "gamma", "delta", "v_b", "speeds"});
  if (!doc.contains("cell")) throw ValidationError("malformed document: missing \"cell\"");
  const json& c = doc.at("cell");
  reject_unknown_keys(c, {"lengths", "spacings"});
  if (!c.contains("lengths") || !c.contains("spacings")) {
    throw ValidationError("malformed document: \"cell\" needs \"lengths\" and \"spacings\"");
  }
  UnitCellSpec cell;
  cell.lengths = number_list(c.at("lengths"), "lengths");
  cell.spacings = number_list(c.at("spacings"), "spacings");
  if (doc.contains("gamma")) cell.gamma = number(doc.at("gamma"), "gamma");
  if (doc.contains("delta")) cell.delta = number(doc.at("delta"), "delta");
  if (doc.contains("v_b")) cell.v_b = number(doc.at("v_b"), "v_b");
  if (doc.contains("speeds")) cell.speeds = complex_list(doc.at("speeds"));
  cell.validate();
  return cell;
}

UnitCellSpec cell_from_config(std::string_view text) { return cell_from_json(parse_text(text)); }

json cell_to_config(const UnitCellSpec& cell) {
  json doc = {{"cell", {{"lengths", cell.lengths}, {"spacings", cell.spacings}}},
              {"gamma", cell.gamma},
              {"delta", cell.delta},
              {"v_b", cell.v_b}};
  if (cell.speeds) doc["speeds"] = complex_list_json(*cell.speeds);
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Interval> resonator_positions(const ChainSpec& chain) {
  std::vector<Interval> out;
  out.reserve(chain.size());
  double x = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out.push_back({x, x + chain.lengths[i]});
    x += chain.lengths[i];
    if (i + 1 < chain.size()) x += chain.spacings[i];
  }
  return out;
}

ChainSpec interface_chain(int n, double gamma, const ChainTemplate& tmpl) {
  if (n < 1) throw ValidationError("interface chain needs n >= 1");
  if (gamma == 0.0) throw ValidationError("gamma = 0 gives no interface");
  ChainSpec chain = uniform_chain(2 * n + 1, gamma, tmpl);
  for (int i = 0; i < n; ++i) chain.gammas[i] = -gamma;
  return chain;
}

ChainSpec uniform_chain(int n, double gamma, const ChainTemplate& tmpl) {
  if (n < 1) throw ValidationError("empty chain");
  ChainSpec chain;
  chain.lengths.assign(n, tmpl.length);
  chain.spacings.assign(n - 1, tmpl.spacing);
  chain.gammas.assign(n, gamma);
  chain.delta = tmpl.delta;
  chain.v_b = tmpl.v_b;
  chain.validate();
  return chain;
}

ChainSpec periodic_chain(const UnitCellSpec& cell, int cells) {
  cell.validate();
  if (cells < 1) throw ValidationError("need at least one cell");
  ChainSpec chain;
  chain.delta = cell.delta;
  chain.v_b = cell.v_b;
  if (cell.speeds) chain.speeds.emplace();
  for (int c = 0; c < cells; ++c) {
    for (std::size_t k = 0; k < cell.size(); ++k) {
      chain.lengths.push_back(cell.lengths[k]);
      chain.gammas.push_back(cell.gamma);
      chain.spacings.push_back(cell.spacings[k]);
      if (cell.speeds) chain.speeds->push_back((*cell.speeds)[k]);
    }
  }
  chain.spacings.pop_back();
  chain.validate();
  return chain;
}

}  // namespace skinfx
