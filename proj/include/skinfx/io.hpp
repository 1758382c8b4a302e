#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "skinfx/common.hpp"

namespace skinfx {

inline constexpr const char* kVersion = "0.1.0";

/// 17 significant digits, "%.17g".
std::string format_number(double x);

/// Rows of pre-formatted cells with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
};

}  // namespace skinfx
