#pragma once

// Deterministic output: JSON reports (insertion-ordered keys, shortest
// round-trip numbers), CSV tables and atomic file writes.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stefan {

using Json = nlohmann::ordered_json;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::string str() const;
};

std::string dump_json(const Json& j);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace stefan
