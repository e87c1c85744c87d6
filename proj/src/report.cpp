#include "stefan/report.hpp"

#include "stefan/config.hpp"
#include "stefan/error.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

namespace stefan {

void CsvTable::add(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorCode::Domain, "CSV row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::isfinite(row[i]) ? format_number(row[i]) : (std::isnan(row[i]) ? "nan" : (row[i] > 0 ? "inf" : "-inf"));
    }
    out += '\n';
  }
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Config, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Config, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::Config, "cannot move '" + tmp.string() + "' into place: " + ec.message());
  }
}

}  // namespace stefan
