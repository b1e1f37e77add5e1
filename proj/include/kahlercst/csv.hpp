#pragma once

/**
 * @file csv.hpp
 * @brief Minimal CSV read/write with atomic replacement.
 *
 * The file formats used here never need quoting (labels are space separated,
 * fingerprints use ':' and ';'), so a plain comma split is sufficient.
 * Floating point fields are emitted with 17 significant digits and
 * round-trip exactly.
 */

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcst {

using CsvRow = std::vector<std::string>;

inline CsvRow split_csv_line(const std::string& line) {
  CsvRow out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

/// Read all rows; the first row is returned too (callers check the header).
inline std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  std::vector<CsvRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

/// Write a whole file through a temporary sibling + rename, so a concurrent
/// reader never sees a torn file.
inline void write_text_atomic(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

/// Write header + rows to a temporary sibling and rename over the target, so
/// a concurrent reader never sees a torn file.
inline void write_csv_atomic(const std::string& path, const CsvRow& header,
                             const std::vector<CsvRow>& rows) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write CSV file: " + tmp.string());
    auto emit = [&out](const CsvRow& row) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << row[i];
      }
      out << '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
  }
  fs::rename(tmp, target);
}

}  // namespace kcst
