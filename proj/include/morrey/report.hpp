#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "morrey/norms.hpp"

namespace morrey {

/// Comma-separated table with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Long-format table of a seminorm sweep: center coordinates (one column
/// per axis), the scale (radius or t) and the value.
CsvTable seminorm_table(const SeminormReport& report, int dimension);

/// Output files staged in memory and written together, each through a
/// temporary file and rename.
class OutputSet {
 public:
  void add(const std::string& relative_path, std::string content);
  void commit(const std::filesystem::path& out_dir) const;
  const std::map<std::string, std::string>& files() const noexcept { return files_; }

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace morrey
