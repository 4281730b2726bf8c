#include "morrey/report.hpp"

#include "morrey/error.hpp"
#include "morrey/field_io.hpp"

namespace morrey {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw InputError("table row width does not match its header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    return line + "\n";
  };
  std::string out = join(header_);
  for (const auto& r : rows_) out += join(r);
  return out;
}

CsvTable seminorm_table(const SeminormReport& report, int dimension) {
  const bool by_time = report.kind == SeminormKind::Maximal || report.kind == SeminormKind::PoissonPointwise;
  std::vector<std::string> header = dimension == 1 ? std::vector<std::string>{"center_0"}
                                                   : std::vector<std::string>{"center_0", "center_1"};
  header.push_back(by_time ? "t" : "radius");
  header.push_back("value");
  CsvTable table(header);
  for (const SeminormSample& s : report.table) {
    std::vector<std::string> row{std::to_string(s.center[0])};
    if (dimension == 2) row.push_back(std::to_string(s.center[1]));
    row.push_back(format_double(s.scale));
    row.push_back(format_double(s.value));
    table.add_row(std::move(row));
  }
  return table;
}

void OutputSet::add(const std::string& relative_path, std::string content) {
  files_[relative_path] = std::move(content);
}

void OutputSet::commit(const std::filesystem::path& out_dir) const {
  for (const auto& [rel, content] : files_) write_file_atomic(out_dir / rel, content);
}

}  // namespace morrey
