#include "morrey/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "morrey/error.hpp"

namespace morrey {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InputError("malformed number '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view next_line(std::string_view& text) {
  const auto pos = text.find('\n');
  std::string_view line = text.substr(0, pos);
  text.remove_prefix(pos == std::string_view::npos ? text.size() : pos + 1);
  return trim(line);
}

double header_value(std::string_view header, std::string_view key) {
  const std::string token = " " + std::string(key) + "=";
  const auto pos = header.find(token);
  if (pos == std::string_view::npos) throw InputError("field header lacks '" + std::string(key) + "='");
  auto rest = header.substr(pos + token.size());
  return parse_double(rest.substr(0, rest.find(' ')));
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xff) << (8 * (7 - i));
    return r;
  }
  return v;
}

void put_double(std::string& out, double v) {
  const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
  char raw[8];
  std::memcpy(raw, &bits, 8);
  out.append(raw, 8);
}

double get_double(std::string_view bytes, std::size_t k) {
  std::uint64_t bits;
  std::memcpy(&bits, bytes.data() + 8 * k, 8);
  return std::bit_cast<double>(to_little(bits));
}

int checked_int(double v, const char* what) {
  if (!(v >= 0.0) || v > 1 << 20 || v != std::floor(v)) throw InputError(std::string("bad ") + what + " in field header");
  return int(v);
}

}  // namespace

std::string field_to_csv(const Field& f) {
  const Grid& g = f.grid();
  std::string out = "# " + std::string(kFieldCsvSchema) + " n=" + std::to_string(g.dimension()) +
                    " N=" + std::to_string(g.points_per_axis()) + " L=" + format_double(g.domain_length()) +
                    "\nindex,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out += std::to_string(i) + "," + format_double(f[i].real()) + "," + format_double(f[i].imag()) + "\n";
  return out;
}

Field field_from_csv(std::string_view text) {
  const std::string_view header = next_line(text);
  if (header.rfind("# " + std::string(kFieldCsvSchema), 0) != 0)
    throw InputError("field CSV must start with '# " + std::string(kFieldCsvSchema) + "'");
  const Grid grid(checked_int(header_value(header, "n"), "n"), checked_int(header_value(header, "N"), "N"),
                  header_value(header, "L"));
  if (next_line(text) != "index,re,im") throw InputError("field CSV lacks the 'index,re,im' header");
  std::vector<cplx> samples(grid.size());
  std::vector<bool> seen(grid.size(), false);
  std::size_t rows = 0;
  while (!text.empty()) {
    const std::string_view line = next_line(text);
    if (line.empty()) continue;
    const auto c1 = line.find(','), c2 = line.rfind(',');
    if (c1 == std::string_view::npos || c1 == c2) throw InputError("field CSV row needs three columns");
    const int idx = checked_int(parse_double(trim(line.substr(0, c1))), "index");
    if (std::size_t(idx) >= grid.size() || seen[idx]) throw InputError("field CSV index out of range or repeated");
    seen[idx] = true;
    samples[idx] = {parse_double(trim(line.substr(c1 + 1, c2 - c1 - 1))), parse_double(trim(line.substr(c2 + 1)))};
    ++rows;
  }
  if (rows != grid.size()) throw InputError("field CSV has " + std::to_string(rows) + " rows, expected " +
                                            std::to_string(grid.size()));
  return Field(grid, std::move(samples));
}

std::string field_to_binary(const Field& f) {
  const Grid& g = f.grid();
  std::string out;
  out.reserve(24 + 16 * f.size());
  put_double(out, g.dimension());
  put_double(out, g.points_per_axis());
  put_double(out, g.domain_length());
  for (const cplx& v : f.samples()) {
    put_double(out, v.real());
    put_double(out, v.imag());
  }
  return out;
}

Field field_from_binary(std::string_view bytes) {
  if (bytes.size() < 24) throw InputError("binary field shorter than its header");
  const Grid grid(checked_int(get_double(bytes, 0), "n"), checked_int(get_double(bytes, 1), "N"),
                  get_double(bytes, 2));
  if (bytes.size() != 24 + 16 * grid.size()) throw InputError("binary field size does not match its header");
  std::vector<cplx> samples(grid.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = {get_double(bytes, 3 + 2 * i), get_double(bytes, 4 + 2 * i)};
  return Field(grid, std::move(samples));
}

void save_field(const std::filesystem::path& path, const Field& f) {
  write_file_atomic(path, path.extension() == ".csv" ? field_to_csv(f) : field_to_binary(f));
}

Field load_field(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  return path.extension() == ".csv" ? field_from_csv(content) : field_from_binary(content);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw InputError("failed writing '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace morrey
