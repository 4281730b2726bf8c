#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "morrey/grid.hpp"

namespace morrey {

inline constexpr std::string_view kFieldCsvSchema = "morrey.field/1";

/// CSV text: a comment line "# morrey.field/1 n=<n> N=<N> L=<L>", the header
/// "index,re,im", then one row per sample in flat order.
std::string field_to_csv(const Field& f);
Field field_from_csv(std::string_view text);

/// Little-endian binary: n, N, L as IEEE-754 doubles, then N^n (re, im)
/// double pairs in flat order.
std::string field_to_binary(const Field& f);
Field field_from_binary(std::string_view bytes);

/// Chooses the format by extension: ".csv" for text, anything else binary.
void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// %.17g rendering used by every text output.
std::string format_double(double v);

}  // namespace morrey
