#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace crosslex {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/// Strict double parse of the whole field. Throws std::runtime_error on junk.
double parse_double(std::string_view field, const std::string& context);

/// Strict non-negative integer parse of the whole field.
std::int64_t parse_count(std::string_view field, const std::string& context);

/// Splits on a single-character delimiter; keeps empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

/// Reads a whole file as lines (both "\n" and "\r\n" endings accepted).
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Opens for writing, throws with the path on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace crosslex
