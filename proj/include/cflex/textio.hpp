#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cflex {

/// Round-trip formatting with 17 significant digits.
std::string format_double(double v);
void write_double(std::ostream& out, double v);

/// Strict parse of the whole field; throws std::runtime_error prefixed by context.
double parse_double(std::string_view s, const std::string& context);
std::uint64_t parse_uint(std::string_view s, const std::string& context);

std::vector<std::string_view> split_on(std::string_view s, char sep);

/// RFC 4180 style field splitting (double-quoted fields, "" escapes).
std::vector<std::string> split_csv_line(std::string_view line, char delimiter);
std::string csv_escape(std::string_view field);

/// Writes `contents` to `path`, throwing on failure.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace cflex
