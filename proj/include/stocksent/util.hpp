#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stocksent {

// Shortest round-trip decimal form; NaN/inf are rejected by callers before formatting.
std::string format_double(double value);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

std::string read_file(const std::filesystem::path& path);
/// Writes to `path.tmp` then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// RFC 4180 CSV: quoted fields, doubled quotes, embedded commas/newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);

std::string sha256_hex(std::string_view data);

namespace log {
using Sink = std::function<void(std::string_view level, std::string_view message)>;
/// Replaces the process-wide sink; returns the previous one. Default sink writes to stderr.
Sink set_sink(Sink sink);
void warn(std::string_view message);
void info(std::string_view message);
}  // namespace log

}  // namespace stocksent
