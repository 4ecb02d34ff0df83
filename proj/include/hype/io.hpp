#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hype {

// Throws Error(kUnreadableFile).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits on '\n', dropping one trailing '\r' per line. A final newline does
// not produce an empty trailing line.
std::vector<std::string> split_lines(std::string_view content);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
// Fixed three-decimal rendering used by human-readable reports.
std::string format_metric(double value);

std::string sha256_hex(std::string_view data);

}  // namespace hype
