#pragma once

#include <map>
#include <string>
#include <vector>

namespace agl {

/// Shortest representation that round-trips a double exactly.
std::string fmt_double(double v);

/// Write a file via a temporary sibling and rename, so readers never
/// observe a partially written file.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

std::vector<std::string> split(const std::string& line, char sep);

/// Parse a "# key=value key=value ..." header line.
std::map<std::string, std::string> parse_header(const std::string& line);

/// Parse "key = value" configuration text; '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::string& text);

std::vector<double> parse_double_list(const std::string& csv);
std::vector<int> parse_int_list(const std::string& csv);

}  // namespace agl
