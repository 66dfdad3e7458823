#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace corpusdiff {

// RFC-4180-style records (quoted fields, doubled quotes, CRLF tolerated).
// Lines whose first non-blank character is '#' are skipped.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string csv_escape(const std::string& field);

// Shortest representation that round-trips the exact double value.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);

// Writes via a temp file + rename so readers never see partial content.
void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string lowercase(std::string s);
std::string trim(const std::string& s);

}  // namespace corpusdiff
