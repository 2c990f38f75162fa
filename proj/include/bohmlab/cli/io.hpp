#pragma once

#include <filesystem>
#include <string>

namespace bohmlab::cli {

// Shortest round-trip decimal form (std::to_chars); NaN prints as "nan".
// Every float that reaches a CSV or JSON file goes through here so that
// identical inputs give byte-identical outputs.
std::string format_double(double x);

void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace bohmlab::cli
