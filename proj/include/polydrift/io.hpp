#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace polydrift {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Read a whole file; throws FileNotFoundError if it does not exist.
std::string read_file(const std::filesystem::path& path);

/// Write atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace polydrift
