#pragma once

#include <filesystem>
#include <string>

namespace hypersgg {

// Reads a whole file; throws DataError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temp file followed by rename, so readers never see a
// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hypersgg
