#pragma once

#include <string>

namespace mtdsim {

// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

// Writes via a sibling temp file and rename, so readers never observe a
// half-written file and a failed write leaves any existing file intact.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mtdsim
