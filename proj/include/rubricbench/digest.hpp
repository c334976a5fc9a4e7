#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace rubricbench {

std::string sha256_hex(std::string_view data);

// Same digest `git hash-object` reports for a file with these contents.
std::string git_blob_digest(std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Writes through a sibling temp file and renames it into place, so readers
// never observe a partial file and concurrent writers resolve last-write-wins.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rubricbench
