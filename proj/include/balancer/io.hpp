#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace balancer::io {

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a partially written artifact. Creates parent directories.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// Throws ValidationError when the file cannot be read.
std::string read_file(const std::filesystem::path &path);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path &path);

}  // namespace balancer::io
