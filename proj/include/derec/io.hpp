#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace derec {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temp file then renames, so readers never see a
// half-written artifact.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);
std::string file_digest(const std::filesystem::path& path);

}  // namespace derec
