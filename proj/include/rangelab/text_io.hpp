#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rangelab {

/// Shortest decimal text that round-trips the double (17 significant digits).
std::string format_double(double v);

/// Writes `contents` to `file` through a temporary sibling and a rename, so a
/// crash never leaves a truncated file behind.
void write_file_atomic(const std::filesystem::path& file, std::string_view contents);

std::string read_file(const std::filesystem::path& file);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

/// Sixteen lowercase hex digits.
std::string hex64(std::uint64_t v);

}  // namespace rangelab
