#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace srcalloc {

// Reads a whole file; kIo on failure.
std::string read_text_file(const std::filesystem::path& path);

// Writes through a temporary sibling file and renames it into place, so a
// reader never observes a partially written output.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view text);

std::string_view trim(std::string_view s) noexcept;

std::vector<std::string_view> split_char(std::string_view s, char sep);

// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_whitespace(std::string_view s);

// Strict numeric parsing of a whole field; kInput naming `what` on failure.
double parse_double(std::string_view field, std::string_view what);
std::int64_t parse_int(std::string_view field, std::string_view what);
std::uint64_t parse_uint(std::string_view field, std::string_view what);

// Regular, non-hidden files in a directory, sorted by file name.
std::vector<std::filesystem::path> list_data_files(
    const std::filesystem::path& dir);

}  // namespace srcalloc
