#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gridsample {

// Shortest decimal form that parses back to the exact same double
// (std::to_chars). Used for every numeric field we write, so outputs
// are byte-stable and round-trip losslessly.
std::string format_double(double value);

// Strict parsers: the whole token must be consumed. line_no is 1-based
// and only used for error messages.
double parse_double_field(std::string_view token, int line_no);
std::int64_t parse_int_field(std::string_view token, int line_no);

// Splits one CSV record on ','. No quoting; fields may not contain
// commas or newlines.
std::vector<std::string_view> split_csv_line(std::string_view line);

std::string read_text_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory, then renames over the
// target so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

// FNV-1a 64-bit digest, hex-encoded. Recorded in run manifests to tie
// outputs to their exact inputs.
std::string fnv1a64_hex(std::string_view data);

}  // namespace gridsample
