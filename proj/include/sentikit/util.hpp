#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sentikit {

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

// Stable per-component seed: the same (global seed, component) pair always
// yields the same value, independent of platform and call order.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view component);

std::string to_lower_ascii(std::string_view s);
bool is_space_ascii(char c);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits UTF-8 text into code points (each returned as its byte sequence).
// Invalid lead bytes are returned as single-byte units.
std::vector<std::string> utf8_code_points(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Shortest round-trip decimal representation.
std::string format_double(double v);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace sentikit
