#pragma once

#include <filesystem>
#include <string>

// Paths baked in at configure time so tests run from any directory.
inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(SENTIKIT_SOURCE_DIR) / rel;
}
