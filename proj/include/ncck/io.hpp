#pragma once

#include <string>
#include <string_view>

namespace ncck {

/// Writes to a sibling temporary file, then renames it over `path`.
/// Throws std::runtime_error on failure.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace ncck
