#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace nlab {

/// Shortest decimal string that round-trips to the same double (std::to_chars
/// general form); "inf"/"-inf"/"nan" for non-finite values.  Used for every
/// CSV cell so repeated runs diff byte-for-byte.
std::string format_double(double value);

/// Write content to `file` atomically: a temp file in the same directory is
/// renamed over the target, so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& file, std::string_view content);

} // namespace nlab
