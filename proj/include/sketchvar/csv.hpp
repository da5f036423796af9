#pragma once

#include <string>
#include <vector>

namespace sketchvar::csv {

/// Shortest round-trippable decimal representation (%.17g trimmed).
std::string field(double v);

/// Writes content to path via a temp file + rename, so readers never see a
/// truncated file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws errc::io when absent.
    std::size_t column(const std::string& name) const;
};

/// Plain comma-separated values with a header row; no quoting support, which
/// matches the numeric tables this project writes and reads.
Table read_table(const std::string& path);

}  // namespace sketchvar::csv
