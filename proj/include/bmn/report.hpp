#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bmn {

// Everything needed to re-derive a CSV: the command, the fully resolved
// configuration, and the seed. Rendered as a '#' header block above the
// table so every output file is self-describing. Execution details that do
// not affect the numbers (thread count, wall-clock time) are deliberately
// not part of the manifest; the CLI reports them on stderr instead, keeping
// equal-config outputs byte-identical.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;  // in render order
    std::uint64_t seed = 0;

    void add(std::string key, std::string value);
};

// '#'-prefixed manifest lines, then a header row, then data rows. Cells are
// joined with ',' and must not themselves contain commas or newlines.
std::string render_csv(const RunManifest& manifest,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows);

// Writes to path via a temp file and atomic rename, so interrupted runs never
// leave a partial table behind. An empty path writes to stdout instead.
void write_output(const std::string& path, const std::string& content);

}  // namespace bmn
