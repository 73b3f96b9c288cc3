#include "bmn/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bmn/errors.hpp"
#include "bmn/version.hpp"

namespace bmn {

void RunManifest::add(std::string key, std::string value) {
    config.emplace_back(std::move(key), std::move(value));
}

std::string render_csv(const RunManifest& manifest,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    out += "# bmn ";
    out += kVersion;
    out += "\n# command: " + manifest.command + "\n";
    for (const auto& [key, value] : manifest.config) {
        out += "# " + key + ": " + value + "\n";
    }
    out += "# seed: " + std::to_string(manifest.seed) + "\n";

    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) {
            throw ConfigError("cannot open '" + tmp.string() + "' for writing");
        }
        stream << content;
        stream.flush();
        if (!stream) {
            throw ConfigError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot move output into place at '" + path +
                          "': " + ec.message());
    }
}

}  // namespace bmn
