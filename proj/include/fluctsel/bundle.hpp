#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluctsel/config.hpp"

namespace fluctsel {

/// Numeric table written as CSV.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

/// Everything an experiment produces.
struct ResultBundle {
    RunConfig config;
    double elapsed_seconds = 0.0;
    std::map<std::string, Table> tables;  ///< file stem -> table
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

/// Manifest text: version and timing as comment lines followed by the
/// configuration, so the manifest itself parses back to the same RunConfig.
std::string manifest_text(const ResultBundle& bundle);

/// CSV text with a header row and every value printed as %.15e.
std::string csv_text(const Table& table);

/// Writes `manifest`, one `<name>.csv` per table and `summary.json` (when
/// the summary is not empty) into dir, creating it if needed. Throws
/// Error naming the path on I/O failure.
void emit_bundle(const ResultBundle& bundle, const std::filesystem::path& dir);

}  // namespace fluctsel
