#include "fluctsel/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fluctsel/errors.hpp"

namespace fluctsel {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw Error("table row width does not match the header");
    rows.push_back(std::move(row));
}

std::string manifest_text(const ResultBundle& bundle) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", bundle.elapsed_seconds);
    out << "# fluctsel " << FLUCTSEL_VERSION << "\n";
    out << "# elapsed_seconds = " << buf << "\n";
    out << emit_config(bundle.config);
    return out.str();
}

std::string csv_text(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += "\n";
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.15e", row[i]);
            if (i) out += ",";
            out += buf;
        }
        out += "\n";
    }
    return out;
}

void emit_bundle(const ResultBundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / "manifest", manifest_text(bundle));
    for (const auto& [name, table] : bundle.tables) write_file(dir / (name + ".csv"), csv_text(table));
    if (!bundle.summary.empty()) write_file(dir / "summary.json", bundle.summary.dump(2) + "\n");
}

}  // namespace fluctsel
