#include "lswarm/expio/table.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"

#include <algorithm>
#include <fstream>

namespace lswarm::expio {

namespace {

std::vector<std::string> split_row(std::string_view line)
{
    std::vector<std::string> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.emplace_back(line.substr(0, comma));
        if (comma == std::string_view::npos) {
            return cells;
        }
        line.remove_prefix(comma + 1);
    }
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw FormatError("no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numbers(std::string_view name) const
{
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(parse_double(row.at(c)));
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot read " + path.string());
    }
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(path.string() + ": missing header");
    }
    t.header = split_row(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto row = split_row(line);
        if (row.size() != t.header.size()) {
            throw FormatError(path.string() + ": row has " + std::to_string(row.size()) + " cells, header has " +
                              std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        line(row);
    }
}

CsvTable mean_table(std::span<const CsvTable> tables, std::span<const std::string> keys)
{
    if (tables.empty()) {
        throw ContractError("mean_table needs at least one table");
    }
    const CsvTable& first = tables.front();
    std::vector<bool> is_key(first.header.size(), false);
    for (const auto& k : keys) {
        is_key[first.column(k)] = true;
    }
    for (const CsvTable& t : tables) {
        if (t.header != first.header || t.rows.size() != first.rows.size()) {
            throw FormatError("per-seed tables differ in shape; cannot average");
        }
    }
    CsvTable out{first.header, {}};
    for (std::size_t r = 0; r < first.rows.size(); ++r) {
        std::vector<std::string> row(first.header.size());
        for (std::size_t c = 0; c < first.header.size(); ++c) {
            if (is_key[c]) {
                for (const CsvTable& t : tables) {
                    if (t.rows[r][c] != first.rows[r][c]) {
                        throw FormatError("per-seed tables disagree on " + first.header[c] + " in row " +
                                          std::to_string(r + 1));
                    }
                }
                row[c] = first.rows[r][c];
                continue;
            }
            double sum = 0.0;
            for (const CsvTable& t : tables) {
                sum += parse_double(t.rows[r][c]);
            }
            row[c] = format_double(sum / static_cast<double>(tables.size()));
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace lswarm::expio
