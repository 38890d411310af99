#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lswarm::expio {

/// A CSV file held as text cells. Cells never contain commas.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(std::string_view name) const; // throws FormatError if absent
    [[nodiscard]] std::vector<double> numbers(std::string_view name) const;

    friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Row-wise mean of tables with the same header and the same values in
/// every `key` column. Other columns are averaged in table order.
CsvTable mean_table(std::span<const CsvTable> tables, std::span<const std::string> keys);

} // namespace lswarm::expio
