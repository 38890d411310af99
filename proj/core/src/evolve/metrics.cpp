#include "lswarm/evolve/metrics.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

namespace lswarm::evolve {

std::pair<std::vector<neat::SpeciesId>, std::vector<neat::SpeciesId>>
SpeciesTracker::observe(std::size_t generation, const std::map<neat::SpeciesId, std::size_t>& alive_sizes)
{
    std::vector<neat::SpeciesId> created;
    std::vector<neat::SpeciesId> extinct;
    for (auto& [id, row] : rows_) {
        if (!row.extinct_at && !alive_sizes.contains(id)) {
            row.extinct_at = generation;
            extinct.push_back(id);
        }
    }
    for (const auto& [id, size] : alive_sizes) {
        auto [it, inserted] = rows_.try_emplace(id, SpeciesLifespan{id, generation, std::nullopt, 0});
        if (inserted) {
            created.push_back(id);
        }
        it->second.peak_size = std::max(it->second.peak_size, size);
    }
    return {created, extinct};
}

std::vector<SpeciesLifespan> SpeciesTracker::lifespans() const
{
    std::vector<SpeciesLifespan> out;
    out.reserve(rows_.size());
    for (const auto& [id, row] : rows_) {
        out.push_back(row);
    }
    return out;
}

std::size_t SpeciesTracker::alive_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& [id, row] : rows_) {
        n += row.extinct_at ? 0 : 1;
    }
    return n;
}

SpeciesTracker SpeciesTracker::restore(const std::vector<SpeciesLifespan>& rows)
{
    SpeciesTracker t;
    for (const auto& r : rows) {
        t.rows_.emplace(r.species_id, r);
    }
    return t;
}

std::map<neat::SpeciesId, std::size_t> census_of(const neat::Population& pop)
{
    std::map<neat::SpeciesId, std::size_t> out;
    for (const auto& s : pop.species) {
        if (s.alive() && !s.members.empty()) {
            out.emplace(s.id, s.members.size());
        }
    }
    return out;
}

namespace {

template <typename T>
std::string join(const std::vector<T>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            s += ';';
        }
        s += std::to_string(v[i]);
    }
    return s;
}

template <typename T>
std::vector<T> split_ids(const std::string& s)
{
    std::vector<T> out;
    std::istringstream is(s);
    for (std::string part; std::getline(is, part, ';');) {
        if (!trim(part).empty()) {
            out.push_back(static_cast<T>(parse_int(part)));
        }
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    return out;
}

// Rows of a CSV file with a known header; every row must have `columns` cells.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& p, const std::string& header)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + p.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw FormatError(p.string() + ": expected header '" + header + "'");
    }
    const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (cells.size() != columns) {
            throw FormatError(p.string() + ": wrong column count in '" + line + "'");
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

void write_metrics(const std::filesystem::path& dir, const LifelongMetrics& m)
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "fitness.csv");
        out << "generation,task_id,best_fitness,mean_fitness,n_species\n";
        for (const auto& r : m.fitness) {
            out << r.generation << ',' << r.task_id << ',' << format_double(r.best_fitness) << ','
                << format_double(r.mean_fitness) << ',' << r.n_species << '\n';
        }
    }
    {
        auto out = open_out(dir / "retention.csv");
        out << "generation,eval_task_id,r_pop,r_top\n";
        for (const auto& r : m.retention) {
            out << r.generation << ',' << r.eval_task_id << ',' << format_double(r.r_pop) << ','
                << format_double(r.r_top) << '\n';
        }
    }
    {
        auto out = open_out(dir / "forgetting.csv");
        out << "boundary_generation,task_id,f_pop,f_top\n";
        for (const auto& r : m.forgetting) {
            out << r.boundary_generation << ',' << r.task_id << ',' << format_double(r.f_pop) << ','
                << format_double(r.f_top) << '\n';
        }
    }
    {
        auto out = open_out(dir / "species.csv");
        out << "species_id,created_at,extinct_at,peak_size\n";
        for (const auto& r : m.species) {
            out << r.species_id << ',' << r.created_at << ',' << (r.extinct_at ? std::to_string(*r.extinct_at) : "")
                << ',' << r.peak_size << '\n';
        }
    }
    {
        auto out = open_out(dir / "census.csv");
        out << "generation,alive,sizes,created,extinct\n";
        for (const auto& r : m.census) {
            out << r.generation << ',' << join(r.alive) << ',' << join(r.sizes) << ',' << join(r.created) << ','
                << join(r.extinct) << '\n';
        }
    }
    {
        auto out = open_out(dir / "reference.csv");
        out << "generation,mean_distance\n";
        for (const auto& r : m.reference) {
            out << r.generation << ',' << format_double(r.mean_distance) << '\n';
        }
    }
}

LifelongMetrics read_metrics(const std::filesystem::path& dir)
{
    LifelongMetrics m;
    const auto sz = [](const std::string& s) { return static_cast<std::size_t>(parse_int(s)); };
    for (const auto& c : read_rows(dir / "fitness.csv", "generation,task_id,best_fitness,mean_fitness,n_species")) {
        m.fitness.push_back(
            {sz(c[0]), static_cast<int>(parse_int(c[1])), parse_double(c[2]), parse_double(c[3]), sz(c[4])});
    }
    for (const auto& c : read_rows(dir / "retention.csv", "generation,eval_task_id,r_pop,r_top")) {
        m.retention.push_back({sz(c[0]), static_cast<int>(parse_int(c[1])), parse_double(c[2]), parse_double(c[3])});
    }
    for (const auto& c : read_rows(dir / "forgetting.csv", "boundary_generation,task_id,f_pop,f_top")) {
        m.forgetting.push_back(
            {sz(c[0]), static_cast<int>(parse_int(c[1])), parse_double(c[2]), parse_double(c[3])});
    }
    for (const auto& c : read_rows(dir / "species.csv", "species_id,created_at,extinct_at,peak_size")) {
        m.species.push_back({parse_int(c[0]), sz(c[1]),
                             c[2].empty() ? std::nullopt : std::optional<std::size_t>(sz(c[2])), sz(c[3])});
    }
    for (const auto& c : read_rows(dir / "census.csv", "generation,alive,sizes,created,extinct")) {
        m.census.push_back({sz(c[0]), split_ids<neat::SpeciesId>(c[1]), split_ids<std::size_t>(c[2]),
                            split_ids<neat::SpeciesId>(c[3]), split_ids<neat::SpeciesId>(c[4])});
    }
    for (const auto& c : read_rows(dir / "reference.csv", "generation,mean_distance")) {
        m.reference.push_back({sz(c[0]), parse_double(c[1])});
    }
    return m;
}

} // namespace lswarm::evolve
