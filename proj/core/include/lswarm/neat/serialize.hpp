#pragma once

#include "lswarm/neat/genome.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace lswarm::neat {

struct GenomeMeta {
    std::size_t generation = 0;
    std::optional<int> task_id;
    std::optional<double> fitness;

    friend bool operator==(const GenomeMeta&, const GenomeMeta&) = default;
};

struct GenomeDocument {
    Genome genome;
    GenomeMeta meta;
};

/// Text document with sections [meta], [nodes], [connections]. Reals are
/// written in shortest round-trip form, so reading back is bit-exact.
void write_genome(std::ostream& out, const Genome& genome, const GenomeMeta& meta = {});
std::string genome_to_string(const Genome& genome, const GenomeMeta& meta = {});

GenomeDocument read_genome(std::istream& in);
GenomeDocument genome_from_string(const std::string& text);

void save_genome(const std::filesystem::path& path, const Genome& genome, const GenomeMeta& meta = {});
GenomeDocument load_genome(const std::filesystem::path& path);

} // namespace lswarm::neat
