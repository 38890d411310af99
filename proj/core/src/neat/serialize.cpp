#include "lswarm/neat/serialize.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace lswarm::neat {

void write_genome(std::ostream& out, const Genome& genome, const GenomeMeta& meta)
{
    out << "[meta]\n";
    out << "genome_id = " << genome.id << '\n';
    out << "generation = " << meta.generation << '\n';
    out << "task_id = " << (meta.task_id ? std::to_string(*meta.task_id) : "none") << '\n';
    out << "fitness = " << (meta.fitness ? format_double(*meta.fitness) : "none") << '\n';
    out << "\n[nodes]\n# id kind bias\n";
    for (const auto& [id, n] : genome.nodes) {
        out << n.id << ' ' << to_string(n.kind) << ' ' << format_double(n.bias) << '\n';
    }
    out << "\n[connections]\n# innovation source target weight enabled\n";
    for (const auto& [innov, c] : genome.connections) {
        out << c.innovation << ' ' << c.source << ' ' << c.target << ' ' << format_double(c.weight) << ' '
            << (c.enabled ? "true" : "false") << '\n';
    }
}

std::string genome_to_string(const Genome& genome, const GenomeMeta& meta)
{
    std::ostringstream os;
    write_genome(os, genome, meta);
    return os.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> parts;
    for (std::string p; is >> p;) {
        parts.push_back(p);
    }
    return parts;
}

bool parse_bool(const std::string& s)
{
    if (s == "true") {
        return true;
    }
    if (s == "false") {
        return false;
    }
    throw FormatError("expected true/false, got '" + s + "'");
}

} // namespace

GenomeDocument read_genome(std::istream& in)
{
    GenomeDocument doc;
    enum class Section { none, meta, nodes, connections } section = Section::none;
    int expected = 0; // sections must appear in order
    std::string raw;
    std::size_t line_no = 0;
    bool seen_id = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line(trim(raw));
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto where = [&] { return "genome line " + std::to_string(line_no) + ": "; };
        if (line.front() == '[') {
            static const char* names[] = {"[meta]", "[nodes]", "[connections]"};
            if (expected > 2 || line != names[expected]) {
                throw FormatError(where() + "unexpected section " + line);
            }
            section = static_cast<Section>(++expected);
            continue;
        }
        switch (section) {
        case Section::none:
            throw FormatError(where() + "content before [meta]");
        case Section::meta: {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw FormatError(where() + "expected key = value");
            }
            const std::string key(trim(std::string_view(line).substr(0, eq)));
            const std::string value(trim(std::string_view(line).substr(eq + 1)));
            if (key == "genome_id") {
                doc.genome.id = parse_int(value);
                seen_id = true;
            } else if (key == "generation") {
                doc.meta.generation = static_cast<std::size_t>(parse_int(value));
            } else if (key == "task_id") {
                doc.meta.task_id = value == "none" ? std::nullopt : std::optional<int>(static_cast<int>(parse_int(value)));
            } else if (key == "fitness") {
                doc.meta.fitness = value == "none" ? std::nullopt : std::optional<double>(parse_double(value));
            } else {
                throw FormatError(where() + "unknown meta key '" + key + "'");
            }
            break;
        }
        case Section::nodes: {
            const auto p = split_ws(line);
            if (p.size() != 3) {
                throw FormatError(where() + "node needs id kind bias");
            }
            NodeGene n{parse_int(p[0]), parse_node_kind(p[1]), parse_double(p[2])};
            if (!doc.genome.nodes.emplace(n.id, n).second) {
                throw FormatError(where() + "duplicate node id");
            }
            break;
        }
        case Section::connections: {
            const auto p = split_ws(line);
            if (p.size() != 5) {
                throw FormatError(where() + "connection needs innovation source target weight enabled");
            }
            ConnectionGene c{parse_int(p[0]), parse_int(p[1]), parse_int(p[2]), parse_double(p[3]), parse_bool(p[4])};
            if (!doc.genome.connections.emplace(c.innovation, c).second) {
                throw FormatError(where() + "duplicate innovation");
            }
            break;
        }
        }
    }
    if (expected != 3 || !seen_id) {
        throw FormatError("genome document is missing sections or genome_id");
    }
    return doc;
}

GenomeDocument genome_from_string(const std::string& text)
{
    std::istringstream is(text);
    return read_genome(is);
}

void save_genome(const std::filesystem::path& path, const Genome& genome, const GenomeMeta& meta)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write genome file " + path.string());
    }
    write_genome(out, genome, meta);
}

GenomeDocument load_genome(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read genome file " + path.string());
    }
    return read_genome(in);
}

} // namespace lswarm::neat
