#include "lswarm/neat/distance.hpp"

#include <cmath>

namespace lswarm::neat {

namespace {

// Merge-walk of two key-sorted maps. `diff` gives |parameter difference|
// of a matching pair; `counts` filters genes that take part.
template <typename Map, typename Counts, typename Diff>
void align(const Map& a, const Map& b, Counts counts, Diff diff, GeneAlignment& out)
{
    using Key = typename Map::key_type;
    bool have_a = false;
    bool have_b = false;
    Key last_a{};
    Key last_b{};
    for (const auto& [k, g] : a) {
        if (counts(g)) {
            last_a = k;
            have_a = true;
            ++out.size_a;
        }
    }
    for (const auto& [k, g] : b) {
        if (counts(g)) {
            last_b = k;
            have_b = true;
            ++out.size_b;
        }
    }

    auto ia = a.begin();
    auto ib = b.begin();
    const auto classify = [&](const Key& k, bool from_a) {
        // A gene past the other genome's last marker is excess.
        const bool other_has = from_a ? have_b : have_a;
        const Key other_last = from_a ? last_b : last_a;
        if (!other_has || k > other_last) {
            ++out.excess;
        } else {
            ++out.disjoint;
        }
    };
    while (ia != a.end() || ib != b.end()) {
        if (ia != a.end() && !counts(ia->second)) {
            ++ia;
            continue;
        }
        if (ib != b.end() && !counts(ib->second)) {
            ++ib;
            continue;
        }
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            classify(ia->first, true);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            classify(ib->first, false);
            ++ib;
        } else {
            ++out.matching;
            out.parameter_difference_sum += diff(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
}

} // namespace

GeneAlignment align_genes(const Genome& a, const Genome& b)
{
    GeneAlignment out;
    align(
        a.nodes, b.nodes, [](const NodeGene& n) { return n.kind != NodeKind::input; },
        [](const NodeGene& x, const NodeGene& y) { return std::abs(x.bias - y.bias); }, out);
    align(
        a.connections, b.connections, [](const ConnectionGene&) { return true; },
        [](const ConnectionGene& x, const ConnectionGene& y) { return std::abs(x.weight - y.weight); }, out);
    return out;
}

double genetic_distance(const Genome& a, const Genome& b, const DistanceConfig& cfg)
{
    const GeneAlignment al = align_genes(a, b);
    const std::size_t n = al.max_size();
    if (n == 0) {
        return 0.0;
    }
    const double norm = static_cast<double>(n);
    return cfg.c1 * static_cast<double>(al.excess) / norm + cfg.c2 * static_cast<double>(al.disjoint) / norm +
           cfg.c3 * al.mean_difference();
}

} // namespace lswarm::neat
