#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "eon/topology.hpp"

namespace eon {

struct CandidatePath {
    NodeIndex source = 0;
    NodeIndex destination = 0;
    std::vector<LinkIndex> links;  // in traversal order from source
    int hop_count = 0;
    double length_km = 0.0;
    int span_count = 0;
};

/// Catalog order: (length_km, hop_count, link ids lexicographically).
bool path_less(const CandidatePath& x, const CandidatePath& y);

/// Builds a CandidatePath from a link sequence, filling in the attributes.
CandidatePath make_path(const Topology& topology, NodeIndex source, std::vector<LinkIndex> links);

/// Loopless K shortest paths by length (Yen), sorted in catalog order.
std::vector<CandidatePath> k_shortest_paths(const Topology& topology, NodeIndex src, NodeIndex des, int k);

/// Greedy link-disjoint paths: take the shortest path, remove its links, repeat.
/// Returns up to k paths.
std::vector<CandidatePath> k_disjoint_shortest_paths(const Topology& topology, NodeIndex src, NodeIndex des,
                                                     int k);

enum class CatalogMode { Ksp, Kdsp };

std::string_view catalog_mode_name(CatalogMode mode);
CatalogMode parse_catalog_mode(std::string_view text);

class PathCatalog {
public:
    PathCatalog(const Topology& topology, CatalogMode mode, int k);

    CatalogMode mode() const { return mode_; }
    int k() const { return k_; }

    /// Entries indexed by connection_index(a, b, node_count).
    const std::vector<CandidatePath>& paths(NodeIndex a, NodeIndex b) const;
    const std::vector<std::vector<CandidatePath>>& entries() const { return entries_; }

    double mean_paths_per_connection() const;

private:
    CatalogMode mode_;
    int k_;
    std::size_t node_count_;
    std::vector<std::vector<CandidatePath>> entries_;
};

inline PathCatalog build_catalog(const Topology& topology, CatalogMode mode, int k) {
    return PathCatalog(topology, mode, k);
}

/// JSON dump of every connection's candidate list, for inspection.
std::string catalog_to_json(const Topology& topology, const PathCatalog& catalog);

}  // namespace eon
