#include "eon/pathing.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <set>

#include "eon/error.hpp"
#include "json.hpp"

namespace eon {

bool path_less(const CandidatePath& x, const CandidatePath& y) {
    if (x.length_km != y.length_km) return x.length_km < y.length_km;
    if (x.hop_count != y.hop_count) return x.hop_count < y.hop_count;
    return x.links < y.links;
}

CandidatePath make_path(const Topology& topology, NodeIndex source, std::vector<LinkIndex> links) {
    CandidatePath p;
    p.source = source;
    NodeIndex at = source;
    for (LinkIndex li : links) {
        const Link& l = topology.link(li);
        p.length_km += l.length_km;
        p.span_count += static_cast<int>(l.spans.size());
        at = l.other(at);
    }
    p.destination = at;
    p.hop_count = static_cast<int>(links.size());
    p.links = std::move(links);
    return p;
}

namespace {

struct Label {
    double length = 0.0;
    int hops = 0;
    std::vector<LinkIndex> links;
    NodeIndex node = 0;
};

bool label_less(const Label& x, const Label& y) {
    if (x.length != y.length) return x.length < y.length;
    if (x.hops != y.hops) return x.hops < y.hops;
    return x.links < y.links;
}

// Dijkstra over the (length, hops, link sequence) key. The key is a total
// order that is preserved under extension by a common link, so settling
// each node once with its minimal label is exact.
std::optional<std::vector<LinkIndex>> shortest_path(const Topology& topology, NodeIndex src, NodeIndex des,
                                                    const std::vector<bool>& blocked_nodes,
                                                    const std::vector<bool>& blocked_links) {
    auto greater = [](const Label& x, const Label& y) { return label_less(y, x); };
    std::priority_queue<Label, std::vector<Label>, decltype(greater)> open(greater);
    std::vector<bool> settled(topology.node_count(), false);
    open.push(Label{0.0, 0, {}, src});
    while (!open.empty()) {
        Label cur = open.top();
        open.pop();
        if (settled[cur.node]) continue;
        settled[cur.node] = true;
        if (cur.node == des) return std::move(cur.links);
        for (LinkIndex li : topology.incident(cur.node)) {
            if (blocked_links[li]) continue;
            const Link& l = topology.link(li);
            NodeIndex next = l.other(cur.node);
            if (settled[next] || blocked_nodes[next]) continue;
            Label ext{cur.length + l.length_km, cur.hops + 1, cur.links, next};
            ext.links.push_back(li);
            open.push(std::move(ext));
        }
    }
    return std::nullopt;
}

void check_query(const Topology& topology, NodeIndex src, NodeIndex des, int k) {
    if (src >= topology.node_count() || des >= topology.node_count()) {
        throw ValidationError("path query references an unknown node");
    }
    if (src == des) throw ValidationError("path query needs distinct endpoints");
    if (k < 1) throw ValidationError("k must be at least 1");
}

std::vector<NodeIndex> path_nodes(const Topology& topology, const CandidatePath& p) {
    std::vector<NodeIndex> nodes{p.source};
    for (LinkIndex li : p.links) nodes.push_back(topology.link(li).other(nodes.back()));
    return nodes;
}

}  // namespace

std::vector<CandidatePath> k_shortest_paths(const Topology& topology, NodeIndex src, NodeIndex des, int k) {
    check_query(topology, src, des, k);
    const std::vector<bool> no_nodes(topology.node_count(), false);
    const std::vector<bool> no_links(topology.link_count(), false);

    auto first = shortest_path(topology, src, des, no_nodes, no_links);
    if (!first) {
        throw NoPathError("no path between '" + topology.nodes()[src].id + "' and '" + topology.nodes()[des].id +
                          "'");
    }

    std::vector<CandidatePath> accepted{make_path(topology, src, std::move(*first))};
    std::set<CandidatePath, decltype(&path_less)> candidates(&path_less);

    while (static_cast<int>(accepted.size()) < k) {
        const CandidatePath& prev = accepted.back();
        const std::vector<NodeIndex> nodes = path_nodes(topology, prev);

        for (std::size_t i = 0; i < prev.links.size(); ++i) {
            const NodeIndex spur = nodes[i];
            const std::vector<LinkIndex> root(prev.links.begin(), prev.links.begin() + static_cast<long>(i));

            std::vector<bool> blocked_links(topology.link_count(), false);
            for (const auto& p : accepted) {
                if (p.links.size() > i && std::equal(root.begin(), root.end(), p.links.begin())) {
                    blocked_links[p.links[i]] = true;
                }
            }
            std::vector<bool> blocked_nodes(topology.node_count(), false);
            for (std::size_t r = 0; r < i; ++r) blocked_nodes[nodes[r]] = true;

            auto spur_links = shortest_path(topology, spur, des, blocked_nodes, blocked_links);
            if (!spur_links) continue;

            std::vector<LinkIndex> full = root;
            full.insert(full.end(), spur_links->begin(), spur_links->end());
            CandidatePath cand = make_path(topology, src, std::move(full));
            const bool known = std::any_of(accepted.begin(), accepted.end(),
                                           [&](const CandidatePath& p) { return p.links == cand.links; });
            if (!known) candidates.insert(std::move(cand));
        }

        if (candidates.empty()) break;
        accepted.push_back(*candidates.begin());
        candidates.erase(candidates.begin());
    }

    std::sort(accepted.begin(), accepted.end(), path_less);
    return accepted;
}

std::vector<CandidatePath> k_disjoint_shortest_paths(const Topology& topology, NodeIndex src, NodeIndex des,
                                                     int k) {
    check_query(topology, src, des, k);
    const std::vector<bool> no_nodes(topology.node_count(), false);
    std::vector<bool> removed(topology.link_count(), false);

    std::vector<CandidatePath> out;
    while (static_cast<int>(out.size()) < k) {
        auto links = shortest_path(topology, src, des, no_nodes, removed);
        if (!links) break;
        for (LinkIndex li : *links) removed[li] = true;
        out.push_back(make_path(topology, src, std::move(*links)));
    }
    if (out.empty()) {
        throw NoPathError("no path between '" + topology.nodes()[src].id + "' and '" + topology.nodes()[des].id +
                          "'");
    }
    std::sort(out.begin(), out.end(), path_less);
    return out;
}

std::string_view catalog_mode_name(CatalogMode mode) {
    return mode == CatalogMode::Ksp ? "ksp" : "kdsp";
}

CatalogMode parse_catalog_mode(std::string_view text) {
    if (text == "ksp" || text == "KSP") return CatalogMode::Ksp;
    if (text == "kdsp" || text == "KDSP") return CatalogMode::Kdsp;
    throw ConfigError("unknown catalog mode '" + std::string(text) + "' (expected ksp or kdsp)");
}

PathCatalog::PathCatalog(const Topology& topology, CatalogMode mode, int k)
    : mode_(mode), k_(k), node_count_(topology.node_count()) {
    if (k < 1) throw ValidationError("k must be at least 1");
    const auto n = static_cast<NodeIndex>(topology.node_count());
    entries_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = a + 1; b < n; ++b) {
            entries_.push_back(mode == CatalogMode::Ksp ? k_shortest_paths(topology, a, b, k)
                                                        : k_disjoint_shortest_paths(topology, a, b, k));
        }
    }
}

const std::vector<CandidatePath>& PathCatalog::paths(NodeIndex a, NodeIndex b) const {
    return entries_.at(connection_index(a, b, node_count_));
}

double PathCatalog::mean_paths_per_connection() const {
    std::size_t total = 0;
    for (const auto& e : entries_) total += e.size();
    return entries_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(entries_.size());
}

std::string catalog_to_json(const Topology& topology, const PathCatalog& catalog) {
    nlohmann::ordered_json doc;
    doc["mode"] = std::string(catalog_mode_name(catalog.mode()));
    doc["k"] = catalog.k();
    auto& conns = doc["connections"] = nlohmann::ordered_json::array();
    for (const auto& entry : catalog.entries()) {
        if (entry.empty()) continue;
        nlohmann::ordered_json c;
        c["src"] = topology.nodes()[entry.front().source].id;
        c["des"] = topology.nodes()[entry.front().destination].id;
        auto& paths = c["paths"] = nlohmann::ordered_json::array();
        for (const auto& p : entry) {
            nlohmann::ordered_json jp;
            std::vector<int> ids;
            for (LinkIndex li : p.links) ids.push_back(topology.link(li).id);
            jp["link_ids"] = ids;
            jp["hop_count"] = p.hop_count;
            jp["length_km"] = p.length_km;
            jp["span_count"] = p.span_count;
            paths.push_back(std::move(jp));
        }
        conns.push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

}  // namespace eon
