#include "eon/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "eon/error.hpp"
#include "json.hpp"

namespace eon {

using nlohmann::json;

std::string_view band_name(Band band) {
    return band == Band::C ? "C" : "L";
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
    if (nodes_.size() < 2) {
        throw ValidationError("topology needs at least two nodes");
    }
    std::set<std::string> ids;
    for (const auto& n : nodes_) {
        if (n.id.empty()) throw ValidationError("empty node id");
        if (!ids.insert(n.id).second) throw ValidationError("duplicate node id '" + n.id + "'");
    }

    std::sort(links_.begin(), links_.end(), [](const Link& x, const Link& y) { return x.id < y.id; });

    adjacency_.assign(nodes_.size(), {});
    std::set<std::pair<NodeIndex, NodeIndex>> pairs;
    for (LinkIndex i = 0; i < links_.size(); ++i) {
        const Link& l = links_[i];
        if (i > 0 && links_[i - 1].id == l.id) {
            throw ValidationError("duplicate link id " + std::to_string(l.id));
        }
        if (l.a >= nodes_.size() || l.b >= nodes_.size()) {
            throw ValidationError("link " + std::to_string(l.id) + " references an unknown node");
        }
        if (l.a == l.b) {
            throw ValidationError("link " + std::to_string(l.id) + " is a self-loop");
        }
        if (!(l.length_km > 0.0) || !std::isfinite(l.length_km)) {
            throw ValidationError("link " + std::to_string(l.id) + " has nonpositive length");
        }
        if (l.spans.empty()) {
            throw ValidationError("link " + std::to_string(l.id) + " has no spans");
        }
        double sum = 0.0;
        for (const auto& s : l.spans) {
            if (!(s.length_km > 0.0)) throw ValidationError("span length must be positive");
            for (Band b : kAllBands) {
                if (!(s.fiber[b].attenuation_db_per_km > 0.0) || !(s.fiber[b].noise_figure_db > 0.0)) {
                    throw ValidationError("link " + std::to_string(l.id) +
                                          ": attenuation and noise figure must be positive");
                }
            }
            sum += s.length_km;
        }
        if (std::abs(sum - l.length_km) > 1e-9) {
            throw ValidationError("link " + std::to_string(l.id) + ": span lengths do not sum to link length");
        }
        auto key = std::minmax(l.a, l.b);
        if (!pairs.insert({key.first, key.second}).second) {
            throw ValidationError("parallel link " + std::to_string(l.id) + " between '" + nodes_[l.a].id +
                                  "' and '" + nodes_[l.b].id + "'");
        }
        adjacency_[l.a].push_back(i);
        adjacency_[l.b].push_back(i);
    }

    for (NodeIndex n = 0; n < nodes_.size(); ++n) {
        nodes_[n].degree = static_cast<int>(adjacency_[n].size());
    }

    // Connectivity by BFS from node 0.
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeIndex> frontier{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        NodeIndex u = frontier.back();
        frontier.pop_back();
        for (LinkIndex li : adjacency_[u]) {
            NodeIndex v = links_[li].other(u);
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                frontier.push_back(v);
            }
        }
    }
    if (reached != nodes_.size()) {
        throw ValidationError("topology is not connected");
    }
}

std::optional<NodeIndex> Topology::find_node(std::string_view id) const {
    for (NodeIndex i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return i;
    }
    return std::nullopt;
}

NodeIndex Topology::node_index(std::string_view id) const {
    if (auto i = find_node(id)) return *i;
    throw ValidationError("unknown node '" + std::string(id) + "'");
}

std::vector<Span> partition_spans(double length_km, double target_span_km, const BandFiberParams& fiber) {
    if (!(length_km > 0.0) || !(target_span_km > 0.0)) {
        throw ValidationError("partition_spans: lengths must be positive");
    }
    const auto n = static_cast<std::size_t>(std::ceil(length_km / target_span_km));
    return std::vector<Span>(std::max<std::size_t>(n, 1), Span{length_km / static_cast<double>(n), fiber});
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
}

BandFiberParams parse_fiber(const json& j, BandFiberParams base, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": 'fiber' must be an object");
    reject_unknown_keys(j, {"C", "L"}, where + ".fiber");
    for (Band b : kAllBands) {
        const std::string name(band_name(b));
        if (!j.contains(name)) continue;
        const json& p = j.at(name);
        reject_unknown_keys(p, {"attenuation_db_per_km", "noise_figure_db"}, where + ".fiber." + name);
        if (p.contains("attenuation_db_per_km")) base[b].attenuation_db_per_km = p.at("attenuation_db_per_km").get<double>();
        if (p.contains("noise_figure_db")) base[b].noise_figure_db = p.at("noise_figure_db").get<double>();
    }
    return base;
}

}  // namespace

Topology parse_topology(std::string_view json_text, const TopologyDefaults& defaults) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("topology: ") + e.what());
    }

    try {
        if (!doc.is_object()) throw ParseError("topology: top level must be an object");
        reject_unknown_keys(doc, {"name", "description", "fiber", "nodes", "links"}, "topology");
        if (!doc.contains("nodes") || !doc.contains("links")) {
            throw ParseError("topology: 'nodes' and 'links' are required");
        }

        BandFiberParams fiber = defaults.fiber;
        if (doc.contains("fiber")) fiber = parse_fiber(doc.at("fiber"), fiber, "topology");

        std::vector<Node> nodes;
        std::map<std::string, NodeIndex> index;
        for (const json& n : doc.at("nodes")) {
            reject_unknown_keys(n, {"id"}, "node");
            Node node{n.at("id").get<std::string>(), 0};
            index.emplace(node.id, static_cast<NodeIndex>(nodes.size()));
            nodes.push_back(std::move(node));
        }

        std::vector<Link> links;
        for (const json& l : doc.at("links")) {
            reject_unknown_keys(l, {"id", "a", "b", "length_km", "span_lengths_km", "fiber"}, "link");
            Link link;
            link.id = l.at("id").get<int>();
            const std::string where = "link " + std::to_string(link.id);
            const auto a = l.at("a").get<std::string>();
            const auto b = l.at("b").get<std::string>();
            auto ia = index.find(a);
            auto ib = index.find(b);
            if (ia == index.end() || ib == index.end()) {
                throw ValidationError(where + " references an unknown node");
            }
            link.a = ia->second;
            link.b = ib->second;
            link.length_km = l.at("length_km").get<double>();
            if (!(link.length_km > 0.0)) throw ValidationError(where + " has nonpositive length");

            BandFiberParams link_fiber = fiber;
            if (l.contains("fiber")) link_fiber = parse_fiber(l.at("fiber"), link_fiber, where);

            if (l.contains("span_lengths_km")) {
                for (const json& s : l.at("span_lengths_km")) {
                    link.spans.push_back(Span{s.get<double>(), link_fiber});
                }
            } else {
                link.spans = partition_spans(link.length_km, defaults.target_span_km, link_fiber);
            }
            links.push_back(std::move(link));
        }
        return Topology(std::move(nodes), std::move(links));
    } catch (const json::exception& e) {
        throw ParseError(std::string("topology: ") + e.what());
    }
}

Topology load_topology(const std::filesystem::path& path, const TopologyDefaults& defaults) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open topology file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_topology(buf.str(), defaults);
}

std::size_t connection_index(NodeIndex i, NodeIndex j, std::size_t n) {
    if (i > j) std::swap(i, j);
    // Pairs (r, *) for rows r < i come first; row r holds n - 1 - r entries.
    const std::size_t row_start = static_cast<std::size_t>(i) * (2 * n - i - 1) / 2;
    return row_start + (j - i - 1);
}

double ConnectionPdf::at(NodeIndex i, NodeIndex j) const {
    if (i > j) std::swap(i, j);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (pairs[k].a == i && pairs[k].b == j) return probability[k];
    }
    return 0.0;
}

ConnectionPdf connection_pdf(const Topology& topology) {
    const auto& nodes = topology.nodes();
    ConnectionPdf pdf;
    double total = 0.0;
    for (NodeIndex i = 0; i < nodes.size(); ++i) {
        for (NodeIndex j = i + 1; j < nodes.size(); ++j) {
            const double w = static_cast<double>(nodes[i].degree) * nodes[j].degree;
            pdf.pairs.push_back({i, j});
            pdf.probability.push_back(w);
            total += w;
        }
    }
    for (double& p : pdf.probability) p /= total;
    return pdf;
}

}  // namespace eon
