#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eon/topology.hpp"
#include "oracles.hpp"

namespace testing_support {

inline std::filesystem::path test_data(const std::string& name) {
    return std::filesystem::path(EON_TEST_DATA_DIR) / name;
}

inline std::filesystem::path shipped_data(const std::string& name) {
    return std::filesystem::path(EON_DATA_DIR) / name;
}

/// Nodes are named "n0".."n{n-1}"; each link is one span of its length.
inline eon::Topology make_topology(int node_count, const std::vector<oracle::Edge>& edges) {
    std::vector<eon::Node> nodes;
    for (int i = 0; i < node_count; ++i) nodes.push_back({"n" + std::to_string(i), 0});
    std::vector<eon::Link> links;
    for (const auto& e : edges) {
        eon::Link l;
        l.id = e.id;
        l.a = static_cast<eon::NodeIndex>(e.a);
        l.b = static_cast<eon::NodeIndex>(e.b);
        l.length_km = e.length;
        l.spans = {eon::Span{e.length, {}}};
        links.push_back(std::move(l));
    }
    return eon::Topology(std::move(nodes), std::move(links));
}

inline std::vector<int> link_ids(const eon::Topology& t, const std::vector<eon::LinkIndex>& links) {
    std::vector<int> ids;
    for (auto i : links) ids.push_back(t.link(i).id);
    return ids;
}

}  // namespace testing_support
