#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "eon/error.hpp"
#include "eon/pathing.hpp"
#include "support.hpp"

using namespace eon;
using testing_support::link_ids;
using testing_support::make_topology;
using testing_support::shipped_data;

namespace {

// A=0, B=1, C=2; A-B 1 km (id 1), B-C 1 km (id 2), A-C 3 km (id 3).
Topology small_triangle() {
    return make_topology(3, {{1, 0, 1, 1.0}, {2, 1, 2, 1.0}, {3, 0, 2, 3.0}});
}

}  // namespace

TEST_SUITE("pathing") {

TEST_CASE("KSP on the small triangle") {
    const Topology t = small_triangle();
    const auto paths = k_shortest_paths(t, 0, 2, 2);
    REQUIRE(paths.size() == 2);
    CHECK(link_ids(t, paths[0].links) == std::vector<int>{1, 2});
    CHECK(paths[0].length_km == 2.0);
    CHECK(paths[0].hop_count == 2);
    CHECK(link_ids(t, paths[1].links) == std::vector<int>{3});
    CHECK(paths[1].length_km == 3.0);
}

TEST_CASE("KSP with k=1 is the shortest path") {
    const Topology t = small_triangle();
    const auto paths = k_shortest_paths(t, 0, 2, 1);
    REQUIRE(paths.size() == 1);
    CHECK(link_ids(t, paths[0].links) == std::vector<int>{1, 2});
}

TEST_CASE("KDSP greedy removal") {
    const Topology t = small_triangle();
    const auto paths = k_disjoint_shortest_paths(t, 0, 2, 2);
    REQUIRE(paths.size() == 2);
    CHECK(link_ids(t, paths[0].links) == std::vector<int>{1, 2});
    CHECK(link_ids(t, paths[1].links) == std::vector<int>{3});

    const Topology line = make_topology(3, {{1, 0, 1, 1.0}, {2, 1, 2, 1.0}});
    CHECK(k_disjoint_shortest_paths(line, 0, 2, 3).size() == 1);
}

TEST_CASE("query errors") {
    const Topology t = small_triangle();
    CHECK_THROWS_AS(k_shortest_paths(t, 0, 0, 2), ValidationError);
    CHECK_THROWS_AS(k_shortest_paths(t, 0, 1, 0), ValidationError);
}

TEST_CASE("catalogs: entry counts and ordering") {
    const Topology t14 = load_topology(shipped_data("topologies/telefonica14_synthetic.json"));
    const PathCatalog ksp(t14, CatalogMode::Ksp, 5);
    CHECK(ksp.entries().size() == 91);
    std::vector<oracle::Edge> edges;
    for (const auto& l : t14.links()) edges.push_back({l.id, static_cast<int>(l.a), static_cast<int>(l.b), l.length_km});
    const int n = static_cast<int>(t14.node_count());
    int short_entries = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const auto& entry = ksp.paths(static_cast<NodeIndex>(a), static_cast<NodeIndex>(b));
            // Pairs inside the triangle hanging off a cut vertex have fewer than k simple paths.
            const std::size_t available = oracle::all_simple_paths(n, edges, a, b).size();
            CHECK(entry.size() == std::min<std::size_t>(5, available));
            short_entries += entry.size() < 5 ? 1 : 0;
            for (std::size_t i = 1; i < entry.size(); ++i) CHECK(path_less(entry[i - 1], entry[i]));
        }
    }
    CHECK(short_entries == 3);

    const Topology tri = load_topology(shipped_data("topologies/triangle.json"));
    const PathCatalog kdsp(tri, CatalogMode::Kdsp, 5);
    for (const auto& entry : kdsp.entries()) CHECK(entry.size() == 2);
}

TEST_CASE("catalog paths are simple with consistent attributes") {
    const Topology t = load_topology(shipped_data("topologies/telefonica14_synthetic.json"));
    for (CatalogMode mode : {CatalogMode::Ksp, CatalogMode::Kdsp}) {
        const PathCatalog cat(t, mode, 5);
        for (const auto& entry : cat.entries()) {
            for (const auto& p : entry) {
                std::set<NodeIndex> visited{p.source};
                NodeIndex at = p.source;
                double length = 0.0;
                int spans = 0;
                for (LinkIndex li : p.links) {
                    const Link& l = t.link(li);
                    REQUIRE((l.a == at || l.b == at));
                    at = l.other(at);
                    CHECK(visited.insert(at).second);
                    length += l.length_km;
                    spans += static_cast<int>(l.spans.size());
                }
                CHECK(at == p.destination);
                CHECK(p.hop_count == static_cast<int>(p.links.size()));
                CHECK(p.length_km == doctest::Approx(length).epsilon(1e-12));
                CHECK(p.span_count == spans);
            }
        }
    }
}

TEST_CASE("KDSP paths are pairwise link-disjoint and start with the KSP head") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const Topology t = make_topology(n, oracle::random_connected_graph(n, rng, 0.5));
        const PathCatalog ksp(t, CatalogMode::Ksp, 5);
        const PathCatalog kdsp(t, CatalogMode::Kdsp, 5);
        for (std::size_t c = 0; c < ksp.entries().size(); ++c) {
            const auto& d = kdsp.entries()[c];
            REQUIRE(!d.empty());
            CHECK(d.front().links == ksp.entries()[c].front().links);
            std::set<LinkIndex> used;
            for (const auto& p : d) {
                for (LinkIndex l : p.links) CHECK(used.insert(l).second);
            }
        }
    }
}

TEST_CASE("KSP equals brute-force enumeration on random graphs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const auto edges = oracle::random_connected_graph(n, rng, 0.45);
        const Topology t = make_topology(n, edges);
        for (int s = 0; s < n; ++s) {
            for (int d = s + 1; d < n; ++d) {
                auto expected = oracle::all_simple_paths(n, edges, s, d);
                if (expected.size() > 5) expected.resize(5);
                const auto got = k_shortest_paths(t, static_cast<NodeIndex>(s), static_cast<NodeIndex>(d), 5);
                REQUIRE(got.size() == expected.size());
                for (std::size_t i = 0; i < got.size(); ++i) {
                    CHECK(link_ids(t, got[i].links) == expected[i].link_ids);
                }
            }
        }
    }
}

TEST_CASE("catalog construction is deterministic") {
    const Topology t = load_topology(shipped_data("topologies/telefonica14_synthetic.json"));
    CHECK(catalog_to_json(t, PathCatalog(t, CatalogMode::Ksp, 5)) ==
          catalog_to_json(t, PathCatalog(t, CatalogMode::Ksp, 5)));
}

}  // TEST_SUITE
