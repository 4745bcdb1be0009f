#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace eon {

enum class Band : std::uint8_t { C = 0, L = 1 };

inline constexpr std::array<Band, 2> kAllBands{Band::C, Band::L};

std::string_view band_name(Band band);

struct FiberParams {
    double attenuation_db_per_km = 0.2;
    double noise_figure_db = 4.5;
};

/// Fiber and amplifier parameters for every band a span may carry.
struct BandFiberParams {
    std::array<FiberParams, 2> per_band{FiberParams{0.2, 4.5}, FiberParams{0.2, 6.0}};

    const FiberParams& operator[](Band band) const { return per_band[static_cast<std::size_t>(band)]; }
    FiberParams& operator[](Band band) { return per_band[static_cast<std::size_t>(band)]; }
};

struct Span {
    double length_km = 0.0;
    BandFiberParams fiber;
};

using NodeIndex = std::uint32_t;
using LinkIndex = std::uint32_t;

struct Node {
    std::string id;
    int degree = 0;
};

struct Link {
    int id = 0;
    NodeIndex a = 0;
    NodeIndex b = 0;
    double length_km = 0.0;
    std::vector<Span> spans;

    NodeIndex other(NodeIndex n) const { return n == a ? b : a; }
};

/// Simple undirected connected graph. Links are stored sorted by id, so a
/// LinkIndex order equals link-id order.
class Topology {
public:
    Topology(std::vector<Node> nodes, std::vector<Link> links);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }
    const std::vector<LinkIndex>& incident(NodeIndex n) const { return adjacency_[n]; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return links_.size(); }

    std::optional<NodeIndex> find_node(std::string_view id) const;
    NodeIndex node_index(std::string_view id) const;  // throws ValidationError

    const Link& link(LinkIndex i) const { return links_[i]; }

private:
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::vector<std::vector<LinkIndex>> adjacency_;
};

struct TopologyDefaults {
    double target_span_km = 70.0;
    BandFiberParams fiber;
};

/// Equal-length split into ceil(length / target) spans.
std::vector<Span> partition_spans(double length_km, double target_span_km,
                                  const BandFiberParams& fiber = {});

Topology load_topology(const std::filesystem::path& path, const TopologyDefaults& defaults = {});
Topology parse_topology(std::string_view json_text, const TopologyDefaults& defaults = {});

/// Unordered node pair (a < b), the unit the request generator samples.
struct Connection {
    NodeIndex a = 0;
    NodeIndex b = 0;

    friend bool operator==(const Connection&, const Connection&) = default;
    friend auto operator<=>(const Connection&, const Connection&) = default;
};

/// Nodal-degree connection distribution. Entries follow the fixed order
/// (0,1), (0,2), ..., (0,N-1), (1,2), ... which is also the order the
/// inverse-CDF sampler walks.
struct ConnectionPdf {
    std::vector<Connection> pairs;
    std::vector<double> probability;

    std::size_t size() const { return pairs.size(); }
    double at(NodeIndex i, NodeIndex j) const;
};

ConnectionPdf connection_pdf(const Topology& topology);

/// Position of the unordered pair (i, j) in ConnectionPdf order for `n` nodes.
std::size_t connection_index(NodeIndex i, NodeIndex j, std::size_t n);

}  // namespace eon
