#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "eon/pathing.hpp"
#include "eon/qot.hpp"

namespace eon {

using RequestId = std::uint64_t;

/// N_r = ceil(R_r / R_m) * ceil(R_symbol / 12.5).
int required_slots(double request_gbps, double format_gbps, double symbol_rate_gbaud);

/// Contiguous run of slot indices belonging to one band, and where it sits
/// in frequency.
struct SlotSegment {
    Band band = Band::C;
    int begin = 0;
    int end = 0;  // exclusive
    double lower_edge_thz = 0.0;
};

/// Maps scan-order slot indices to frequency: the C band first (ascending),
/// then the L band (ascending). The guard band holds no slots.
class SlotLayout {
public:
    explicit SlotLayout(const BandPlan& plan);

    int total_slots() const { return total_; }
    int slots_per_channel() const { return slots_per_channel_; }
    const std::vector<SlotSegment>& segments() const { return segments_; }

    /// Segment holding `slot`, or nullptr if out of range.
    const SlotSegment* segment_of(int slot) const;
    bool within_one_band(int start, int count) const;

    double slot_lower_edge_thz(int slot) const;
    /// Centre frequency of the channel whose first slot is `first_slot`.
    double channel_center_thz(int first_slot) const;
    /// Centres of the count / slots_per_channel channels in [start, start + count).
    std::vector<double> channel_centers(int start, int count) const;

private:
    std::vector<SlotSegment> segments_;
    int total_ = 0;
    int slots_per_channel_ = 0;
    double slot_width_thz_ = 0.0;
};

struct Allocation {
    RequestId request = 0;
    CandidatePath path;
    int start_slot = 0;
    int slot_count = 0;
    std::vector<double> channel_center_thz;
};

/// Per-link slot occupancy bitmasks (bit set = busy).
class SpectrumGrid {
public:
    SpectrumGrid(std::size_t link_count, SlotLayout layout);

    const SlotLayout& layout() const { return layout_; }
    std::size_t link_count() const { return occupancy_.size() / words_per_link_; }
    int total_slots() const { return layout_.total_slots(); }

    bool is_busy(LinkIndex link, int slot) const;
    std::span<const std::uint64_t> words(LinkIndex link) const;

    /// Lowest scan-order start at which `slot_count` slots are free on every
    /// link of the path and stay inside one band. Never modifies the grid.
    std::optional<int> first_fit(std::span<const LinkIndex> links, int slot_count) const;
    std::optional<int> first_fit(const CandidatePath& path, int slot_count) const {
        return first_fit(path.links, slot_count);
    }

    bool range_free(std::span<const LinkIndex> links, int start, int count) const;

    /// Throws std::logic_error if the range is not free or the request is live.
    Allocation allocate(const CandidatePath& path, int start_slot, int slot_count, RequestId request);
    /// Throws std::logic_error if the allocation is not live.
    void release(const Allocation& allocation);

    std::size_t busy_slot_count() const;
    std::size_t active_count() const { return active_.size(); }

    /// One line per link: "<link-id> <16-hex-digit words...>", word w holding
    /// slots [64w, 64w + 64) with slot 64w in the least significant bit.
    std::string hex_dump(const Topology& topology) const;

    friend bool operator==(const SpectrumGrid& x, const SpectrumGrid& y) { return x.occupancy_ == y.occupancy_; }

private:
    void assign(std::span<const LinkIndex> links, int start, int count, bool busy);

    SlotLayout layout_;
    std::size_t words_per_link_;
    std::vector<std::uint64_t> occupancy_;
    std::unordered_set<RequestId> active_;
    mutable std::vector<std::uint64_t> scratch_;
};

/// MaxF of a hypothetical assignment: highest scan-order slot it would occupy.
inline int max_frequency_slot(int start_slot, int slot_count) {
    return start_slot + slot_count - 1;
}

/// Highest busy scan-order slot anywhere in the grid, or -1 when empty.
int max_frequency(const SpectrumGrid& grid);

}  // namespace eon
