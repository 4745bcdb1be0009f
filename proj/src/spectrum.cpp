#include "eon/spectrum.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "eon/error.hpp"

namespace eon {

int required_slots(double request_gbps, double format_gbps, double symbol_rate_gbaud) {
    if (!(request_gbps > 0.0) || !(format_gbps > 0.0) || !(symbol_rate_gbaud > 0.0)) {
        throw ValidationError("required_slots: arguments must be positive");
    }
    const auto channels = static_cast<int>(std::ceil(request_gbps / format_gbps));
    const auto per_channel = static_cast<int>(std::ceil(symbol_rate_gbaud / 12.5));
    return channels * per_channel;
}

SlotLayout::SlotLayout(const BandPlan& plan)
    : slots_per_channel_(plan.slots_per_channel()), slot_width_thz_(1e-3 * plan.slot_width_ghz) {
    for (Band band : kAllBands) {
        const BandSpec* b = plan.find(band);
        if (!b) continue;
        const int n = b->channel_count * slots_per_channel_;
        segments_.push_back({band, total_, total_ + n, plan.lower_edge_thz(*b)});
        total_ += n;
    }
}

const SlotSegment* SlotLayout::segment_of(int slot) const {
    for (const auto& s : segments_) {
        if (slot >= s.begin && slot < s.end) return &s;
    }
    return nullptr;
}

bool SlotLayout::within_one_band(int start, int count) const {
    const SlotSegment* s = segment_of(start);
    return s != nullptr && count > 0 && start + count <= s->end;
}

double SlotLayout::slot_lower_edge_thz(int slot) const {
    const SlotSegment* s = segment_of(slot);
    if (!s) throw OutOfBandError("slot " + std::to_string(slot) + " outside the grid");
    return s->lower_edge_thz + slot_width_thz_ * (slot - s->begin);
}

double SlotLayout::channel_center_thz(int first_slot) const {
    return slot_lower_edge_thz(first_slot) + 0.5 * slot_width_thz_ * slots_per_channel_;
}

std::vector<double> SlotLayout::channel_centers(int start, int count) const {
    std::vector<double> out;
    for (int s = start; s + slots_per_channel_ <= start + count; s += slots_per_channel_) {
        out.push_back(channel_center_thz(s));
    }
    return out;
}

SpectrumGrid::SpectrumGrid(std::size_t link_count, SlotLayout layout)
    : layout_(std::move(layout)),
      words_per_link_(static_cast<std::size_t>(layout_.total_slots() + 63) / 64),
      occupancy_(link_count * words_per_link_, 0),
      scratch_(words_per_link_, 0) {}

bool SpectrumGrid::is_busy(LinkIndex link, int slot) const {
    const std::uint64_t w = occupancy_[link * words_per_link_ + static_cast<std::size_t>(slot) / 64];
    return (w >> (slot % 64)) & 1U;
}

std::span<const std::uint64_t> SpectrumGrid::words(LinkIndex link) const {
    return {occupancy_.data() + link * words_per_link_, words_per_link_};
}

namespace {

// First index >= from in [from, end) whose bit equals `want`, or end.
int find_bit(std::span<const std::uint64_t> mask, int from, int end, bool want) {
    while (from < end) {
        const std::size_t wi = static_cast<std::size_t>(from) / 64;
        std::uint64_t w = want ? mask[wi] : ~mask[wi];
        w &= ~std::uint64_t{0} << (from % 64);
        if (w != 0) {
            const int hit = static_cast<int>(wi * 64) + std::countr_zero(w);
            return hit < end ? hit : end;
        }
        from = static_cast<int>((wi + 1) * 64);
    }
    return end;
}

}  // namespace

std::optional<int> SpectrumGrid::first_fit(std::span<const LinkIndex> links, int slot_count) const {
    if (slot_count <= 0) return std::nullopt;
    std::fill(scratch_.begin(), scratch_.end(), 0);
    for (LinkIndex li : links) {
        const std::uint64_t* w = occupancy_.data() + li * words_per_link_;
        for (std::size_t i = 0; i < words_per_link_; ++i) scratch_[i] |= w[i];
    }
    const std::span<const std::uint64_t> busy(scratch_);
    for (const SlotSegment& seg : layout_.segments()) {
        int pos = seg.begin;
        while (pos + slot_count <= seg.end) {
            const int free_start = find_bit(busy, pos, seg.end, false);
            if (free_start + slot_count > seg.end) break;
            const int busy_next = find_bit(busy, free_start, seg.end, true);
            if (busy_next - free_start >= slot_count) return free_start;
            pos = busy_next;
        }
    }
    return std::nullopt;
}

bool SpectrumGrid::range_free(std::span<const LinkIndex> links, int start, int count) const {
    for (LinkIndex li : links) {
        for (int s = start; s < start + count; ++s) {
            if (is_busy(li, s)) return false;
        }
    }
    return true;
}

void SpectrumGrid::assign(std::span<const LinkIndex> links, int start, int count, bool busy) {
    for (LinkIndex li : links) {
        std::uint64_t* w = occupancy_.data() + li * words_per_link_;
        for (int s = start; s < start + count; ++s) {
            const std::uint64_t bit = std::uint64_t{1} << (s % 64);
            if (busy) {
                w[s / 64] |= bit;
            } else {
                w[s / 64] &= ~bit;
            }
        }
    }
}

Allocation SpectrumGrid::allocate(const CandidatePath& path, int start_slot, int slot_count, RequestId request) {
    if (!layout_.within_one_band(start_slot, slot_count)) {
        throw std::logic_error("allocation must lie within one band");
    }
    if (active_.contains(request)) {
        throw std::logic_error("request " + std::to_string(request) + " is already allocated");
    }
    if (!range_free(path.links, start_slot, slot_count)) {
        throw std::logic_error("slot range already busy for request " + std::to_string(request));
    }
    assign(path.links, start_slot, slot_count, true);
    active_.insert(request);
    return Allocation{request, path, start_slot, slot_count, layout_.channel_centers(start_slot, slot_count)};
}

void SpectrumGrid::release(const Allocation& a) {
    if (!active_.contains(a.request)) {
        throw std::logic_error("request " + std::to_string(a.request) + " is not allocated");
    }
    for (LinkIndex li : a.path.links) {
        for (int s = a.start_slot; s < a.start_slot + a.slot_count; ++s) {
            if (!is_busy(li, s)) throw std::logic_error("released slot was not busy");
        }
    }
    assign(a.path.links, a.start_slot, a.slot_count, false);
    active_.erase(a.request);
}

std::size_t SpectrumGrid::busy_slot_count() const {
    std::size_t n = 0;
    for (std::uint64_t w : occupancy_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::string SpectrumGrid::hex_dump(const Topology& topology) const {
    std::ostringstream out;
    char buf[17];
    for (LinkIndex li = 0; li < link_count(); ++li) {
        out << topology.link(li).id;
        for (std::uint64_t w : words(li)) {
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
            out << ' ' << buf;
        }
        out << '\n';
    }
    return out.str();
}

int max_frequency(const SpectrumGrid& grid) {
    int best = -1;
    for (LinkIndex li = 0; li < grid.link_count(); ++li) {
        const auto w = grid.words(li);
        for (std::size_t i = w.size(); i-- > 0;) {
            if (w[i] != 0) {
                best = std::max(best, static_cast<int>(i * 64 + 63 - std::countl_zero(w[i])));
                break;
            }
        }
    }
    return best;
}

}  // namespace eon
