#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eon/pathing.hpp"
#include "eon/qot.hpp"
#include "eon/spectrum.hpp"
#include "eon/traffic.hpp"

namespace eon {

enum class Policy { MinMaxF, MinMaxHop, MaxMinGsnr };

inline constexpr std::array<Policy, 3> kAllPolicies{Policy::MinMaxF, Policy::MinMaxHop, Policy::MaxMinGsnr};

std::string_view policy_name(Policy p);  // min_max_f, min_max_hop, max_min_gsnr
Policy parse_policy(std::string_view text);

enum class BlockReason : std::uint8_t { None = 0, NoFormat = 1, NoSpectrum = 2, BelowThreshold = 3 };

std::string_view block_reason_name(BlockReason r);

/// Full-load GSNR and format choice per candidate path, computed once per
/// scenario. GSNR does not depend on occupancy because unused channels are
/// assumed ASE-loaded.
struct PathQot {
    std::optional<std::size_t> format;  // index into the MRD table
    /// GSNR (dB) of a channel whose first slot is the index; NaN where a
    /// channel starting there would leave its band.
    std::vector<double> channel_gsnr_db;
};

class QotCache {
public:
    QotCache(const Topology& topology, const PathCatalog& catalog, const GsnrModel& model,
             std::vector<ModulationFormat> mrd_table, double symbol_rate_gbaud);

    std::span<const PathQot> entry(Connection c) const;
    const std::vector<ModulationFormat>& mrd_table() const { return mrd_table_; }
    const SlotLayout& layout() const { return layout_; }
    double symbol_rate_gbaud() const { return symbol_rate_gbaud_; }

private:
    std::size_t node_count_;
    std::vector<ModulationFormat> mrd_table_;
    SlotLayout layout_;
    double symbol_rate_gbaud_;
    std::vector<std::vector<PathQot>> entries_;
};

struct CandidateEvaluation {
    std::size_t path_index = 0;
    BlockReason reason = BlockReason::None;  // None means feasible
    std::optional<std::size_t> format;
    int slot_count = 0;
    int start_slot = -1;
    int max_f = -1;
    int max_hop = 0;
    double min_gsnr_db = 0.0;

    bool feasible() const { return reason == BlockReason::None; }
};

/// RMSA steps 5-7 for every candidate of the request's connection, in catalog
/// order. Infeasibility is reported in `reason`; the grid is not modified.
std::vector<CandidateEvaluation> evaluate_candidates(const Request& request, std::span<const CandidatePath> paths,
                                                     const SpectrumGrid& grid, const QotCache& qot);

/// Step 8. Ties go to the earlier catalog candidate.
std::optional<CandidateEvaluation> select_best(std::span<const CandidateEvaluation> evaluations, Policy policy);

/// Reason recorded for a blocked request: the furthest stage any candidate
/// reached (spectrum, then threshold, then format).
BlockReason blocking_reason(std::span<const CandidateEvaluation> evaluations);

struct RequestOutcome {
    RequestId id = 0;
    bool accepted = false;
    BlockReason reason = BlockReason::None;
    std::size_t path_index = 0;
    int start_slot = -1;
    int slot_count = 0;
};

struct ReplicationResult {
    std::uint64_t seed = 0;
    std::int64_t offered_requests = 0;
    std::int64_t accepted_requests = 0;
    std::int64_t blocked_requests = 0;
    std::int64_t offered_gbps = 0;
    std::int64_t accepted_gbps = 0;
    std::int64_t blocked_gbps = 0;
    std::array<std::int64_t, 4> blocked_by_reason{};
    double gsnr_sum_db = 0.0;
    double wall_clock_s = 0.0;

    double bbp() const;
    double request_bbp() const;
    double avg_gsnr_db() const;
};

struct SimulationOptions {
    /// Requests with index below this are processed but not counted.
    std::size_t warmup_requests = 0;
    /// Cross-check grid occupancy against live allocations every 1000 events.
    bool check_invariants = false;
    std::vector<RequestOutcome>* trace = nullptr;
};

/// One replication of the event loop over a fixed request stream. Requests
/// must be in arrival order. Departures at the same instant as an arrival
/// are processed first; simultaneous departures go in id order.
ReplicationResult simulate(const Topology& topology, const PathCatalog& catalog, const QotCache& qot,
                           Policy policy, std::span<const Request> requests, const SimulationOptions& options = {});

}  // namespace eon
