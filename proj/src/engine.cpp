#include "eon/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "eon/error.hpp"

namespace eon {

std::string_view policy_name(Policy p) {
    switch (p) {
        case Policy::MinMaxF: return "min_max_f";
        case Policy::MinMaxHop: return "min_max_hop";
        case Policy::MaxMinGsnr: return "max_min_gsnr";
    }
    return "?";
}

Policy parse_policy(std::string_view text) {
    if (text == "min_max_f" || text == "MinMaxF") return Policy::MinMaxF;
    if (text == "min_max_hop" || text == "MinMaxHop") return Policy::MinMaxHop;
    if (text == "max_min_gsnr" || text == "MaxMinGSNR") return Policy::MaxMinGsnr;
    throw ConfigError("unknown policy '" + std::string(text) + "'");
}

std::string_view block_reason_name(BlockReason r) {
    switch (r) {
        case BlockReason::None: return "none";
        case BlockReason::NoFormat: return "no_mfl";
        case BlockReason::NoSpectrum: return "no_spectrum";
        case BlockReason::BelowThreshold: return "threshold";
    }
    return "?";
}

QotCache::QotCache(const Topology& topology, const PathCatalog& catalog, const GsnrModel& model,
                   std::vector<ModulationFormat> mrd_table, double symbol_rate_gbaud)
    : node_count_(topology.node_count()),
      mrd_table_(std::move(mrd_table)),
      layout_(model.plan),
      symbol_rate_gbaud_(symbol_rate_gbaud) {
    const int total = layout_.total_slots();
    const int spc = layout_.slots_per_channel();
    const double bw = model.plan.channel_bandwidth_ghz;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    // Per-link inverse span sums by channel start; a path sums its links.
    std::vector<std::vector<double>> link_inverse(topology.link_count(), std::vector<double>(total, nan));
    for (LinkIndex li = 0; li < topology.link_count(); ++li) {
        for (int s = 0; s < total; ++s) {
            if (!layout_.within_one_band(s, spc)) continue;
            const double f = layout_.channel_center_thz(s);
            double inv = 0.0;
            for (const Span& span : topology.link(li).spans) inv += 1.0 / span_snr_term(span, f, model, bw);
            link_inverse[li][s] = inv;
        }
    }
    const double trx_inverse = 1.0 / db_to_linear(model.snr_trx_db);

    entries_.reserve(catalog.entries().size());
    for (const auto& paths : catalog.entries()) {
        std::vector<PathQot> qots;
        for (const auto& path : paths) {
            PathQot q;
            for (std::size_t i = mrd_table_.size(); i-- > 0;) {
                if (mrd_table_[i].mrd_km >= path.length_km) {
                    q.format = i;
                    break;
                }
            }
            q.channel_gsnr_db.assign(total, nan);
            for (int s = 0; s < total; ++s) {
                if (!layout_.within_one_band(s, spc)) continue;
                double inv = 0.0;
                for (LinkIndex li : path.links) inv += link_inverse[li][s];
                q.channel_gsnr_db[s] = -linear_to_db(inv + trx_inverse) - model.aging_margin_db;
            }
            qots.push_back(std::move(q));
        }
        entries_.push_back(std::move(qots));
    }
}

std::span<const PathQot> QotCache::entry(Connection c) const {
    return entries_.at(connection_index(c.a, c.b, node_count_));
}

std::vector<CandidateEvaluation> evaluate_candidates(const Request& request, std::span<const CandidatePath> paths,
                                                     const SpectrumGrid& grid, const QotCache& qot) {
    const auto qots = qot.entry(request.connection);
    const auto& table = qot.mrd_table();
    const int spc = qot.layout().slots_per_channel();

    std::vector<CandidateEvaluation> out;
    out.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        CandidateEvaluation ev;
        ev.path_index = i;
        const PathQot& q = qots[i];
        if (!q.format) {
            ev.reason = BlockReason::NoFormat;
            out.push_back(ev);
            continue;
        }
        const ModulationFormat& mf = table[*q.format];
        const int count = required_slots(request.throughput_gbps, mf.rate_gbps, qot.symbol_rate_gbaud());
        const auto start = grid.first_fit(paths[i], count);
        if (!start) {
            ev.reason = BlockReason::NoSpectrum;
            out.push_back(ev);
            continue;
        }
        double min_gsnr = std::numeric_limits<double>::infinity();
        for (int s = *start; s + spc <= *start + count; s += spc) {
            min_gsnr = std::min(min_gsnr, q.channel_gsnr_db[s]);
        }
        if (!(min_gsnr >= mf.threshold_db)) {
            ev.reason = BlockReason::BelowThreshold;
            out.push_back(ev);
            continue;
        }
        ev.format = q.format;
        ev.slot_count = count;
        ev.start_slot = *start;
        ev.max_f = max_frequency_slot(*start, count);
        ev.max_hop = paths[i].hop_count;
        ev.min_gsnr_db = min_gsnr;
        out.push_back(ev);
    }
    return out;
}

std::optional<CandidateEvaluation> select_best(std::span<const CandidateEvaluation> evaluations, Policy policy) {
    const CandidateEvaluation* best = nullptr;
    for (const auto& ev : evaluations) {
        if (!ev.feasible()) continue;
        if (best == nullptr) {
            best = &ev;
            continue;
        }
        bool better = false;
        switch (policy) {
            case Policy::MinMaxF: better = ev.max_f < best->max_f; break;
            case Policy::MinMaxHop: better = ev.max_hop < best->max_hop; break;
            case Policy::MaxMinGsnr: better = ev.min_gsnr_db > best->min_gsnr_db; break;
        }
        if (better) best = &ev;
    }
    if (best == nullptr) return std::nullopt;
    return *best;
}

BlockReason blocking_reason(std::span<const CandidateEvaluation> evaluations) {
    BlockReason r = BlockReason::NoFormat;
    for (const auto& ev : evaluations) {
        if (ev.reason == BlockReason::NoSpectrum) return BlockReason::NoSpectrum;
        if (ev.reason == BlockReason::BelowThreshold) r = BlockReason::BelowThreshold;
    }
    return r;
}

double ReplicationResult::bbp() const {
    return offered_gbps == 0 ? 0.0 : static_cast<double>(blocked_gbps) / static_cast<double>(offered_gbps);
}

double ReplicationResult::request_bbp() const {
    return offered_requests == 0 ? 0.0
                                 : static_cast<double>(blocked_requests) / static_cast<double>(offered_requests);
}

double ReplicationResult::avg_gsnr_db() const {
    return accepted_requests == 0 ? std::numeric_limits<double>::quiet_NaN()
                                  : gsnr_sum_db / static_cast<double>(accepted_requests);
}

namespace {

struct Departure {
    double time;
    RequestId id;
};

struct DepartureLater {
    bool operator()(const Departure& x, const Departure& y) const {
        if (x.time != y.time) return x.time > y.time;
        return x.id > y.id;
    }
};

}  // namespace

ReplicationResult simulate(const Topology& topology, const PathCatalog& catalog, const QotCache& qot,
                           Policy policy, std::span<const Request> requests, const SimulationOptions& options) {
    SpectrumGrid grid(topology.link_count(), qot.layout());
    std::priority_queue<Departure, std::vector<Departure>, DepartureLater> departures;
    std::unordered_map<RequestId, Allocation> live;
    std::size_t live_link_slots = 0;
    std::size_t events = 0;

    auto check = [&] {
        if (options.check_invariants && ++events % 1000 == 0 && grid.busy_slot_count() != live_link_slots) {
            throw std::logic_error("grid occupancy diverged from live allocations");
        }
    };

    ReplicationResult res;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t idx = 0; idx < requests.size(); ++idx) {
        const Request& r = requests[idx];
        while (!departures.empty() && departures.top().time <= r.arrival_time) {
            auto it = live.find(departures.top().id);
            departures.pop();
            live_link_slots -= static_cast<std::size_t>(it->second.slot_count) * it->second.path.links.size();
            grid.release(it->second);
            live.erase(it);
            check();
        }

        const auto& paths = catalog.paths(r.connection.a, r.connection.b);
        const auto evals = evaluate_candidates(r, paths, grid, qot);
        const auto chosen = select_best(evals, policy);
        const bool counted = idx >= options.warmup_requests;

        RequestOutcome outcome{r.id, chosen.has_value(), BlockReason::None, 0, -1, 0};
        if (chosen) {
            const CandidatePath& path = paths[chosen->path_index];
            Allocation a = grid.allocate(path, chosen->start_slot, chosen->slot_count, r.id);
            live_link_slots += static_cast<std::size_t>(a.slot_count) * path.links.size();
            live.emplace(r.id, std::move(a));
            departures.push({r.arrival_time + r.holding_time, r.id});
            outcome.path_index = chosen->path_index;
            outcome.start_slot = chosen->start_slot;
            outcome.slot_count = chosen->slot_count;
            if (counted) {
                ++res.accepted_requests;
                res.accepted_gbps += r.throughput_gbps;
                res.gsnr_sum_db += chosen->min_gsnr_db;
            }
        } else {
            outcome.reason = blocking_reason(evals);
            if (counted) {
                ++res.blocked_requests;
                res.blocked_gbps += r.throughput_gbps;
                ++res.blocked_by_reason[static_cast<std::size_t>(outcome.reason)];
            }
        }
        if (counted) {
            ++res.offered_requests;
            res.offered_gbps += r.throughput_gbps;
        }
        if (options.trace) options.trace->push_back(outcome);
        check();
    }
    const auto t1 = std::chrono::steady_clock::now();
    res.wall_clock_s = std::chrono::duration<double>(t1 - t0).count();

    if (options.check_invariants && grid.busy_slot_count() != live_link_slots) {
        throw std::logic_error("grid occupancy diverged from live allocations");
    }
    return res;
}

}  // namespace eon
