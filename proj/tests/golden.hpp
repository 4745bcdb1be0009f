#pragma once

// Golden triangle replay shared by the unit suite and the acceptance binary.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eon/config.hpp"
#include "eon/scenario.hpp"
#include "support.hpp"

namespace golden {

struct ExpectedOutcome {
    eon::RequestId id;
    bool accepted;
    std::vector<int> link_ids;
    int start_slot;
    int slot_count;
    std::string reason;
};

inline std::vector<ExpectedOutcome> load_expected() {
    std::ifstream in(testing_support::test_data("golden_triangle_expected.csv"));
    std::vector<ExpectedOutcome> out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        ExpectedOutcome e{std::stoull(cells[0]), cells[1] == "1", {}, std::stoi(cells[3]), std::stoi(cells[4]),
                          cells[5]};
        std::stringstream ls(cells[2]);
        for (std::string id; std::getline(ls, id, '-');) e.link_ids.push_back(std::stoi(id));
        out.push_back(e);
    }
    return out;
}

struct Replay {
    std::vector<eon::RequestOutcome> trace;
    std::vector<std::vector<int>> chosen_links;  // empty when blocked
    eon::ReplicationResult result;
    double report_bbp = -1.0;
};

inline Replay run() {
    const auto config = eon::load_config(testing_support::test_data("golden_triangle.toml").string());
    const auto prep = eon::prepare_scenario(config, config.bands.front(), config.catalogs.front());
    const auto requests = eon::load_workload_csv(prep.topology, *config.replay);
    Replay r;
    eon::SimulationOptions opts;
    opts.trace = &r.trace;
    opts.check_invariants = true;
    r.result = eon::simulate(prep.topology, prep.catalog, prep.qot, config.policies.front(), requests, opts);
    for (const auto& o : r.trace) {
        const auto c = requests[o.id].connection;
        r.chosen_links.push_back(o.accepted ? testing_support::link_ids(
                                                  prep.topology, prep.catalog.paths(c.a, c.b)[o.path_index].links)
                                            : std::vector<int>{});
    }
    const auto report = eon::run_scenario(config);
    if (report.rows.size() == 1) r.report_bbp = report.rows.front().bbp_mean;
    return r;
}

/// Number of outcomes that differ from the hand trace (0 on a match).
inline int mismatches(const Replay& r, const std::vector<ExpectedOutcome>& expected) {
    if (r.trace.size() != expected.size()) return static_cast<int>(std::max(r.trace.size(), expected.size()));
    int bad = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& o = r.trace[i];
        const auto& e = expected[i];
        const bool same = o.id == e.id && o.accepted == e.accepted && r.chosen_links[i] == e.link_ids &&
                          o.start_slot == e.start_slot && o.slot_count == e.slot_count &&
                          eon::block_reason_name(o.reason) == e.reason;
        bad += same ? 0 : 1;
    }
    return bad;
}

}  // namespace golden
