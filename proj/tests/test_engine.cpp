#include <cmath>
#include <random>

#include "doctest.h"
#include "eon/config.hpp"
#include "eon/engine.hpp"
#include "eon/report.hpp"
#include "golden.hpp"
#include "support.hpp"

using namespace eon;
using testing_support::shipped_data;

namespace {

/// A single-band scenario assembled by hand: topology, catalog, cache.
struct Bench {
    Topology topology;
    PathCatalog catalog;
    GsnrModel model;
    QotCache qot;

    Bench(Topology t, int c_channels, CatalogMode mode = CatalogMode::Ksp)
        : topology(std::move(t)),
          catalog(topology, mode, 5),
          model(model_for(c_channels)),
          qot(topology, catalog, model, build_mrd_table(default_formats(), model, Span{70.0, {}}), 64.0) {}

    static GsnrModel model_for(int c_channels) {
        ScenarioConfig cfg = paper_defaults();
        cfg.grid.c_channels = c_channels;
        return make_gsnr_model(cfg, BandScenario::C);
    }

    SpectrumGrid empty_grid() const { return SpectrumGrid(topology.link_count(), qot.layout()); }
};

Topology triangle() { return load_topology(shipped_data("topologies/triangle.json")); }

Request make_request(RequestId id, NodeIndex a, NodeIndex b, int gbps, double at, double hold) {
    return Request{id, Connection{a, b}, gbps, at, hold};
}

CandidateEvaluation feasible(std::size_t index, int max_f, int max_hop, double gsnr) {
    CandidateEvaluation e;
    e.path_index = index;
    e.max_f = max_f;
    e.max_hop = max_hop;
    e.min_gsnr_db = gsnr;
    e.format = 0;
    e.start_slot = 0;
    e.slot_count = 6;
    return e;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("empty network: first candidate starts at slot 0") {
    Bench b(triangle(), 53);
    const SpectrumGrid grid = b.empty_grid();
    const Request r = make_request(0, 0, 2, 600, 1.0, 1.0);
    const auto evals = evaluate_candidates(r, b.catalog.paths(0, 2), grid, b.qot);
    REQUIRE(!evals.empty());
    CHECK(evals[0].feasible());
    CHECK(evals[0].start_slot == 0);
    CHECK(evals[0].max_f == evals[0].slot_count - 1);
    CHECK(evals[0].max_hop == b.catalog.paths(0, 2)[0].hop_count);
}

TEST_CASE("path beyond every reach: all candidates fail on format") {
    Bench b(parse_topology(R"({"nodes":[{"id":"A"},{"id":"B"}],
        "links":[{"id":1,"a":"A","b":"B","length_km":12000}]})"),
            53);
    const auto evals =
        evaluate_candidates(make_request(0, 0, 1, 100, 1.0, 1.0), b.catalog.paths(0, 1), b.empty_grid(), b.qot);
    REQUIRE(evals.size() == 1);
    CHECK(evals[0].reason == BlockReason::NoFormat);
    CHECK(blocking_reason(evals) == BlockReason::NoFormat);
}

TEST_CASE("saturated shortest path: second candidate takes the request") {
    Bench b(triangle(), 2);
    SpectrumGrid grid = b.empty_grid();
    // Fill link A-B (index 0) completely.
    CandidatePath ab;
    ab.links = {0};
    ab.hop_count = 1;
    grid.allocate(ab, 0, 12, 100);
    const auto evals = evaluate_candidates(make_request(0, 0, 1, 200, 1.0, 1.0), b.catalog.paths(0, 1), grid, b.qot);
    REQUIRE(evals.size() == 2);
    CHECK(evals[0].reason == BlockReason::NoSpectrum);
    CHECK(evals[1].feasible());
    CHECK(evals[1].start_slot == 0);
    const auto best = select_best(evals, Policy::MinMaxF);
    REQUIRE(best.has_value());
    CHECK(best->path_index == 1);
}

TEST_CASE("multi-channel requests take a contiguous block and check every channel") {
    // 1300 km needs 8QAM or lower; 600 Gb/s at 300 Gb/s per channel is two channels.
    Bench b(parse_topology(R"({"nodes":[{"id":"A"},{"id":"B"}],
        "links":[{"id":1,"a":"A","b":"B","length_km":1300}]})"),
            53);
    const auto evals =
        evaluate_candidates(make_request(0, 0, 1, 600, 1.0, 1.0), b.catalog.paths(0, 1), b.empty_grid(), b.qot);
    REQUIRE(evals.size() == 1);
    REQUIRE(evals[0].feasible());
    const auto& mf = b.qot.mrd_table()[*evals[0].format];
    CHECK(evals[0].slot_count == required_slots(600, mf.rate_gbps, 64.0));
    const auto& g = b.qot.entry({0, 1})[0].channel_gsnr_db;
    double expected_min = g[0];
    for (int s = 6; s < evals[0].slot_count; s += 6) expected_min = std::min(expected_min, g[static_cast<std::size_t>(s)]);
    CHECK(evals[0].min_gsnr_db == expected_min);
}

TEST_CASE("select_best rules") {
    const std::vector<CandidateEvaluation> by_f{feasible(0, 17, 1, 10), feasible(1, 5, 3, 10), feasible(2, 11, 2, 10)};
    CHECK(select_best(by_f, Policy::MinMaxF)->path_index == 1);
    CHECK(select_best(by_f, Policy::MinMaxHop)->path_index == 0);

    const std::vector<CandidateEvaluation> tie{feasible(0, 5, 2, 14.2), feasible(1, 5, 2, 14.2)};
    CHECK(select_best(tie, Policy::MaxMinGsnr)->path_index == 0);
    CHECK(select_best(tie, Policy::MinMaxF)->path_index == 0);
    CHECK(select_best(tie, Policy::MinMaxHop)->path_index == 0);

    const std::vector<CandidateEvaluation> gsnr{feasible(0, 5, 2, 14.2), feasible(1, 11, 3, 15.0)};
    CHECK(select_best(gsnr, Policy::MaxMinGsnr)->path_index == 1);

    std::vector<CandidateEvaluation> none(2);
    none[0].reason = BlockReason::NoSpectrum;
    none[1].reason = BlockReason::NoFormat;
    CHECK(!select_best(none, Policy::MinMaxF).has_value());
    CHECK(blocking_reason(none) == BlockReason::NoSpectrum);
}

TEST_CASE("golden triangle replay matches the hand trace") {
    const auto expected = golden::load_expected();
    REQUIRE(expected.size() == 11);
    const auto r = golden::run();
    CHECK(golden::mismatches(r, expected) == 0);
    CHECK(r.result.offered_gbps == 3200);
    CHECK(r.result.blocked_gbps == 700);
    CHECK(r.result.bbp() == 0.21875);
    CHECK(r.report_bbp == 0.21875);
    CHECK(r.result.request_bbp() == doctest::Approx(2.0 / 11.0));
}

TEST_CASE("single link, two overlapping one-channel requests") {
    Bench b(parse_topology(R"({"nodes":[{"id":"A"},{"id":"B"}],
        "links":[{"id":1,"a":"A","b":"B","length_km":70}]})"),
            1);
    const std::vector<Request> reqs{make_request(0, 0, 1, 300, 1.0, 5.0), make_request(1, 0, 1, 200, 2.0, 5.0)};
    const auto res = simulate(b.topology, b.catalog, b.qot, Policy::MinMaxF, reqs);
    CHECK(res.accepted_requests == 1);
    CHECK(res.blocked_requests == 1);
    CHECK(res.bbp() == doctest::Approx(200.0 / 500.0));
    CHECK(res.blocked_by_reason[static_cast<std::size_t>(BlockReason::NoSpectrum)] == 1);
}

TEST_CASE("a request arriving exactly at a departure reuses the freed slots") {
    Bench b(parse_topology(R"({"nodes":[{"id":"A"},{"id":"B"}],
        "links":[{"id":1,"a":"A","b":"B","length_km":70}]})"),
            1);
    const std::vector<Request> reqs{make_request(0, 0, 1, 300, 1.0, 1.0), make_request(1, 0, 1, 200, 2.0, 5.0)};
    CHECK(simulate(b.topology, b.catalog, b.qot, Policy::MinMaxF, reqs).bbp() == 0.0);
}

TEST_CASE("vanishing load on the reference topology blocks nothing") {
    ScenarioConfig cfg = paper_defaults();
    for (BandScenario band : {BandScenario::C, BandScenario::CL}) {
        const auto prep = prepare_scenario(cfg, band, CatalogMode::Ksp);
        const auto reqs = generate_workload(WorkloadSpec{0.001, 1.0, 2000, 3}, prep.pdf);
        for (Policy p : kAllPolicies) {
            CHECK(simulate(prep.topology, prep.catalog, prep.qot, p, reqs).bbp() == 0.0);
        }
    }
}

TEST_CASE("conservation, warm-up and occupancy invariants under heavy load") {
    ScenarioConfig cfg = paper_defaults();
    const auto prep = prepare_scenario(cfg, BandScenario::C, CatalogMode::Kdsp);
    const auto reqs = generate_workload(WorkloadSpec{400.0, 1.0, 20000, 11}, prep.pdf);
    SimulationOptions opts;
    opts.warmup_requests = 2000;
    opts.check_invariants = true;
    for (Policy p : kAllPolicies) {
        const auto res = simulate(prep.topology, prep.catalog, prep.qot, p, reqs, opts);
        CHECK(res.offered_requests == 18000);
        CHECK(res.accepted_gbps + res.blocked_gbps == res.offered_gbps);
        CHECK(res.accepted_requests + res.blocked_requests == res.offered_requests);
        CHECK(res.blocked_by_reason[1] + res.blocked_by_reason[2] + res.blocked_by_reason[3] == res.blocked_requests);
        CHECK(res.bbp() > 0.0);
        CHECK(res.bbp() < 1.0);
    }
}

TEST_CASE("policies agree on every request until their first divergent acceptance") {
    ScenarioConfig cfg = paper_defaults();
    const auto prep = prepare_scenario(cfg, BandScenario::C, CatalogMode::Ksp);
    const auto reqs = generate_workload(WorkloadSpec{200.0, 1.0, 5000, 4}, prep.pdf);
    std::vector<std::vector<RequestOutcome>> traces(3);
    for (std::size_t i = 0; i < 3; ++i) {
        SimulationOptions o;
        o.trace = &traces[i];
        simulate(prep.topology, prep.catalog, prep.qot, kAllPolicies[i], reqs, o);
    }
    for (std::size_t other = 1; other < 3; ++other) {
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            const auto& x = traces[0][k];
            const auto& y = traces[other][k];
            // Same grid state so far, hence the same feasible set and the same accept/block verdict.
            REQUIRE(x.accepted == y.accepted);
            if (x.accepted && (x.path_index != y.path_index || x.start_slot != y.start_slot)) break;
        }
    }
}

TEST_CASE("cached channel GSNR equals direct path evaluation") {
    ScenarioConfig cfg = paper_defaults();
    for (BandScenario band : {BandScenario::C, BandScenario::CL}) {
        const auto prep = prepare_scenario(cfg, band, CatalogMode::Ksp);
        const SlotLayout& layout = prep.qot.layout();
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 300; ++trial) {
            const auto& pair = prep.pdf.pairs[rng() % prep.pdf.size()];
            const auto& paths = prep.catalog.paths(pair.a, pair.b);
            const std::size_t pi = rng() % paths.size();
            const int channel = static_cast<int>(rng() % static_cast<std::uint64_t>(layout.total_slots() / 6));
            const int s = channel * 6;
            const double direct = path_gsnr(prep.topology, paths[pi], layout.channel_center_thz(s), prep.model,
                                            prep.model.plan.channel_bandwidth_ghz);
            const double cached = prep.qot.entry(pair)[pi].channel_gsnr_db[static_cast<std::size_t>(s)];
            CHECK(std::abs(cached - direct) / std::abs(direct) < 1e-12);
        }
    }
}

TEST_CASE("Student-t half-width") {
    const std::vector<double> xs{1, 2, 3, 4, 5};
    // t(0.975, 4) = 2.7764451051977987; s = sqrt(2.5).
    CHECK(student_t_half_width(xs) == doctest::Approx(2.7764451051977987 * std::sqrt(2.5) / std::sqrt(5.0)).epsilon(1e-12));
    CHECK(student_t_half_width(std::vector<double>{0.3}) == 0.0);
    CHECK(student_t_half_width(std::vector<double>{0.2, 0.2, 0.2}) == 0.0);
}

TEST_CASE("run_scenario: cell layout, determinism and report invariants") {
    ScenarioConfig cfg = paper_defaults();
    cfg.bands = {BandScenario::C, BandScenario::CL};
    cfg.catalogs = {CatalogMode::Ksp, CatalogMode::Kdsp};
    cfg.loads = {150.0, 300.0};
    cfg.sim.request_count = 3000;
    cfg.sim.replications = 3;
    cfg.record_timing = false;
    const SimReport a = run_scenario(cfg);
    CHECK(a.rows.size() == 2 * 2 * 3 * 2);
    for (const auto& row : a.rows) {
        CHECK(row.replications.size() == 3);
        CHECK(row.bbp_ci95 >= 0.0);
        CHECK(row.bbp_mean >= 0.0);
        CHECK(row.bbp_mean <= 1.0);
        for (const auto& rep : row.replications) CHECK(rep.accepted_gbps + rep.blocked_gbps == rep.offered_gbps);
        CHECK(row.replications[1].seed == row.replications[0].seed + 1);
    }
    CHECK(report_csv(a) == report_csv(run_scenario(cfg)));

    cfg.jobs = 3;
    const SimReport parallel = run_scenario(cfg);
    CHECK(parallel.parallel_timing);
    CHECK(report_csv(parallel) == report_csv(a));

    const std::string csv = report_csv(a);
    CHECK(csv.rfind(std::string(kReportCsvHeader) + "\n", 0) == 0);
}

}  // TEST_SUITE
