#include "eon/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

#include "eon/error.hpp"

namespace eon {

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (topology.empty()) fail("run.topology must be set");
    if (bands.empty()) fail("run.bands must not be empty");
    if (catalogs.empty()) fail("run.catalogs must not be empty");
    if (k < 1) fail("run.k must be at least 1");
    if (policies.empty()) fail("run.policies must not be empty");
    if (loads.empty()) fail("run.loads must not be empty");
    for (double l : loads) {
        if (!(l > 0.0) || !std::isfinite(l)) fail("run.loads must be positive");
    }
    if (!(symbol_rate_gbaud > 0.0)) fail("grid.symbol_rate_gbaud must be positive");
    if (!(target_span_km > 0.0)) fail("grid.target_span_km must be positive");
    if (grid.c_channels <= 0 || grid.l_channels <= 0) fail("grid channel counts must be positive");
    if (!(sim.mu_ht > 0.0)) fail("traffic.mu_ht must be positive");
    if (sim.request_count == 0) fail("traffic.request_count must be positive");
    if (sim.warmup_fraction < 0.0 || sim.warmup_fraction >= 1.0) fail("traffic.warmup_fraction must be in [0, 1)");
    if (sim.replications < 1) fail("run.replications must be at least 1");
    if (jobs < 1) fail("run.jobs must be at least 1");
    if (!std::isfinite(qot.snr_trx_db)) fail("qot.snr_trx_db must be finite");
    if (qot.aging_margin_db < 0.0) fail("qot.aging_margin_db must be nonnegative");
    if (qot.formats.empty()) fail("qot formats must not be empty");
    for (std::size_t i = 1; i < qot.formats.size(); ++i) {
        const auto& a = qot.formats[i - 1];
        const auto& b = qot.formats[i];
        if (!(b.m > a.m && b.rate_gbps > a.rate_gbps && b.threshold_db > a.threshold_db)) {
            fail("qot formats must have strictly increasing m, rate and threshold");
        }
    }
}

TopologyDefaults make_topology_defaults(const ScenarioConfig& config) {
    TopologyDefaults d;
    d.target_span_km = config.target_span_km;
    d.fiber[Band::C] = {config.qot.attenuation_c_db_per_km, config.qot.noise_figure_c_db};
    d.fiber[Band::L] = {config.qot.attenuation_l_db_per_km, config.qot.noise_figure_l_db};
    return d;
}

Span reference_span(const ScenarioConfig& config) {
    return Span{config.qot.reference_span_km, make_topology_defaults(config).fiber};
}

GsnrModel make_gsnr_model(const ScenarioConfig& config, BandScenario band) {
    GsnrModel m;
    m.plan = make_band_plan(band, config.grid);
    m.launch_power_dbm = band == BandScenario::C ? config.qot.launch_power_c_dbm : config.qot.launch_power_cl_dbm;
    m.snr_trx_db = config.qot.snr_trx_db;
    m.aging_margin_db = config.qot.aging_margin_db;
    m.reference_span_km = config.qot.reference_span_km;
    m.subtract_nli_from_signal = config.qot.subtract_nli_from_signal;
    m.nli = NliTable(band == BandScenario::C ? config.qot.eta_c : config.qot.eta_cl);
    m.validate();
    return m;
}

std::vector<ModulationFormat> mrd_table_for(const ScenarioConfig& config, BandScenario band) {
    return build_mrd_table(config.qot.formats, make_gsnr_model(config, band), reference_span(config));
}

PreparedScenario prepare_scenario(const ScenarioConfig& config, BandScenario band, CatalogMode mode) {
    const auto t0 = std::chrono::steady_clock::now();
    Topology topology = load_topology(config.topology, make_topology_defaults(config));
    GsnrModel model = make_gsnr_model(config, band);
    auto table = build_mrd_table(config.qot.formats, model, reference_span(config));
    PathCatalog catalog(topology, mode, config.k);
    QotCache qot(topology, catalog, model, std::move(table), config.symbol_rate_gbaud);
    ConnectionPdf pdf = connection_pdf(topology);
    const auto t1 = std::chrono::steady_clock::now();
    return PreparedScenario{band,
                            mode,
                            std::move(topology),
                            std::move(model),
                            std::move(catalog),
                            std::move(qot),
                            std::move(pdf),
                            std::chrono::duration<double>(t1 - t0).count()};
}

double student_t_half_width(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    // Identical samples have no spread; avoid a rounding residue from the mean.
    if (std::adjacent_find(samples.begin(), samples.end(), std::not_equal_to<>()) == samples.end()) return 0.0;
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    return t * sd / std::sqrt(static_cast<double>(n));
}

ReportRow summarize(BandScenario band, CatalogMode catalog, Policy policy, double load,
                    std::vector<ReplicationResult> reps) {
    ReportRow row;
    row.band = band;
    row.catalog = catalog;
    row.policy = policy;
    row.offered_load = load;
    const auto n = static_cast<double>(reps.size());
    std::vector<double> bbps;
    std::size_t gsnr_reps = 0;
    for (const auto& r : reps) {
        bbps.push_back(r.bbp());
        row.bbp_mean += r.bbp() / n;
        row.bbp_request_mean += r.request_bbp() / n;
        row.accepted_gbps += static_cast<double>(r.accepted_gbps) / n;
        row.blocked_gbps += static_cast<double>(r.blocked_gbps) / n;
        row.wall_clock_s += r.wall_clock_s / n;
        if (r.accepted_requests > 0) {
            row.avg_gsnr_db += r.avg_gsnr_db();
            ++gsnr_reps;
        }
        for (std::size_t i = 0; i < row.blocked_by_reason.size(); ++i) {
            row.blocked_by_reason[i] += r.blocked_by_reason[i];
        }
    }
    row.avg_gsnr_db = gsnr_reps ? row.avg_gsnr_db / static_cast<double>(gsnr_reps)
                                : std::numeric_limits<double>::quiet_NaN();
    row.bbp_ci95 = student_t_half_width(bbps);
    row.replications = std::move(reps);
    return row;
}

namespace {

struct CellTask {
    std::size_t load_index;
    int replica;
};

double replay_offered_load(std::span<const Request> requests) {
    if (requests.size() < 2) return 0.0;
    const double span = requests.back().arrival_time - requests.front().arrival_time;
    double hold = 0.0;
    for (const auto& r : requests) hold += r.holding_time;
    hold /= static_cast<double>(requests.size());
    return span > 0.0 ? static_cast<double>(requests.size() - 1) / span * hold : 0.0;
}

}  // namespace

SimReport run_scenario(const ScenarioConfig& config) {
    config.validate();
    SimReport report;
    report.parallel_timing = config.jobs > 1;

    for (BandScenario band : config.bands) {
        for (CatalogMode mode : config.catalogs) {
            const PreparedScenario prep = prepare_scenario(config, band, mode);

            std::vector<Request> replay;
            std::vector<double> loads = config.loads;
            int replications = config.sim.replications;
            if (config.replay) {
                replay = load_workload_csv(prep.topology, *config.replay);
                loads = {replay_offered_load(replay)};
                replications = 1;
            }
            const std::size_t n_policies = config.policies.size();

            // results[load][policy][replica]
            std::vector<std::vector<std::vector<ReplicationResult>>> results(
                loads.size(), std::vector<std::vector<ReplicationResult>>(
                                  n_policies, std::vector<ReplicationResult>(static_cast<std::size_t>(replications))));

            std::vector<CellTask> tasks;
            for (std::size_t li = 0; li < loads.size(); ++li) {
                for (int r = 0; r < replications; ++r) tasks.push_back({li, r});
            }

            auto run_task = [&](const CellTask& t) {
                const std::uint64_t seed = config.sim.seed + static_cast<std::uint64_t>(t.replica);
                std::vector<Request> generated;
                std::span<const Request> requests;
                if (config.replay) {
                    requests = replay;
                } else {
                    WorkloadSpec spec{loads[t.load_index] * config.sim.mu_ht, config.sim.mu_ht,
                                      config.sim.request_count, seed};
                    generated = generate_workload(spec, prep.pdf);
                    requests = generated;
                }
                SimulationOptions opts;
                opts.warmup_requests =
                    static_cast<std::size_t>(std::floor(config.sim.warmup_fraction * static_cast<double>(requests.size())));
                opts.check_invariants = config.check_invariants;
                for (std::size_t p = 0; p < n_policies; ++p) {
                    ReplicationResult res =
                        simulate(prep.topology, prep.catalog, prep.qot, config.policies[p], requests, opts);
                    res.seed = config.replay ? 0 : seed;
                    if (!config.record_timing) res.wall_clock_s = 0.0;
                    results[t.load_index][p][static_cast<std::size_t>(t.replica)] = res;
                }
            };

            if (config.jobs <= 1 || tasks.size() <= 1) {
                for (const auto& t : tasks) run_task(t);
            } else {
                std::atomic<std::size_t> next{0};
                std::exception_ptr failure;
                std::mutex failure_mutex;
                std::vector<std::jthread> workers;
                const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), tasks.size());
                for (std::size_t w = 0; w < n_workers; ++w) {
                    workers.emplace_back([&] {
                        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
                            try {
                                run_task(tasks[i]);
                            } catch (...) {
                                std::lock_guard lock(failure_mutex);
                                if (!failure) failure = std::current_exception();
                            }
                        }
                    });
                }
                workers.clear();
                if (failure) std::rethrow_exception(failure);
            }

            for (std::size_t p = 0; p < n_policies; ++p) {
                for (std::size_t li = 0; li < loads.size(); ++li) {
                    ReportRow row = summarize(band, mode, config.policies[p], loads[li], std::move(results[li][p]));
                    row.precompute_s = config.record_timing ? prep.precompute_s : 0.0;
                    row.mean_paths_per_connection = prep.catalog.mean_paths_per_connection();
                    report.rows.push_back(std::move(row));
                }
            }
        }
    }
    return report;
}

}  // namespace eon
