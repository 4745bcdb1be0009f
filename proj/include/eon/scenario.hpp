#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "eon/engine.hpp"
#include "eon/pathing.hpp"
#include "eon/qot.hpp"

namespace eon {

/// Physical-layer parameters; defaults are the reference C / C+L system
/// (64 GBaud, 75 GHz channels, 36 dB transceiver SNR, 2 dB aging margin).
struct QotParams {
    double snr_trx_db = 36.0;
    double aging_margin_db = 2.0;
    double launch_power_c_dbm = 0.1;
    double launch_power_cl_dbm = -0.15;
    double noise_figure_c_db = 4.5;
    double noise_figure_l_db = 6.0;
    double attenuation_c_db_per_km = 0.2;
    double attenuation_l_db_per_km = 0.2;
    double reference_span_km = 70.0;
    bool subtract_nli_from_signal = true;
    /// eta(THz) in 1/W^2 per reference span, C band alone lit.
    std::vector<std::pair<double, double>> eta_c = {{191.5, 280.0}, {193.55, 320.0}, {195.6, 280.0}};
    /// eta(THz) with C+L lit; tilted so lower frequencies see more NLI.
    std::vector<std::pair<double, double>> eta_cl = {{184.2, 540.0}, {195.6, 360.0}};
    std::vector<ModulationFormat> formats = default_formats();
};

struct SimParams {
    double mu_ht = 1.0;
    std::size_t request_count = 100000;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.1;
    int replications = 5;
};

struct ScenarioConfig {
    std::filesystem::path topology;
    std::vector<BandScenario> bands{BandScenario::CL};
    std::vector<CatalogMode> catalogs{CatalogMode::Ksp};
    int k = 5;
    std::vector<Policy> policies{kAllPolicies.begin(), kAllPolicies.end()};
    std::vector<double> loads{100.0};
    double symbol_rate_gbaud = 64.0;
    double target_span_km = 70.0;
    GridParams grid;
    QotParams qot;
    SimParams sim;
    /// When set, every cell replays this workload instead of generating one.
    std::optional<std::filesystem::path> replay;
    bool record_timing = true;
    bool check_invariants = false;
    int jobs = 1;

    void validate() const;  // throws ConfigError
};

/// Everything precomputed for one (band scenario, catalog mode) pair.
struct PreparedScenario {
    BandScenario band;
    CatalogMode catalog_mode;
    Topology topology;
    GsnrModel model;
    PathCatalog catalog;
    QotCache qot;
    ConnectionPdf pdf;
    double precompute_s = 0.0;
};

GsnrModel make_gsnr_model(const ScenarioConfig& config, BandScenario band);
TopologyDefaults make_topology_defaults(const ScenarioConfig& config);
Span reference_span(const ScenarioConfig& config);
std::vector<ModulationFormat> mrd_table_for(const ScenarioConfig& config, BandScenario band);

PreparedScenario prepare_scenario(const ScenarioConfig& config, BandScenario band, CatalogMode mode);

struct ReportRow {
    BandScenario band = BandScenario::CL;
    CatalogMode catalog = CatalogMode::Ksp;
    Policy policy = Policy::MinMaxF;
    double offered_load = 0.0;
    double bbp_mean = 0.0;
    double bbp_ci95 = 0.0;
    double bbp_request_mean = 0.0;
    double avg_gsnr_db = 0.0;
    double accepted_gbps = 0.0;
    double blocked_gbps = 0.0;
    double wall_clock_s = 0.0;
    double precompute_s = 0.0;
    double mean_paths_per_connection = 0.0;
    std::array<std::int64_t, 4> blocked_by_reason{};
    std::vector<ReplicationResult> replications;
};

struct SimReport {
    std::vector<ReportRow> rows;
    /// True when cells ran concurrently, so wall-clock columns are indicative.
    bool parallel_timing = false;
};

/// Student-t 95% half-width of the sample mean; 0 for fewer than two samples.
double student_t_half_width(std::span<const double> samples);

/// Every (band, catalog, policy, load) cell, replications seeded seed + r.
SimReport run_scenario(const ScenarioConfig& config);

/// Aggregates per-replication results of one cell into a row.
ReportRow summarize(BandScenario band, CatalogMode catalog, Policy policy, double load,
                    std::vector<ReplicationResult> reps);

}  // namespace eon
