// eonsim: batch driver for the dynamic C / C+L RMSA simulator.
//
//   eonsim run --config paper_defaults --policies all --loads 400:700:50 --out out/
//   eonsim export-mrd --config paper_defaults --band C --band C+L
//   eonsim catalog --catalog kdsp > catalog.json
//   eonsim workload --load 500 --seed 7 > workload.csv

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eon/config.hpp"
#include "eon/error.hpp"
#include "eon/report.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfigError = 2, kTopologyError = 3, kRuntimeError = 4 };

struct Overrides {
    std::string config = std::string(eon::kPaperDefaultsProfile);
    std::string policies;
    std::string loads;
    std::vector<std::string> bands;
    std::vector<std::string> catalogs;
    std::optional<std::int64_t> seed;
    std::optional<int> replications;
    std::optional<std::int64_t> requests;
    std::optional<int> jobs;
    std::optional<int> k;
    std::string topology;
    std::string replay;
    bool no_timing = false;
    bool check_invariants = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Scenario TOML file or 'paper_defaults'");
    cmd->add_option("--band", o.bands, "Band scenario C or C+L (repeatable)");
    cmd->add_option("--catalog", o.catalogs, "Candidate paths: ksp or kdsp (repeatable)");
    cmd->add_option("--topology", o.topology, "Topology JSON file");
    cmd->add_option("--k", o.k, "Candidate paths per connection");
}

void add_run_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--policies", o.policies, "'all' or comma list of min_max_f,min_max_hop,max_min_gsnr");
    cmd->add_option("--loads", o.loads, "Offered loads as lo:hi:step or a comma list");
    cmd->add_option("--seed", o.seed, "Base seed; replication r uses seed + r");
    cmd->add_option("--replications", o.replications, "Independent replications per cell");
    cmd->add_option("--requests", o.requests, "Requests per replication");
    cmd->add_option("--jobs", o.jobs, "Worker threads (timings become indicative when > 1)");
    cmd->add_option("--replay", o.replay, "Replay a workload CSV instead of generating traffic");
    cmd->add_flag("--no-timing", o.no_timing, "Write zero wall-clock columns (byte-reproducible reports)");
    cmd->add_flag("--check-invariants", o.check_invariants, "Cross-check grid occupancy during the run");
}

eon::ScenarioConfig resolve(const Overrides& o) {
    eon::ScenarioConfig c = eon::load_config(o.config);
    if (!o.policies.empty()) c.policies = eon::parse_policy_list(o.policies);
    if (!o.loads.empty()) c.loads = eon::parse_load_grid(o.loads);
    if (!o.bands.empty()) {
        c.bands.clear();
        for (const auto& b : o.bands) c.bands.push_back(eon::parse_band_scenario(b));
    }
    if (!o.catalogs.empty()) {
        c.catalogs.clear();
        for (const auto& m : o.catalogs) c.catalogs.push_back(eon::parse_catalog_mode(m));
    }
    if (o.seed) {
        if (*o.seed < 0) throw eon::ConfigError("--seed must be nonnegative");
        c.sim.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.replications) c.sim.replications = *o.replications;
    if (o.requests) {
        if (*o.requests <= 0) throw eon::ConfigError("--requests must be positive");
        c.sim.request_count = static_cast<std::size_t>(*o.requests);
    }
    if (o.jobs) c.jobs = *o.jobs;
    if (o.k) c.k = *o.k;
    if (!o.topology.empty()) c.topology = std::filesystem::absolute(o.topology);
    if (!o.replay.empty()) c.replay = std::filesystem::absolute(o.replay);
    if (o.no_timing) c.record_timing = false;
    if (o.check_invariants) c.check_invariants = true;
    c.validate();
    return c;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string band_file_tag(eon::BandScenario b) {
    return b == eon::BandScenario::C ? "c" : "cl";
}

void print_summary(const eon::SimReport& report) {
    std::printf("%-4s %-5s %-13s %10s %12s %10s %10s %10s\n", "band", "cat", "policy", "load", "bbp", "ci95",
                "gsnr_dB", "time_s");
    for (const auto& r : report.rows) {
        std::printf("%-4s %-5s %-13s %10.2f %12.4e %10.2e %10.3f %10.3f\n",
                    std::string(eon::band_scenario_name(r.band)).c_str(),
                    std::string(eon::catalog_mode_name(r.catalog)).c_str(),
                    std::string(eon::policy_name(r.policy)).c_str(), r.offered_load, r.bbp_mean, r.bbp_ci95,
                    r.avg_gsnr_db, r.wall_clock_s);
    }
    if (report.parallel_timing) std::printf("note: cells ran in parallel; wall-clock columns are indicative\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic RMSA simulator for elastic optical networks over the C and C+L bands"};
    app.require_subcommand(1);

    Overrides o;
    std::string out_dir = "out";
    bool export_mrd = false;

    auto* run = app.add_subcommand("run", "Simulate every (band, catalog, policy, load) cell");
    add_common(run, o);
    add_run_options(run, o);
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--export-mrd", export_mrd, "Also write the MRD lookup table per band scenario");

    auto* mrd = app.add_subcommand("export-mrd", "Print the MRD lookup table per band scenario");
    add_common(mrd, o);
    std::string mrd_out;
    mrd->add_option("--out", mrd_out, "Directory for mrd_<band>.csv (stdout if omitted)");

    auto* cat = app.add_subcommand("catalog", "Print the candidate path catalog as JSON");
    add_common(cat, o);

    auto* wl = app.add_subcommand("workload", "Print a generated workload as replayable CSV");
    add_common(wl, o);
    double wl_load = 0.0;
    std::int64_t wl_seed = 1;
    std::int64_t wl_requests = 0;
    wl->add_option("--load", wl_load, "Offered load")->required();
    wl->add_option("--seed", wl_seed, "Seed");
    wl->add_option("--requests", wl_requests, "Request count (default from config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const eon::ScenarioConfig config = resolve(o);

        if (*run) {
            const eon::SimReport report = eon::run_scenario(config);
            std::filesystem::create_directories(out_dir);
            const std::filesystem::path dir(out_dir);
            write_file(dir / "results.csv", eon::report_csv(report));
            write_file(dir / "replications.csv", eon::replications_csv(report));
            write_file(dir / "plot.dat", eon::plot_data(report));
            write_file(dir / "resolved_config.toml", eon::config_to_toml(config));
            if (export_mrd) {
                for (auto b : config.bands) {
                    write_file(dir / ("mrd_" + band_file_tag(b) + ".csv"),
                               eon::mrd_table_csv(eon::mrd_table_for(config, b)));
                }
            }
            print_summary(report);
        } else if (*mrd) {
            for (auto b : config.bands) {
                const std::string csv = eon::mrd_table_csv(eon::mrd_table_for(config, b));
                if (mrd_out.empty()) {
                    std::cout << "# " << eon::band_scenario_name(b) << '\n' << csv;
                } else {
                    std::filesystem::create_directories(mrd_out);
                    write_file(std::filesystem::path(mrd_out) / ("mrd_" + band_file_tag(b) + ".csv"), csv);
                }
            }
        } else if (*cat) {
            const auto topo = eon::load_topology(config.topology, eon::make_topology_defaults(config));
            const eon::PathCatalog catalog(topo, config.catalogs.front(), config.k);
            std::cout << eon::catalog_to_json(topo, catalog);
        } else if (*wl) {
            const auto topo = eon::load_topology(config.topology, eon::make_topology_defaults(config));
            eon::WorkloadSpec spec{wl_load * config.sim.mu_ht, config.sim.mu_ht,
                                   wl_requests > 0 ? static_cast<std::size_t>(wl_requests) : config.sim.request_count,
                                   static_cast<std::uint64_t>(wl_seed)};
            std::cout << eon::workload_to_csv(topo, eon::generate_workload(spec, eon::connection_pdf(topo)));
        }
    } catch (const eon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const eon::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kTopologyError;
    } catch (const eon::ValidationError& e) {
        std::cerr << "topology error: " << e.what() << '\n';
        return kTopologyError;
    } catch (const eon::NoPathError& e) {
        std::cerr << "topology error: " << e.what() << '\n';
        return kTopologyError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}
