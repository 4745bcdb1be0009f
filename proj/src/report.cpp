#include "eon/report.hpp"

#include <iomanip>
#include <sstream>

namespace eon {

namespace {

std::ostream& row_key(std::ostream& out, const ReportRow& r) {
    return out << band_scenario_name(r.band) << ',' << catalog_mode_name(r.catalog) << ',' << policy_name(r.policy)
               << ',' << r.offered_load;
}

}  // namespace

std::string report_csv(const SimReport& report) {
    std::ostringstream out;
    out << std::setprecision(10);
    out << kReportCsvHeader << '\n';
    for (const auto& r : report.rows) {
        row_key(out, r) << ',' << r.replications.size() << ',' << r.bbp_mean << ',' << r.bbp_ci95 << ','
                        << r.bbp_request_mean << ',' << r.avg_gsnr_db << ',' << r.accepted_gbps << ','
                        << r.blocked_gbps << ',' << r.wall_clock_s << ',' << r.precompute_s << ','
                        << r.mean_paths_per_connection << ','
                        << r.blocked_by_reason[static_cast<std::size_t>(BlockReason::NoFormat)] << ','
                        << r.blocked_by_reason[static_cast<std::size_t>(BlockReason::NoSpectrum)] << ','
                        << r.blocked_by_reason[static_cast<std::size_t>(BlockReason::BelowThreshold)] << '\n';
    }
    return out.str();
}

std::string replications_csv(const SimReport& report) {
    std::ostringstream out;
    out << std::setprecision(10);
    out << "band,catalog,policy,offered_load,seed,bbp,bbp_request_count_based,avg_gsnr_dB,offered_gbps,"
           "accepted_gbps,blocked_gbps,wall_clock_s\n";
    for (const auto& r : report.rows) {
        for (const auto& rep : r.replications) {
            row_key(out, r) << ',' << rep.seed << ',' << rep.bbp() << ',' << rep.request_bbp() << ','
                            << rep.avg_gsnr_db() << ',' << rep.offered_gbps << ',' << rep.accepted_gbps << ','
                            << rep.blocked_gbps << ',' << rep.wall_clock_s << '\n';
        }
    }
    return out.str();
}

std::string plot_data(const SimReport& report) {
    std::ostringstream out;
    out << std::setprecision(10);
    const ReportRow* prev = nullptr;
    int index = 0;
    for (const auto& r : report.rows) {
        const bool new_block =
            prev == nullptr || prev->band != r.band || prev->catalog != r.catalog || prev->policy != r.policy;
        if (new_block) {
            if (prev != nullptr) out << "\n\n";
            out << "# index " << index++ << ": " << band_scenario_name(r.band) << ' ' << catalog_mode_name(r.catalog)
                << ' ' << policy_name(r.policy) << '\n'
                << "# load bbp ci95 avg_gsnr_dB wall_clock_s\n";
        }
        out << r.offered_load << ' ' << r.bbp_mean << ' ' << r.bbp_ci95 << ' ' << r.avg_gsnr_db << ' '
            << r.wall_clock_s << '\n';
        prev = &r;
    }
    return out.str();
}

}  // namespace eon
