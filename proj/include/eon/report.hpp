#pragma once

#include <string>

#include "eon/scenario.hpp"

namespace eon {

/// Column order of results.csv. Stable; append new columns at the end only.
inline constexpr const char* kReportCsvHeader =
    "band,catalog,policy,offered_load,replications,bbp_mean,bbp_ci95,bbp_request_count_based,avg_gsnr_dB,"
    "accepted_gbps,blocked_gbps,wall_clock_s,precompute_s,mean_paths_per_connection,"
    "blocked_no_mfl,blocked_no_spectrum,blocked_threshold";

std::string report_csv(const SimReport& report);

/// Per-replication rows (band,catalog,policy,offered_load,seed,bbp,...).
std::string replications_csv(const SimReport& report);

/// gnuplot data: one block per (band, catalog, policy), blocks separated by
/// two blank lines so `index N` selects a curve. Columns: load bbp ci95
/// avg_gsnr_dB wall_clock_s.
std::string plot_data(const SimReport& report);

}  // namespace eon
