#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eon/pathing.hpp"
#include "eon/topology.hpp"

namespace eon {

inline constexpr double kPlanckJs = 6.62607015e-34;

double db_to_linear(double x_db);
double linear_to_db(double x);
inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }

enum class BandScenario { C, CL };

std::string_view band_scenario_name(BandScenario s);  // "C" or "C+L"
BandScenario parse_band_scenario(std::string_view text);

struct BandSpec {
    Band band = Band::C;
    int channel_count = 0;
    double lowest_center_thz = 0.0;
};

/// Channel grid of the active bands, bands ordered by ascending frequency.
struct BandPlan {
    std::vector<BandSpec> bands;
    double channel_bandwidth_ghz = 75.0;
    double guard_band_ghz = 500.0;
    double slot_width_ghz = 12.5;

    int slots_per_channel() const;
    const BandSpec* find(Band band) const;
    double lower_edge_thz(const BandSpec& b) const;
    double upper_edge_thz(const BandSpec& b) const;
    double channel_center_thz(const BandSpec& b, int channel) const;
    std::optional<Band> band_of(double frequency_thz) const;

    void validate() const;  // throws ValidationError
};

struct GridParams {
    double channel_bandwidth_ghz = 75.0;
    double slot_width_ghz = 12.5;
    double guard_band_ghz = 500.0;
    int c_channels = 53;
    int l_channels = 91;
    double c_lowest_center_thz = 191.6;
};

/// C band anchored at c_lowest_center_thz; for C+L the L band sits directly
/// below it with exactly guard_band_ghz between the band edges.
BandPlan make_band_plan(BandScenario scenario, const GridParams& grid);

/// Piecewise-linear NLI coefficient eta(frequency), in 1/W^2 per span of
/// reference length.
class NliTable {
public:
    NliTable() = default;
    explicit NliTable(std::vector<std::pair<double, double>> points);

    double eta(double frequency_thz) const;  // throws OutOfBandError outside coverage
    bool covers(double lo_thz, double hi_thz) const;
    const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

struct GsnrModel {
    BandPlan plan;
    double launch_power_dbm = 0.0;
    double snr_trx_db = 36.0;
    double aging_margin_db = 2.0;
    double reference_span_km = 70.0;
    bool subtract_nli_from_signal = true;
    NliTable nli;

    double launch_power_w() const { return dbm_to_watt(launch_power_dbm); }
    void validate() const;
};

double span_ase_power(const Span& span, double frequency_thz, const GsnrModel& model, double bandwidth_ghz);
double span_nli_power(const Span& span, double frequency_thz, const GsnrModel& model);

/// Linear per-span signal-to-noise term (P - P_NLI) / (P_ASE + P_NLI), or with
/// plain P in the numerator when subtract_nli_from_signal is off.
double span_snr_term(const Span& span, double frequency_thz, const GsnrModel& model, double bandwidth_ghz);

/// End-to-end GSNR in dB after the aging margin.
double path_gsnr(std::span<const Span> spans, double frequency_thz, const GsnrModel& model,
                 double bandwidth_ghz);
double path_gsnr(const Topology& topology, const CandidatePath& path, double frequency_thz,
                 const GsnrModel& model, double bandwidth_ghz);

struct ModulationFormat {
    std::string name;
    int m = 0;
    double rate_gbps = 0.0;
    double threshold_db = 0.0;
    double mrd_km = 0.0;
};

/// PM-BPSK .. PM-64QAM at 100..600 Gb/s (64 GBaud, 28% FEC overhead).
std::vector<ModulationFormat> default_formats();

/// Largest n-span chain of reference spans meeting the threshold, as km.
double compute_mrd(const ModulationFormat& mf, const GsnrModel& model, const Span& reference_span,
                   double frequency_thz);

/// Frequency at which reach is planned: the centre channel when only the C
/// band is lit, otherwise the channel with the lowest single-span GSNR.
double mrd_reference_frequency(const GsnrModel& model, const Span& reference_span);

std::vector<ModulationFormat> build_mrd_table(std::vector<ModulationFormat> formats, const GsnrModel& model,
                                              const Span& reference_span);

/// Highest-order format whose reach covers the path; nullopt means QoT block.
std::optional<ModulationFormat> select_mfl(double path_length_km, std::span<const ModulationFormat> mrd_table);

std::string mrd_table_csv(std::span<const ModulationFormat> table);

}  // namespace eon
