#include "eon/qot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eon/error.hpp"

namespace eon {

double db_to_linear(double x_db) {
    return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x) {
    return 10.0 * std::log10(x);
}

std::string_view band_scenario_name(BandScenario s) {
    return s == BandScenario::C ? "C" : "C+L";
}

BandScenario parse_band_scenario(std::string_view text) {
    if (text == "C" || text == "c") return BandScenario::C;
    if (text == "C+L" || text == "c+l" || text == "CL") return BandScenario::CL;
    throw ConfigError("unknown band scenario '" + std::string(text) + "' (expected C or C+L)");
}

int BandPlan::slots_per_channel() const {
    return static_cast<int>(std::lround(channel_bandwidth_ghz / slot_width_ghz));
}

const BandSpec* BandPlan::find(Band band) const {
    for (const auto& b : bands) {
        if (b.band == band) return &b;
    }
    return nullptr;
}

double BandPlan::lower_edge_thz(const BandSpec& b) const {
    return b.lowest_center_thz - 0.5e-3 * channel_bandwidth_ghz;
}

double BandPlan::upper_edge_thz(const BandSpec& b) const {
    return b.lowest_center_thz + 1e-3 * channel_bandwidth_ghz * (b.channel_count - 1) +
           0.5e-3 * channel_bandwidth_ghz;
}

double BandPlan::channel_center_thz(const BandSpec& b, int channel) const {
    return b.lowest_center_thz + 1e-3 * channel_bandwidth_ghz * channel;
}

std::optional<Band> BandPlan::band_of(double f) const {
    // Small tolerance so centres computed from slot edges land inside.
    constexpr double eps = 1e-9;
    for (const auto& b : bands) {
        if (f >= lower_edge_thz(b) - eps && f <= upper_edge_thz(b) + eps) return b.band;
    }
    return std::nullopt;
}

void BandPlan::validate() const {
    if (bands.empty()) throw ValidationError("band plan has no bands");
    if (!(slot_width_ghz > 0.0) || !(channel_bandwidth_ghz > 0.0)) {
        throw ValidationError("slot width and channel bandwidth must be positive");
    }
    const double ratio = channel_bandwidth_ghz / slot_width_ghz;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw ValidationError("channel bandwidth must be an integer multiple of the slot width");
    }
    if (guard_band_ghz < 0.0) throw ValidationError("guard band must be nonnegative");
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].channel_count <= 0) throw ValidationError("band channel count must be positive");
        if (!(bands[i].lowest_center_thz > 0.0)) throw ValidationError("band frequency must be positive");
        if (i > 0) {
            const double gap_ghz = 1e3 * (lower_edge_thz(bands[i]) - upper_edge_thz(bands[i - 1]));
            if (gap_ghz < guard_band_ghz - 1e-6) {
                throw ValidationError("bands must be ascending and separated by the guard band");
            }
        }
    }
}

BandPlan make_band_plan(BandScenario scenario, const GridParams& grid) {
    BandPlan plan;
    plan.channel_bandwidth_ghz = grid.channel_bandwidth_ghz;
    plan.slot_width_ghz = grid.slot_width_ghz;
    plan.guard_band_ghz = grid.guard_band_ghz;
    const BandSpec c{Band::C, grid.c_channels, grid.c_lowest_center_thz};
    if (scenario == BandScenario::CL) {
        const double bw_thz = 1e-3 * grid.channel_bandwidth_ghz;
        const double l_upper_edge = plan.lower_edge_thz(c) - 1e-3 * grid.guard_band_ghz;
        const double l_top_center = l_upper_edge - 0.5 * bw_thz;
        plan.bands.push_back({Band::L, grid.l_channels, l_top_center - bw_thz * (grid.l_channels - 1)});
    }
    plan.bands.push_back(c);
    plan.validate();
    return plan;
}

NliTable::NliTable(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].second < 0.0) throw ValidationError("eta values must be nonnegative");
        if (i > 0 && points_[i].first == points_[i - 1].first) {
            throw ValidationError("duplicate frequency in eta table");
        }
    }
}

double NliTable::eta(double f) const {
    if (points_.empty() || f < points_.front().first - 1e-9 || f > points_.back().first + 1e-9) {
        throw OutOfBandError("frequency " + std::to_string(f) + " THz outside NLI table coverage");
    }
    if (points_.size() == 1 || f <= points_.front().first) return points_.front().second;
    if (f >= points_.back().first) return points_.back().second;
    auto hi = std::upper_bound(points_.begin(), points_.end(), f,
                               [](double x, const std::pair<double, double>& p) { return x < p.first; });
    auto lo = hi - 1;
    const double t = (f - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

bool NliTable::covers(double lo, double hi) const {
    return !points_.empty() && points_.front().first <= lo + 1e-9 && points_.back().first >= hi - 1e-9;
}

void GsnrModel::validate() const {
    plan.validate();
    if (!std::isfinite(snr_trx_db)) throw ValidationError("SNR_TRX must be finite");
    if (aging_margin_db < 0.0) throw ValidationError("aging margin must be nonnegative");
    if (!(reference_span_km > 0.0)) throw ValidationError("reference span length must be positive");
    for (const auto& b : plan.bands) {
        if (!nli.covers(plan.lower_edge_thz(b), plan.upper_edge_thz(b))) {
            throw ValidationError("NLI table does not cover the " + std::string(band_name(b.band)) + " band");
        }
    }
}

namespace {

Band require_band(const GsnrModel& model, double f) {
    auto band = model.plan.band_of(f);
    if (!band) throw OutOfBandError("frequency " + std::to_string(f) + " THz outside the band plan");
    return *band;
}

}  // namespace

double span_ase_power(const Span& span, double f, const GsnrModel& model, double bandwidth_ghz) {
    const FiberParams& p = span.fiber[require_band(model, f)];
    const double gain_db = p.attenuation_db_per_km * span.length_km;
    return kPlanckJs * (f * 1e12) * (bandwidth_ghz * 1e9) * db_to_linear(p.noise_figure_db + gain_db);
}

double span_nli_power(const Span& span, double f, const GsnrModel& model) {
    const double p = model.launch_power_w();
    return model.nli.eta(f) * (span.length_km / model.reference_span_km) * p * p * p;
}

double span_snr_term(const Span& span, double f, const GsnrModel& model, double bandwidth_ghz) {
    const double p = model.launch_power_w();
    const double ase = span_ase_power(span, f, model, bandwidth_ghz);
    const double nli = span_nli_power(span, f, model);
    if (nli >= p) {
        throw NonPhysicalError("NLI power exceeds launch power at " + std::to_string(f) + " THz");
    }
    const double signal = model.subtract_nli_from_signal ? p - nli : p;
    return signal / (ase + nli);
}

namespace {

double finish_gsnr(double inverse_sum, const GsnrModel& model) {
    inverse_sum += 1.0 / db_to_linear(model.snr_trx_db);
    return -linear_to_db(inverse_sum) - model.aging_margin_db;
}

}  // namespace

double path_gsnr(std::span<const Span> spans, double f, const GsnrModel& model, double bandwidth_ghz) {
    double inv = 0.0;
    for (const Span& s : spans) inv += 1.0 / span_snr_term(s, f, model, bandwidth_ghz);
    return finish_gsnr(inv, model);
}

double path_gsnr(const Topology& topology, const CandidatePath& path, double f, const GsnrModel& model,
                 double bandwidth_ghz) {
    double inv = 0.0;
    for (LinkIndex li : path.links) {
        for (const Span& s : topology.link(li).spans) inv += 1.0 / span_snr_term(s, f, model, bandwidth_ghz);
    }
    return finish_gsnr(inv, model);
}

std::vector<ModulationFormat> default_formats() {
    return {
        {"PM-BPSK", 1, 100.0, 6.79, 0.0},   {"PM-QPSK", 2, 200.0, 9.81, 0.0},
        {"PM-8QAM", 3, 300.0, 13.71, 0.0},  {"PM-16QAM", 4, 400.0, 16.54, 0.0},
        {"PM-32QAM", 5, 500.0, 19.58, 0.0}, {"PM-64QAM", 6, 600.0, 22.54, 0.0},
    };
}

namespace {

constexpr long kMaxChainSpans = 1L << 17;

// Same accumulation as path_gsnr over n copies of one span.
double chain_gsnr(double inverse_term, long n, const GsnrModel& model) {
    double inv = 0.0;
    for (long i = 0; i < n; ++i) inv += inverse_term;
    return finish_gsnr(inv, model);
}

}  // namespace

double compute_mrd(const ModulationFormat& mf, const GsnrModel& model, const Span& reference_span, double f) {
    const double inverse_term = 1.0 / span_snr_term(reference_span, f, model, model.plan.channel_bandwidth_ghz);
    auto meets = [&](long n) { return chain_gsnr(inverse_term, n, model) >= mf.threshold_db; };

    if (!meets(1)) return 0.0;
    long good = 1;
    long bad = 2;
    while (bad <= kMaxChainSpans && meets(bad)) {
        good = bad;
        bad *= 2;
    }
    if (bad > kMaxChainSpans) return static_cast<double>(good) * reference_span.length_km;
    while (bad - good > 1) {
        const long mid = good + (bad - good) / 2;
        (meets(mid) ? good : bad) = mid;
    }
    return static_cast<double>(good) * reference_span.length_km;
}

double mrd_reference_frequency(const GsnrModel& model, const Span& reference_span) {
    const auto& plan = model.plan;
    if (plan.bands.size() == 1 && plan.bands.front().band == Band::C) {
        const BandSpec& c = plan.bands.front();
        return plan.channel_center_thz(c, c.channel_count / 2);
    }
    double worst_f = 0.0;
    double worst_term = std::numeric_limits<double>::infinity();
    for (const auto& b : plan.bands) {
        for (int ch = 0; ch < b.channel_count; ++ch) {
            const double f = plan.channel_center_thz(b, ch);
            const double term = span_snr_term(reference_span, f, model, plan.channel_bandwidth_ghz);
            if (term < worst_term) {
                worst_term = term;
                worst_f = f;
            }
        }
    }
    return worst_f;
}

std::vector<ModulationFormat> build_mrd_table(std::vector<ModulationFormat> formats, const GsnrModel& model,
                                              const Span& reference_span) {
    std::sort(formats.begin(), formats.end(),
              [](const ModulationFormat& x, const ModulationFormat& y) { return x.m < y.m; });
    const double f = mrd_reference_frequency(model, reference_span);
    for (auto& mf : formats) mf.mrd_km = compute_mrd(mf, model, reference_span, f);
    return formats;
}

std::optional<ModulationFormat> select_mfl(double path_length_km, std::span<const ModulationFormat> table) {
    for (auto it = table.rbegin(); it != table.rend(); ++it) {
        if (it->mrd_km >= path_length_km) return *it;
    }
    return std::nullopt;
}

std::string mrd_table_csv(std::span<const ModulationFormat> table) {
    std::ostringstream out;
    out << "mfl_name,m,R_m_Gbps,threshold_dB,mrd_km\n";
    for (const auto& mf : table) {
        out << mf.name << ',' << mf.m << ',' << mf.rate_gbps << ',' << mf.threshold_db << ',' << mf.mrd_km << '\n';
    }
    return out.str();
}

}  // namespace eon
