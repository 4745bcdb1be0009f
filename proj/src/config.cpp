#include "eon/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "eon/error.hpp"
#include "toml.hpp"

namespace eon {

std::filesystem::path default_data_dir() {
    return EON_DATA_DIR;
}

ScenarioConfig paper_defaults() {
    ScenarioConfig c;
    c.topology = default_data_dir() / "topologies" / "telefonica14_synthetic.json";
    c.loads = {460.0, 500.0, 540.0, 580.0, 620.0, 660.0};
    return c;
}

namespace {

using Keys = std::initializer_list<std::string_view>;

void check_keys(const toml::table& t, Keys allowed, std::string_view section) {
    for (const auto& [key, _] : t) {
        if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
            throw ConfigError("unknown key '" + std::string(key.str()) + "' in [" + std::string(section) + "]");
        }
    }
}

std::string where(std::string_view section, std::string_view key) {
    return std::string(section) + "." + std::string(key);
}

double as_double(const toml::node& n, const std::string& name) {
    if (auto v = n.value_exact<double>()) return *v;
    if (auto i = n.value_exact<std::int64_t>()) return static_cast<double>(*i);
    throw ConfigError(name + " must be a number");
}

std::int64_t as_int(const toml::node& n, const std::string& name) {
    if (auto i = n.value_exact<std::int64_t>()) return *i;
    throw ConfigError(name + " must be an integer");
}

bool as_bool(const toml::node& n, const std::string& name) {
    if (auto b = n.value_exact<bool>()) return *b;
    throw ConfigError(name + " must be a boolean");
}

std::string as_string(const toml::node& n, const std::string& name) {
    if (auto s = n.value_exact<std::string>()) return *s;
    throw ConfigError(name + " must be a string");
}

const toml::array& as_array(const toml::node& n, const std::string& name) {
    if (const auto* a = n.as_array()) return *a;
    throw ConfigError(name + " must be an array");
}

template <typename F>
void read(const toml::table& t, std::string_view key, F&& f) {
    if (const toml::node* n = t.get(key)) f(*n);
}

std::vector<std::pair<double, double>> as_eta_table(const toml::node& n, const std::string& name) {
    std::vector<std::pair<double, double>> out;
    for (const auto& row : as_array(n, name)) {
        const auto& pair = as_array(row, name);
        if (pair.size() != 2) throw ConfigError(name + " rows must be [frequency_THz, eta]");
        out.emplace_back(as_double(pair[0], name), as_double(pair[1], name));
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return path.lexically_normal();
}

}  // namespace

ScenarioConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
    toml::table doc;
    try {
        doc = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "config: " << e.description() << " at line " << e.source().begin.line;
        throw ConfigError(msg.str());
    }

    ScenarioConfig c = paper_defaults();
    check_keys(doc, {"run", "traffic", "grid", "qot"}, "top level");

    auto section = [&](std::string_view name) -> const toml::table* {
        const toml::node* n = doc.get(name);
        if (!n) return nullptr;
        if (!n->is_table()) throw ConfigError("[" + std::string(name) + "] must be a table");
        return n->as_table();
    };

    if (const auto* run = section("run")) {
        const std::string_view s = "run";
        check_keys(*run,
                   {"topology", "bands", "catalogs", "k", "policies", "loads", "replications", "record_timing",
                    "check_invariants", "jobs", "replay"},
                   s);
        read(*run, "topology", [&](auto& n) { c.topology = resolve(base_dir, as_string(n, where(s, "topology"))); });
        read(*run, "bands", [&](auto& n) {
            c.bands.clear();
            for (auto& b : as_array(n, where(s, "bands"))) c.bands.push_back(parse_band_scenario(as_string(b, "band")));
        });
        read(*run, "catalogs", [&](auto& n) {
            c.catalogs.clear();
            for (auto& m : as_array(n, where(s, "catalogs"))) {
                c.catalogs.push_back(parse_catalog_mode(as_string(m, "catalog")));
            }
        });
        read(*run, "k", [&](auto& n) { c.k = static_cast<int>(as_int(n, where(s, "k"))); });
        read(*run, "policies", [&](auto& n) {
            c.policies.clear();
            for (auto& p : as_array(n, where(s, "policies"))) c.policies.push_back(parse_policy(as_string(p, "policy")));
        });
        read(*run, "loads", [&](auto& n) {
            c.loads.clear();
            for (auto& l : as_array(n, where(s, "loads"))) c.loads.push_back(as_double(l, where(s, "loads")));
        });
        read(*run, "replications",
             [&](auto& n) { c.sim.replications = static_cast<int>(as_int(n, where(s, "replications"))); });
        read(*run, "record_timing", [&](auto& n) { c.record_timing = as_bool(n, where(s, "record_timing")); });
        read(*run, "check_invariants",
             [&](auto& n) { c.check_invariants = as_bool(n, where(s, "check_invariants")); });
        read(*run, "jobs", [&](auto& n) { c.jobs = static_cast<int>(as_int(n, where(s, "jobs"))); });
        read(*run, "replay", [&](auto& n) { c.replay = resolve(base_dir, as_string(n, where(s, "replay"))); });
    }

    if (const auto* tr = section("traffic")) {
        const std::string_view s = "traffic";
        check_keys(*tr, {"mu_ht", "request_count", "seed", "warmup_fraction", "rng"}, s);
        read(*tr, "mu_ht", [&](auto& n) { c.sim.mu_ht = as_double(n, where(s, "mu_ht")); });
        read(*tr, "request_count", [&](auto& n) {
            const auto v = as_int(n, where(s, "request_count"));
            if (v <= 0) throw ConfigError("traffic.request_count must be positive");
            c.sim.request_count = static_cast<std::size_t>(v);
        });
        read(*tr, "seed", [&](auto& n) {
            const auto v = as_int(n, where(s, "seed"));
            if (v < 0) throw ConfigError("traffic.seed must be nonnegative");
            c.sim.seed = static_cast<std::uint64_t>(v);
        });
        read(*tr, "warmup_fraction", [&](auto& n) { c.sim.warmup_fraction = as_double(n, where(s, "warmup_fraction")); });
        read(*tr, "rng", [&](auto& n) {
            if (as_string(n, where(s, "rng")) != kRngAlgorithm) {
                throw ConfigError("traffic.rng: this build only provides '" + std::string(kRngAlgorithm) + "'");
            }
        });
    }

    if (const auto* g = section("grid")) {
        const std::string_view s = "grid";
        check_keys(*g,
                   {"symbol_rate_gbaud", "channel_bandwidth_ghz", "slot_width_ghz", "guard_band_ghz", "c_channels",
                    "l_channels", "c_lowest_center_thz", "target_span_km"},
                   s);
        read(*g, "symbol_rate_gbaud", [&](auto& n) { c.symbol_rate_gbaud = as_double(n, where(s, "symbol_rate_gbaud")); });
        read(*g, "channel_bandwidth_ghz",
             [&](auto& n) { c.grid.channel_bandwidth_ghz = as_double(n, where(s, "channel_bandwidth_ghz")); });
        read(*g, "slot_width_ghz", [&](auto& n) { c.grid.slot_width_ghz = as_double(n, where(s, "slot_width_ghz")); });
        read(*g, "guard_band_ghz", [&](auto& n) { c.grid.guard_band_ghz = as_double(n, where(s, "guard_band_ghz")); });
        read(*g, "c_channels", [&](auto& n) { c.grid.c_channels = static_cast<int>(as_int(n, where(s, "c_channels"))); });
        read(*g, "l_channels", [&](auto& n) { c.grid.l_channels = static_cast<int>(as_int(n, where(s, "l_channels"))); });
        read(*g, "c_lowest_center_thz",
             [&](auto& n) { c.grid.c_lowest_center_thz = as_double(n, where(s, "c_lowest_center_thz")); });
        read(*g, "target_span_km", [&](auto& n) { c.target_span_km = as_double(n, where(s, "target_span_km")); });
    }

    if (const auto* q = section("qot")) {
        const std::string_view s = "qot";
        check_keys(*q,
                   {"snr_trx_db", "aging_margin_db", "launch_power_c_dbm", "launch_power_cl_dbm", "noise_figure_c_db",
                    "noise_figure_l_db", "attenuation_c_db_per_km", "attenuation_l_db_per_km", "reference_span_km",
                    "subtract_nli_from_signal", "eta_c", "eta_cl", "formats"},
                   s);
        auto num = [&](std::string_view key, double& dst) {
            read(*q, key, [&](auto& n) { dst = as_double(n, where(s, key)); });
        };
        num("snr_trx_db", c.qot.snr_trx_db);
        num("aging_margin_db", c.qot.aging_margin_db);
        num("launch_power_c_dbm", c.qot.launch_power_c_dbm);
        num("launch_power_cl_dbm", c.qot.launch_power_cl_dbm);
        num("noise_figure_c_db", c.qot.noise_figure_c_db);
        num("noise_figure_l_db", c.qot.noise_figure_l_db);
        num("attenuation_c_db_per_km", c.qot.attenuation_c_db_per_km);
        num("attenuation_l_db_per_km", c.qot.attenuation_l_db_per_km);
        num("reference_span_km", c.qot.reference_span_km);
        read(*q, "subtract_nli_from_signal",
             [&](auto& n) { c.qot.subtract_nli_from_signal = as_bool(n, where(s, "subtract_nli_from_signal")); });
        read(*q, "eta_c", [&](auto& n) { c.qot.eta_c = as_eta_table(n, where(s, "eta_c")); });
        read(*q, "eta_cl", [&](auto& n) { c.qot.eta_cl = as_eta_table(n, where(s, "eta_cl")); });
        read(*q, "formats", [&](auto& n) {
            c.qot.formats.clear();
            for (auto& f : as_array(n, where(s, "formats"))) {
                const auto* t = f.as_table();
                if (!t) throw ConfigError("qot.formats entries must be tables");
                check_keys(*t, {"name", "m", "rate_gbps", "threshold_db"}, "qot.formats");
                ModulationFormat mf;
                mf.name = as_string(*t->get("name"), "qot.formats.name");
                mf.m = static_cast<int>(as_int(*t->get("m"), "qot.formats.m"));
                mf.rate_gbps = as_double(*t->get("rate_gbps"), "qot.formats.rate_gbps");
                mf.threshold_db = as_double(*t->get("threshold_db"), "qot.formats.threshold_db");
                c.qot.formats.push_back(mf);
            }
        });
    }

    c.validate();
    return c;
}

ScenarioConfig load_config(std::string_view path_or_profile) {
    if (path_or_profile == kPaperDefaultsProfile) return paper_defaults();
    const std::filesystem::path path(path_or_profile);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::filesystem::absolute(path).parent_path());
}

namespace {

toml::array eta_to_toml(const std::vector<std::pair<double, double>>& table) {
    toml::array a;
    for (const auto& [f, eta] : table) a.push_back(toml::array{f, eta});
    return a;
}

}  // namespace

std::string config_to_toml(const ScenarioConfig& c) {
    toml::array bands;
    for (auto b : c.bands) bands.push_back(std::string(band_scenario_name(b)));
    toml::array catalogs;
    for (auto m : c.catalogs) catalogs.push_back(std::string(catalog_mode_name(m)));
    toml::array policies;
    for (auto p : c.policies) policies.push_back(std::string(policy_name(p)));
    toml::array loads;
    for (double l : c.loads) loads.push_back(l);

    toml::table run{
        {"topology", std::filesystem::absolute(c.topology).lexically_normal().string()},
        {"bands", bands},
        {"catalogs", catalogs},
        {"k", c.k},
        {"policies", policies},
        {"loads", loads},
        {"replications", c.sim.replications},
        {"record_timing", c.record_timing},
        {"check_invariants", c.check_invariants},
        {"jobs", c.jobs},
    };
    if (c.replay) run.insert("replay", std::filesystem::absolute(*c.replay).lexically_normal().string());

    toml::table traffic{
        {"mu_ht", c.sim.mu_ht},
        {"request_count", static_cast<std::int64_t>(c.sim.request_count)},
        {"seed", static_cast<std::int64_t>(c.sim.seed)},
        {"warmup_fraction", c.sim.warmup_fraction},
        {"rng", std::string(kRngAlgorithm)},
    };

    toml::table grid{
        {"symbol_rate_gbaud", c.symbol_rate_gbaud},
        {"channel_bandwidth_ghz", c.grid.channel_bandwidth_ghz},
        {"slot_width_ghz", c.grid.slot_width_ghz},
        {"guard_band_ghz", c.grid.guard_band_ghz},
        {"c_channels", c.grid.c_channels},
        {"l_channels", c.grid.l_channels},
        {"c_lowest_center_thz", c.grid.c_lowest_center_thz},
        {"target_span_km", c.target_span_km},
    };

    toml::array formats;
    for (const auto& f : c.qot.formats) {
        formats.push_back(toml::table{
            {"name", f.name}, {"m", f.m}, {"rate_gbps", f.rate_gbps}, {"threshold_db", f.threshold_db}});
    }
    toml::table qot{
        {"snr_trx_db", c.qot.snr_trx_db},
        {"aging_margin_db", c.qot.aging_margin_db},
        {"launch_power_c_dbm", c.qot.launch_power_c_dbm},
        {"launch_power_cl_dbm", c.qot.launch_power_cl_dbm},
        {"noise_figure_c_db", c.qot.noise_figure_c_db},
        {"noise_figure_l_db", c.qot.noise_figure_l_db},
        {"attenuation_c_db_per_km", c.qot.attenuation_c_db_per_km},
        {"attenuation_l_db_per_km", c.qot.attenuation_l_db_per_km},
        {"reference_span_km", c.qot.reference_span_km},
        {"subtract_nli_from_signal", c.qot.subtract_nli_from_signal},
        {"eta_c", eta_to_toml(c.qot.eta_c)},
        {"eta_cl", eta_to_toml(c.qot.eta_cl)},
        {"formats", formats},
    };

    toml::table doc{{"run", run}, {"traffic", traffic}, {"grid", grid}, {"qot", qot}};
    std::ostringstream out;
    out << "# Resolved scenario configuration\n" << doc << '\n';
    return out.str();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<double> parse_load_grid(std::string_view text) {
    auto number = [&](std::string_view s) {
        s = trim(s);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ConfigError("bad load value '" + std::string(s) + "'");
        }
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto p1 = text.find(':');
        const auto p2 = text.find(':', p1 + 1);
        if (p2 == std::string_view::npos) throw ConfigError("load grid must be lo:hi:step");
        const double lo = number(text.substr(0, p1));
        const double hi = number(text.substr(p1 + 1, p2 - p1 - 1));
        const double step = number(text.substr(p2 + 1));
        if (!(step > 0.0) || hi < lo) throw ConfigError("load grid needs step > 0 and hi >= lo");
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (long i = 0; i < n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            const auto end = comma == std::string_view::npos ? text.size() : comma;
            out.push_back(number(text.substr(pos, end - pos)));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    return out;
}

std::vector<Policy> parse_policy_list(std::string_view text) {
    if (text == "all") return {kAllPolicies.begin(), kAllPolicies.end()};
    std::vector<Policy> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        out.push_back(parse_policy(trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos))));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace eon
