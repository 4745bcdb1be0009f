#include "eon/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "eon/error.hpp"

namespace eon {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 make_substream(std::uint64_t seed, Substream stream) {
    const auto s = static_cast<std::uint64_t>(stream);
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(s * 0xd1b54a32d192ed03ULL)));
}

void WorkloadSpec::validate() const {
    if (!(mu_at > 0.0) || !(mu_ht > 0.0) || !std::isfinite(mu_at) || !std::isfinite(mu_ht)) {
        throw ValidationError("arrival and departure rates must be positive");
    }
    if (request_count == 0) throw ValidationError("request count must be positive");
}

ConnectionSampler::ConnectionSampler(const ConnectionPdf& pdf) : pairs_(pdf.pairs) {
    double acc = 0.0;
    for (double p : pdf.probability) {
        acc += p;
        cdf_.push_back(acc);
    }
}

Connection ConnectionSampler::operator()(std::mt19937_64& rng) const {
    // Scale by the accumulated total so rounding in the last CDF entry cannot
    // leave an unreachable tail.
    const double u = unit_uniform(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return pairs_[static_cast<std::size_t>(it - cdf_.begin())];
}

Connection sample_connection(const ConnectionPdf& pdf, std::mt19937_64& rng) {
    return ConnectionSampler(pdf)(rng);
}

int sample_throughput(std::mt19937_64& rng) {
    const auto i = static_cast<std::size_t>(unit_uniform(rng) * kThroughputsGbps.size());
    return kThroughputsGbps[std::min(i, kThroughputsGbps.size() - 1)];
}

double sample_exponential(std::mt19937_64& rng, double rate) {
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log1p(-unit_uniform(rng)) / rate;
}

WorkloadGenerator::WorkloadGenerator(const WorkloadSpec& spec, const ConnectionPdf& pdf)
    : spec_(spec),
      sampler_(pdf),
      connection_rng_(make_substream(spec.seed, Substream::Connection)),
      throughput_rng_(make_substream(spec.seed, Substream::Throughput)),
      arrival_rng_(make_substream(spec.seed, Substream::InterArrival)),
      holding_rng_(make_substream(spec.seed, Substream::Holding)) {
    spec_.validate();
}

Request WorkloadGenerator::next() {
    Request r;
    r.id = next_id_++;
    clock_ += sample_exponential(arrival_rng_, spec_.mu_at);
    r.arrival_time = clock_;
    r.connection = sampler_(connection_rng_);
    r.throughput_gbps = sample_throughput(throughput_rng_);
    r.holding_time = sample_exponential(holding_rng_, spec_.mu_ht);
    // A zero holding time is possible only if u == 0 exactly; keep it positive.
    if (!(r.holding_time > 0.0)) r.holding_time = std::numeric_limits<double>::min();
    return r;
}

std::vector<Request> generate_workload(const WorkloadSpec& spec, const ConnectionPdf& pdf) {
    WorkloadGenerator gen(spec, pdf);
    std::vector<Request> out;
    out.reserve(spec.request_count);
    while (!gen.done()) out.push_back(gen.next());
    return out;
}

std::string workload_to_csv(const Topology& topology, const std::vector<Request>& requests) {
    std::ostringstream out;
    out << "id,src,des,R_r,arrival,holding\n";
    out << std::setprecision(17);
    for (const auto& r : requests) {
        out << r.id << ',' << topology.nodes()[r.connection.a].id << ',' << topology.nodes()[r.connection.b].id
            << ',' << r.throughput_gbps << ',' << r.arrival_time << ',' << r.holding_time << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        cells.push_back(cell);
    }
    return cells;
}

template <typename T>
T parse_number(const std::string& cell, std::size_t line_no) {
    T value{};
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("workload line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    }
    return value;
}

}  // namespace

std::vector<Request> parse_workload_csv(const Topology& topology, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<Request> out;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        auto cells = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            const std::vector<std::string> expected{"id", "src", "des", "R_r", "arrival", "holding"};
            if (cells != expected) throw ParseError("workload: expected header id,src,des,R_r,arrival,holding");
            continue;
        }
        if (cells.size() != 6) throw ParseError("workload line " + std::to_string(line_no) + ": expected 6 fields");
        Request r;
        r.id = parse_number<RequestId>(cells[0], line_no);
        NodeIndex a = topology.node_index(cells[1]);
        NodeIndex b = topology.node_index(cells[2]);
        if (a == b) throw ValidationError("workload line " + std::to_string(line_no) + ": src equals des");
        r.connection = {std::min(a, b), std::max(a, b)};
        r.throughput_gbps = parse_number<int>(cells[3], line_no);
        if (std::find(kThroughputsGbps.begin(), kThroughputsGbps.end(), r.throughput_gbps) ==
            kThroughputsGbps.end()) {
            throw ValidationError("workload line " + std::to_string(line_no) + ": R_r must be one of 100..600");
        }
        r.arrival_time = parse_number<double>(cells[4], line_no);
        r.holding_time = parse_number<double>(cells[5], line_no);
        if (!(r.holding_time > 0.0)) {
            throw ValidationError("workload line " + std::to_string(line_no) + ": holding time must be positive");
        }
        if (!out.empty() && (r.id <= out.back().id || r.arrival_time < out.back().arrival_time)) {
            throw ValidationError("workload line " + std::to_string(line_no) +
                                  ": ids and arrival times must be increasing");
        }
        out.push_back(r);
    }
    if (!header_seen) throw ParseError("workload: empty file");
    return out;
}

std::vector<Request> load_workload_csv(const Topology& topology, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open workload file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_workload_csv(topology, buf.str());
}

}  // namespace eon
