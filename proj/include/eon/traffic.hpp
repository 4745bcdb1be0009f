#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eon/spectrum.hpp"
#include "eon/topology.hpp"

namespace eon {

inline constexpr std::array<int, 6> kThroughputsGbps{100, 200, 300, 400, 500, 600};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine output.
/// Used instead of std::uniform_real_distribution so draws are identical
/// across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x);

/// Independent draw streams of one replication.
enum class Substream : std::uint64_t { Connection = 1, Throughput = 2, InterArrival = 3, Holding = 4 };

/// mt19937_64 seeded from splitmix64(seed, stream); the algorithm pinned in the
/// resolved-config echo.
std::mt19937_64 make_substream(std::uint64_t seed, Substream stream);

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-substreams";

struct Request {
    RequestId id = 0;
    Connection connection;
    int throughput_gbps = 0;
    double arrival_time = 0.0;
    double holding_time = 0.0;
};

struct WorkloadSpec {
    double mu_at = 1.0;
    double mu_ht = 1.0;
    std::size_t request_count = 0;
    std::uint64_t seed = 0;

    double offered_load() const { return mu_at / mu_ht; }
    void validate() const;
};

/// Inverse-CDF draw over the fixed pair order of the PDF.
class ConnectionSampler {
public:
    explicit ConnectionSampler(const ConnectionPdf& pdf);
    Connection operator()(std::mt19937_64& rng) const;

private:
    std::vector<Connection> pairs_;
    std::vector<double> cdf_;
};

Connection sample_connection(const ConnectionPdf& pdf, std::mt19937_64& rng);
int sample_throughput(std::mt19937_64& rng);
double sample_exponential(std::mt19937_64& rng, double rate);

/// Streams requests one by one; each field draws from its own substream.
class WorkloadGenerator {
public:
    WorkloadGenerator(const WorkloadSpec& spec, const ConnectionPdf& pdf);

    bool done() const { return next_id_ >= spec_.request_count; }
    Request next();

private:
    WorkloadSpec spec_;
    ConnectionSampler sampler_;
    std::mt19937_64 connection_rng_;
    std::mt19937_64 throughput_rng_;
    std::mt19937_64 arrival_rng_;
    std::mt19937_64 holding_rng_;
    RequestId next_id_ = 0;
    double clock_ = 0.0;
};

std::vector<Request> generate_workload(const WorkloadSpec& spec, const ConnectionPdf& pdf);

/// CSV with header id,src,des,R_r,arrival,holding; times in round-trip precision.
std::string workload_to_csv(const Topology& topology, const std::vector<Request>& requests);
std::vector<Request> parse_workload_csv(const Topology& topology, std::string_view text);
std::vector<Request> load_workload_csv(const Topology& topology, const std::filesystem::path& path);

}  // namespace eon
