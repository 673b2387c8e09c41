#pragma once

#include "dmlab/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dmlab::cli {

// Effective settings of one run. Empty lists mean "use the command's default".
struct RunConfig {
    std::vector<double> T;
    std::vector<std::string> alpha;  // rationals as text, e.g. "1", "3/2"
    unsigned k_max = 0;              // 0: command default
    unsigned grid_k = 0;             // order the quadrature grid is built for; 0: k_max
    std::vector<std::string> mollifiers;
    double tail_eps = 1e-12;
    std::string cache_dir = ".dmlab-cache";
    Format format = Format::csv;
    std::uint64_t seed = 12345;
    int threads = 0;  // 0: OpenMP default
    std::string zeros_file;
    std::uint64_t samples = 1'000'000;
    std::vector<double> d;  // shifts for the zero-average profile
    std::uint64_t table_limit = 0;  // tables command: sieve size; 0 derives it from T and alpha
};

// Keys match the long flag names with dashes replaced by underscores.
RunConfig config_from_json(const Json& doc, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Everything that influences results; the thread budget is left out because it does not.
Json config_to_json(const RunConfig& config);

// Fills command defaults and checks ranges; throws ValidationError.
RunConfig resolve(const RunConfig& config, const std::string& command);

}  // namespace dmlab::cli
