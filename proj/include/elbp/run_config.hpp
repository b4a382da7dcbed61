#pragma once

#include <string>
#include <vector>

#include "elbp/errors.hpp"

namespace elbp {

/// Every knob of a pipeline run, loadable from/savable to JSON so runs are
/// reproducible from one file. Flags layer on top: defaults < config file <
/// command line.
struct RunConfig {
    std::vector<std::string> inputs;       // mesh paths or globs
    std::string h_name = "k2";             // k1,k2,H,K,SI,curvedness
    int p = 15;                            // samples per ring
    int n_rings = 5;
    std::string r_max_mode = "explicit";   // explicit | area-fraction | edge-length
    double r_max = 2.5;                    // mm, explicit mode
    double edge_factor = 15.0;             // edge-length mode multiplier
    int averaging_ring_size = 3;           // curvature tensor neighborhood
    std::string alpha = "a1";              // a1 | a2
    std::string metric = "bhattacharyya";  // bhattacharyya | chi2 | euclidean
    int e_cutoff = 32;
    std::string output_dir = ".";
    unsigned workers = 1;                  // 0 = hardware concurrency

    bool operator==(const RunConfig&) const = default;

    /// Throws ConfigError on any out-of-range or unknown value.
    void validate() const;
};

/// JSON round trip: load(save(c)) == c.
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

std::string config_to_json_text(const RunConfig& config);
RunConfig config_from_json_text(const std::string& text);

} // namespace elbp
