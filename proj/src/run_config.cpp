#include "elbp/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace elbp {

void RunConfig::validate() const {
    static const std::set<std::string> h_names = {"k1", "k2", "H",
                                                  "K",  "SI", "curvedness"};
    static const std::set<std::string> modes = {"explicit", "area-fraction",
                                                "edge-length"};
    static const std::set<std::string> alphas = {"a1", "a2"};
    static const std::set<std::string> metrics = {"bhattacharyya", "chi2",
                                                  "euclidean"};
    if (!h_names.count(h_name)) throw ConfigError("unknown h field '" + h_name + "'");
    if (p < 3) throw ConfigError("p must be at least 3");
    if (n_rings < 1) throw ConfigError("n_rings must be at least 1");
    if (!modes.count(r_max_mode))
        throw ConfigError("unknown r_max mode '" + r_max_mode + "'");
    if (r_max_mode == "explicit" && r_max <= 0)
        throw ConfigError("r_max must be positive");
    if (r_max_mode == "edge-length" && edge_factor <= 0)
        throw ConfigError("edge_factor must be positive");
    if (averaging_ring_size < 1)
        throw ConfigError("averaging_ring_size must be at least 1");
    if (!alphas.count(alpha)) throw ConfigError("unknown alpha '" + alpha + "'");
    if (!metrics.count(metric)) throw ConfigError("unknown metric '" + metric + "'");
    if (e_cutoff < 1) throw ConfigError("e_cutoff must be positive");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string config_to_json_text(const RunConfig& config) {
    nlohmann::json j;
    j["inputs"] = config.inputs;
    j["h"] = config.h_name;
    j["p"] = config.p;
    j["n_rings"] = config.n_rings;
    j["r_max_mode"] = config.r_max_mode;
    j["r_max"] = config.r_max;
    j["edge_factor"] = config.edge_factor;
    j["averaging_ring_size"] = config.averaging_ring_size;
    j["alpha"] = config.alpha;
    j["metric"] = config.metric;
    j["e_cutoff"] = config.e_cutoff;
    j["output_dir"] = config.output_dir;
    j["workers"] = config.workers;
    return j.dump(2) + "\n";
}

RunConfig config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig config;
    try {
        if (j.contains("inputs")) config.inputs = j["inputs"].get<std::vector<std::string>>();
        if (j.contains("h")) config.h_name = j["h"].get<std::string>();
        if (j.contains("p")) config.p = j["p"].get<int>();
        if (j.contains("n_rings")) config.n_rings = j["n_rings"].get<int>();
        if (j.contains("r_max_mode")) config.r_max_mode = j["r_max_mode"].get<std::string>();
        if (j.contains("r_max")) config.r_max = j["r_max"].get<double>();
        if (j.contains("edge_factor")) config.edge_factor = j["edge_factor"].get<double>();
        if (j.contains("averaging_ring_size"))
            config.averaging_ring_size = j["averaging_ring_size"].get<int>();
        if (j.contains("alpha")) config.alpha = j["alpha"].get<std::string>();
        if (j.contains("metric")) config.metric = j["metric"].get<std::string>();
        if (j.contains("e_cutoff")) config.e_cutoff = j["e_cutoff"].get<int>();
        if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("workers")) config.workers = j["workers"].get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field has the wrong type: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        static const std::set<std::string> known = {
            "inputs", "h",           "p",        "n_rings",  "r_max_mode",
            "r_max",  "edge_factor", "averaging_ring_size",  "alpha",
            "metric", "e_cutoff",    "output_dir",           "workers"};
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json_text(buffer.str());
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << config_to_json_text(config);
}

} // namespace elbp
