#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <glob.h>

#include <CLI11.hpp>

#include "elbp/curvature.hpp"
#include "elbp/edgelbp.hpp"
#include "elbp/mesh_io.hpp"
#include "elbp/retrieval_eval.hpp"
#include "elbp/run_config.hpp"
#include "elbp/similarity.hpp"

namespace fs = std::filesystem;
using namespace elbp;

namespace {

std::vector<std::string> expand_inputs(const std::vector<std::string>& patterns) {
    std::vector<std::string> files;
    for (const auto& pattern : patterns) {
        if (pattern.find_first_of("*?[") == std::string::npos) {
            files.push_back(pattern);
            continue;
        }
        glob_t g{};
        if (glob(pattern.c_str(), 0, nullptr, &g) == 0)
            for (size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
        globfree(&g);
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

double resolve_r_max(const RunConfig& cfg, const SurfaceTessellation& mesh) {
    if (cfg.r_max_mode == "explicit") return cfg.r_max;
    if (cfg.r_max_mode == "area-fraction") return rmax_from_area(surface_area(mesh));
    return rmax_from_edge_length(mean_edge_length(mesh), cfg.edge_factor);
}

int cmd_describe(const RunConfig& cfg) {
    cfg.validate();
    const auto files = expand_inputs(cfg.inputs);
    if (files.empty()) throw ConfigError("describe needs at least one input mesh");
    fs::create_directories(cfg.output_dir);

    struct Row {
        std::string id;
        std::int64_t n_vertices, n_admissible;
        double wall_ms;
    };
    std::vector<Row> rows;
    std::set<std::string> used_ids;
    int failures = 0;

    const auto run_start = std::chrono::steady_clock::now();
    for (const auto& file : files) {
        std::string id = fs::path(file).stem().string();
        for (int suffix = 2; used_ids.count(id); ++suffix)
            id = fs::path(file).stem().string() + "_" + std::to_string(suffix);
        used_ids.insert(id);

        const auto start = std::chrono::steady_clock::now();
        try {
            const SurfaceTessellation mesh = load_mesh(file);
            const VertexField h =
                curvature_field(mesh, cfg.h_name, cfg.averaging_ring_size);
            DescriptorParams params;
            params.p = cfg.p;
            params.n_rings = cfg.n_rings;
            params.r_max = resolve_r_max(cfg, mesh);
            params.h_name = cfg.h_name;
            params.alpha = cfg.alpha;
            const EdgeLbpDescriptor desc =
                compute_descriptor(mesh, h, params, cfg.workers);
            save_descriptor(desc, (fs::path(cfg.output_dir) / (id + ".elbp")).string());
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            rows.push_back({id, desc.n_vertices, desc.n_admissible, ms});
            std::cout << id << ": n_v=" << desc.n_vertices
                      << " admissible=" << desc.n_admissible << " r_max=" << params.r_max
                      << " (" << ms << " ms)\n";
        } catch (const Error& e) {
            ++failures;
            std::cerr << file << ": " << e.what() << "\n";
        }
    }
    const double total_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - run_start)
                                .count();

    std::ofstream manifest(fs::path(cfg.output_dir) / "manifest.csv");
    if (!manifest) throw Error("cannot write the manifest");
    manifest << "model_id,n_vertices,n_admissible,wall_ms\n";
    char buf[48];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.3f", row.wall_ms);
        manifest << row.id << ',' << row.n_vertices << ',' << row.n_admissible << ','
                 << buf << '\n';
    }
    std::snprintf(buf, sizeof(buf), "%.3f", total_ms);
    manifest << "# total_ms " << buf << '\n';

    if (failures)
        std::cerr << failures << " of " << files.size() << " meshes failed\n";
    return failures ? 1 : 0;
}

int cmd_distmat(const RunConfig& cfg, const std::string& dir_flag,
                const std::string& out_flag) {
    cfg.validate();
    const fs::path dir = dir_flag.empty() ? cfg.output_dir : dir_flag;
    std::vector<std::string> files;
    if (fs::is_directory(dir)) {
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".elbp") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error("no .elbp descriptors in '" + dir.string() + "'");

    std::vector<EdgeLbpDescriptor> descriptors;
    std::vector<std::string> ids;
    for (const auto& file : files) {
        descriptors.push_back(load_descriptor(file));
        ids.push_back(fs::path(file).stem().string());
    }
    const DistanceMatrix dist = distance_matrix(descriptors, ids, cfg.metric);
    const fs::path out = out_flag.empty() ? dir / "distmat.csv" : fs::path(out_flag);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_distance_matrix_csv(dist, out.string());
    std::cout << "wrote " << dist.size() << "x" << dist.size() << " " << cfg.metric
              << " matrix to " << out.string() << "\n";
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& distmat_path,
                 const std::string& labels_path) {
    cfg.validate();
    const DistanceMatrix dist = load_distance_matrix_csv(distmat_path);
    const GroundTruth gt = load_labels_csv(labels_path);
    const RetrievalReport report = evaluate(dist, gt, cfg.e_cutoff);

    fs::create_directories(cfg.output_dir);
    const fs::path out(cfg.output_dir);
    save_report_json(report, (out / "report.json").string());
    save_confusion_csv(report.confusion, (out / "confusion.csv").string());
    save_pr_curve_csv(report.pr_curve, (out / "pr_curve.csv").string());
    save_tier_image_ppm(report.tiers, (out / "tiers.ppm").string());

    std::cout << "nn=" << report.nn << " ft=" << report.ft << " st=" << report.st
              << " map=" << report.map << " e=" << report.e_measure
              << " dcg=" << report.dcg << "\n";
    return 0;
}

int cmd_curvature(const RunConfig& cfg, const std::string& mesh_path,
                  const std::string& field_flag, const std::string& out_flag) {
    cfg.validate();
    const std::string field = field_flag.empty() ? cfg.h_name : field_flag;
    const SurfaceTessellation mesh = load_mesh(mesh_path);
    const VertexField values = curvature_field(mesh, field, cfg.averaging_ring_size);
    fs::path out(out_flag);
    if (out.empty()) {
        fs::create_directories(cfg.output_dir);
        out = fs::path(cfg.output_dir) /
              (fs::path(mesh_path).stem().string() + "_" + field + ".csv");
    } else if (out.has_parent_path()) {
        fs::create_directories(out.parent_path());
    }
    export_field_csv(values, out.string());
    std::cout << "wrote " << values.size() << " values to " << out.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"edgeLBP: relief-pattern descriptors and retrieval for surface meshes"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration file");

    // staging area written by flags; only flags the user actually passed are
    // copied onto the effective config (defaults < config file < flags)
    RunConfig flags;
    std::map<std::string, CLI::Option*> given;

    auto* describe = app.add_subcommand("describe", "compute descriptors for meshes");
    describe->fallthrough();
    given["inputs"] = describe->add_option("inputs", flags.inputs, "mesh files or globs");
    given["h"] = describe->add_option("--field", flags.h_name,
                                      "coded field: k1,k2,H,K,SI,curvedness");
    given["p"] = describe->add_option("--p", flags.p, "samples per ring");
    given["n_rings"] = describe->add_option("--n-rings", flags.n_rings, "ring count");
    given["r_max_mode"] = describe->add_option(
        "--r-max-mode", flags.r_max_mode, "explicit | area-fraction | edge-length");
    given["r_max"] = describe->add_option("--r-max", flags.r_max, "radius in mm");
    given["edge_factor"] = describe->add_option("--edge-factor", flags.edge_factor,
                                                "multiplier for edge-length mode");
    given["alpha"] = describe->add_option("--alpha", flags.alpha, "a1 | a2");
    auto add_averaging = [&](CLI::App* cmd) {
        given["averaging_ring_size" + cmd->get_name()] =
            cmd->add_option("--averaging-ring-size", flags.averaging_ring_size,
                            "curvature neighborhood hops");
    };
    auto add_output_dir = [&](CLI::App* cmd) {
        given["output_dir" + cmd->get_name()] =
            cmd->add_option("--output-dir,-o", flags.output_dir, "artifact directory");
    };
    add_averaging(describe);
    add_output_dir(describe);
    given["workers"] = describe->add_option("--workers,-j", flags.workers, "0 = all cores");

    auto* distmat = app.add_subcommand("distmat", "pairwise descriptor distances");
    distmat->fallthrough();
    std::string distmat_dir, distmat_out;
    distmat->add_option("--dir", distmat_dir, "descriptor directory");
    distmat->add_option("--out", distmat_out, "output CSV path");
    given["metric"] = distmat->add_option("--metric", flags.metric,
                                          "bhattacharyya | chi2 | euclidean");
    add_output_dir(distmat);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "score a distance matrix");
    evaluate_cmd->fallthrough();
    std::string eval_distmat, eval_labels;
    evaluate_cmd->add_option("--distmat", eval_distmat, "distance-matrix CSV")
        ->required();
    evaluate_cmd->add_option("--labels", eval_labels, "labels CSV (model_id,class)")
        ->required();
    given["e_cutoff"] =
        evaluate_cmd->add_option("--e-cutoff", flags.e_cutoff, "e-measure window");
    add_output_dir(evaluate_cmd);

    auto* curvature_cmd =
        app.add_subcommand("curvature", "export a per-vertex curvature field");
    curvature_cmd->fallthrough();
    std::string curv_mesh, curv_field, curv_out;
    curvature_cmd->add_option("mesh", curv_mesh, "mesh file")->required();
    curvature_cmd->add_option("--field", curv_field, "k1,k2,H,K,SI,curvedness");
    curvature_cmd->add_option("--out", curv_out, "output CSV path");
    add_averaging(curvature_cmd);
    add_output_dir(curvature_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (given["inputs"]->count()) cfg.inputs = flags.inputs;
        if (given["h"]->count()) cfg.h_name = flags.h_name;
        if (given["p"]->count()) cfg.p = flags.p;
        if (given["n_rings"]->count()) cfg.n_rings = flags.n_rings;
        if (given["r_max_mode"]->count()) cfg.r_max_mode = flags.r_max_mode;
        if (given["r_max"]->count()) cfg.r_max = flags.r_max;
        if (given["edge_factor"]->count()) cfg.edge_factor = flags.edge_factor;
        if (given["alpha"]->count()) cfg.alpha = flags.alpha;
        if (given["metric"]->count()) cfg.metric = flags.metric;
        if (given["e_cutoff"]->count()) cfg.e_cutoff = flags.e_cutoff;
        if (given["workers"]->count()) cfg.workers = flags.workers;
        auto passed = [&](const std::string& key) {
            const auto it = given.find(key);
            return it != given.end() && it->second->count() > 0;
        };
        for (const auto* cmd : {describe, distmat, evaluate_cmd, curvature_cmd}) {
            if (!cmd->parsed()) continue;
            const std::string& name = cmd->get_name();
            if (passed("averaging_ring_size" + name))
                cfg.averaging_ring_size = flags.averaging_ring_size;
            if (passed("output_dir" + name)) cfg.output_dir = flags.output_dir;
        }

        if (describe->parsed()) return cmd_describe(cfg);
        if (distmat->parsed()) return cmd_distmat(cfg, distmat_dir, distmat_out);
        if (evaluate_cmd->parsed()) return cmd_evaluate(cfg, eval_distmat, eval_labels);
        if (curvature_cmd->parsed()) return cmd_curvature(cfg, curv_mesh, curv_field, curv_out);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
