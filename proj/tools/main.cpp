#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wfpp/config_json.hpp"
#include "wfpp/dmetric.hpp"
#include "wfpp/experiments.hpp"
#include "wfpp/parallel.hpp"
#include "wfpp/render.hpp"
#include "wfpp/shape_constants.hpp"
#include "wfpp/snapshot_io.hpp"

namespace {

using nlohmann::json;

void emit_error(const std::string& category, const std::string& message) {
    json err{{"category", category}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::int64_t seed = -1;
    bool has_seed() const { return seed >= 0; }
};

/// Final config document: file (or fallback) + --set overrides + forced keys.
std::string resolve_config(const CommonArgs& args, const std::string& fallback,
                           const std::vector<std::string>& forced) {
    std::string text = args.config_path.empty() ? fallback : wfpp::read_text_file(args.config_path);
    std::vector<std::string> overrides = args.sets;
    overrides.insert(overrides.end(), forced.begin(), forced.end());
    return wfpp::apply_overrides(text, overrides);
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    std::cout << path.string() << "\n";
}

wfpp::ExperimentSpec experiment_from(const CommonArgs& args, const std::string& kind,
                                     const std::string& fallback) {
    std::vector<std::string> forced{"kind=\"" + kind + "\""};
    if (args.has_seed()) forced.push_back("engine.seed=" + std::to_string(args.seed));
    return wfpp::parse_experiment_spec(resolve_config(args, fallback, forced));
}

void cmd_simulate(const CommonArgs& args, const std::filesystem::path& dir, bool binary,
                  bool render, const std::string& colormap) {
    static const char* fallback =
        R"({"dim": 2, "weight": {"alpha": 0.5, "profile": "const:1"}, "stop": {"edges": 20000}})";
    std::vector<std::string> forced;
    if (args.has_seed()) forced.push_back("seed=" + std::to_string(args.seed));
    wfpp::RunConfig cfg = wfpp::parse_run_config(resolve_config(args, fallback, forced));

    wfpp::RunResult res = wfpp::run_fpp(cfg);

    wfpp::write_cluster_csv(std::filesystem::path(dir / "cluster.csv").string(), res.state);
    std::cout << (dir / "cluster.csv").string() << "\n";
    if (binary) {
        wfpp::write_cluster_binary(std::filesystem::path(dir / "cluster.edn").string(), res.state);
        std::cout << (dir / "cluster.edn").string() << "\n";
    }

    char name[32];
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
        wfpp::ClusterState snap = wfpp::cluster_at_snapshot(res.state, res.snapshots[i]);
        wfpp::write_cluster_csv(std::filesystem::path(dir / name).string(), snap);
        std::cout << (dir / name).string() << "\n";
    }

    if (render) {
        wfpp::RenderOptions opt;
        opt.colormap = colormap;
        wfpp::Pixmap img = wfpp::render_cluster(res.state, opt);
        wfpp::write_pixmap(std::filesystem::path(dir / "render.ppm").string(), img);
        std::cout << (dir / "render.ppm").string() << "\n";
    }

    json summary;
    summary["clock"] = res.state.clock;
    summary["dim"] = res.state.dim;
    summary["edges"] = res.state.edges.size();
    if (res.exit_vertex) {
        json v = json::array();
        for (int i = 0; i < res.state.dim; ++i) v.push_back((*res.exit_vertex)[i]);
        summary["exit_vertex"] = v;
    } else {
        summary["exit_vertex"] = nullptr;
    }
    summary["rng_draws"] = res.rng_draws;
    json snaps = json::array();
    for (const wfpp::Snapshot& s : res.snapshots)
        snaps.push_back(json{{"step", s.step}, {"time", s.time}});
    summary["seed"] = cfg.seed;
    summary["snapshots"] = snaps;
    summary["steps"] = res.steps;
    summary["stop_time"] = res.stop_time;
    summary["vertex_cap_hit"] = res.vertex_cap_hit;
    summary["vertices"] = res.state.vertex_times.size();
    write_text(dir / "run.json", summary.dump(2) + "\n");
}

void cmd_dball(const std::filesystem::path& dir, int dim, double alpha,
               const std::string& profile, const std::string& mu, double radius, int directions,
               std::int64_t) {
    wfpp::AlphaWeight f(alpha, wfpp::parse_profile(profile, dim));
    wfpp::Norm nu = wfpp::parse_norm(mu, dim);
    wfpp::DBall ball = wfpp::trace_d_ball(f, nu, radius, directions);
    wfpp::save_dball_csv(std::filesystem::path(dir / "dball.csv").string(), ball);
    std::cout << (dir / "dball.csv").string() << "\n";
    write_text(dir / "dball.json", wfpp::dball_report_json(ball));
}

void cmd_lambda(const std::filesystem::path& dir, int dim, double alpha,
                const std::string& profile, const std::string& mu, int resolution) {
    wfpp::AlphaWeight f(alpha, wfpp::parse_profile(profile, dim));
    wfpp::Norm nu = wfpp::parse_norm(mu, dim);
    wfpp::LambdaReport rep = wfpp::compute_lambda_report(f, nu, resolution);
    json j;
    j["error_estimate"] = rep.error_estimate;
    j["finest_value"] = rep.finest_value;
    j["resolutions"] = rep.resolutions;
    j["value"] = rep.value;
    j["values"] = rep.values;
    write_text(dir / "lambda.json", j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"f-weighted first-passage growth: simulation, metric geometry, experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir;
    int threads = 0;
    app.add_option("--out", out_dir, "output directory")->envname("WFPP_OUT_DIR");
    app.add_option("--threads", threads, "worker thread budget (0 = all cores)");

    CommonArgs common;
    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--config", common.config_path, "JSON config file");
        sc->add_option("--set", common.sets, "dotted-path override key=value (repeatable)");
        sc->add_option("--seed", common.seed, "engine seed override");
        return sc;
    };

    auto* sc_simulate = add_common(app.add_subcommand("simulate", "run the growth engine once"));
    bool sim_binary = false, sim_render = false;
    std::string sim_colormap = "viridis";
    sc_simulate->add_flag("--binary", sim_binary, "also write the compact binary cluster");
    sc_simulate->add_flag("--render", sim_render, "also write a P6 pixmap (d=2)");
    sc_simulate->add_option("--colormap", sim_colormap, "viridis | grayscale | heat");

    auto* sc_dball = app.add_subcommand("dball", "trace a ball of the deterministic metric");
    int db_dim = 2, db_directions = 256;
    double db_alpha = 0.5, db_radius = 1.0;
    std::string db_profile = "const:1", db_mu = "euclidean";
    sc_dball->add_option("--dim", db_dim, "dimension");
    sc_dball->add_option("--alpha", db_alpha, "homogeneity exponent (< 1)");
    sc_dball->add_option("--profile", db_profile, "sphere profile spec");
    sc_dball->add_option("--mu", db_mu, "length-element norm spec");
    sc_dball->add_option("--radius", db_radius, "metric radius to trace");
    sc_dball->add_option("--directions", db_directions, "angular resolution");

    auto* sc_lambda = app.add_subcommand("lambda", "half metric circumference of the unit sphere");
    int lm_dim = 2, lm_resolution = 1024;
    double lm_alpha = 0.5;
    std::string lm_profile = "const:1", lm_mu = "euclidean";
    sc_lambda->add_option("--dim", lm_dim, "dimension");
    sc_lambda->add_option("--alpha", lm_alpha, "homogeneity exponent");
    sc_lambda->add_option("--profile", lm_profile, "sphere profile spec");
    sc_lambda->add_option("--mu", lm_mu, "length-element norm spec");
    sc_lambda->add_option("--resolution", lm_resolution, "finest sphere resolution");

    auto* sc_shape = add_common(
        app.add_subcommand("shape", "limit-shape convergence against the traced metric ball"));
    auto* sc_mu = add_common(
        app.add_subcommand("mu-estimate", "empirical growth shape of the standard model"));
    auto* sc_cone = add_common(app.add_subcommand("cone", "cone containment of the late tail"));
    auto* sc_cover = add_common(app.add_subcommand("cover", "annulus covering at exit times"));
    auto* sc_urn = add_common(app.add_subcommand("urn", "d=1 chain versus the exact urn law"));
    auto* sc_chi = add_common(app.add_subcommand("chi", "shape-fluctuation decay exponent"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage.parse", e.what());
        return 2;
    }

    try {
        wfpp::set_thread_budget(threads);
        std::filesystem::path dir = prepare_out_dir(out_dir);

        if (app.got_subcommand(sc_simulate)) {
            cmd_simulate(common, dir, sim_binary, sim_render, sim_colormap);
        } else if (app.got_subcommand(sc_dball)) {
            cmd_dball(dir, db_dim, db_alpha, db_profile, db_mu, db_radius, db_directions,
                      common.seed);
        } else if (app.got_subcommand(sc_lambda)) {
            cmd_lambda(dir, lm_dim, lm_alpha, lm_profile, lm_mu, lm_resolution);
        } else if (app.got_subcommand(sc_shape)) {
            static const char* fallback =
                R"({"engine": {"dim": 2, "weight": {"alpha": 0, "profile": "const:1"}},
                    "replicates": 8, "times": [16, 64], "direction_bins": 128})";
            wfpp::ShapeReport rep = wfpp::run_limit_shape(experiment_from(common, "limit_shape", fallback));
            write_text(dir / "shape.json", wfpp::shape_report_json(rep));
            wfpp::save_table_csv(std::filesystem::path(dir / "shape_distances.csv").string(),
                                 wfpp::shape_distance_table(rep));
            std::cout << (dir / "shape_distances.csv").string() << "\n";
        } else if (app.got_subcommand(sc_mu)) {
            static const char* fallback =
                R"({"engine": {"dim": 2}, "replicates": 4, "shape_time": 60, "direction_bins": 64})";
            wfpp::MuReport rep = wfpp::run_mu_estimate(experiment_from(common, "mu_estimate", fallback));
            write_text(dir / "mu.json", wfpp::mu_report_json(rep));
            wfpp::save_shape_csv_2d(std::filesystem::path(dir / "mu_shape.csv").string(),
                                    rep.empirical.shape);
            std::cout << (dir / "mu_shape.csv").string() << "\n";
        } else if (app.got_subcommand(sc_cone)) {
            static const char* fallback =
                R"({"engine": {"dim": 2}, "replicates": 20, "edges_per_run": 100000})";
            wfpp::ConeReport rep = wfpp::run_cone(experiment_from(common, "cone", fallback));
            write_text(dir / "cone.json", wfpp::cone_report_json(rep));
        } else if (app.got_subcommand(sc_cover)) {
            static const char* fallback =
                R"({"engine": {"dim": 2, "weight": {"alpha": 1, "profile": "const:1"}},
                    "replicates": 10, "annuli": [5]})";
            wfpp::CoveringReport rep = wfpp::run_covering(experiment_from(common, "covering", fallback));
            write_text(dir / "cover.json", wfpp::covering_report_json(rep));
            wfpp::save_table_csv(std::filesystem::path(dir / "cover.csv").string(),
                                 wfpp::covering_table(rep));
            std::cout << (dir / "cover.csv").string() << "\n";
        } else if (app.got_subcommand(sc_urn)) {
            static const char* fallback =
                R"({"engine": {"dim": 1}, "replicates": 20000, "urn_steps": 20})";
            wfpp::UrnReport rep = wfpp::run_urn_d1(experiment_from(common, "urn_d1", fallback));
            write_text(dir / "urn.json", wfpp::urn_report_json(rep));
            wfpp::save_table_csv(std::filesystem::path(dir / "urn.csv").string(),
                                 wfpp::urn_table(rep));
            std::cout << (dir / "urn.csv").string() << "\n";
        } else if (app.got_subcommand(sc_chi)) {
            static const char* fallback =
                R"({"engine": {"dim": 2, "weight": {"alpha": -1, "profile": "const:1"}},
                    "replicates": 8, "times": [2, 6, 20, 60, 200], "direction_bins": 32})";
            wfpp::ChiReport rep = wfpp::estimate_chi(experiment_from(common, "chi_estimate", fallback));
            write_text(dir / "chi.json", wfpp::chi_report_json(rep));
            wfpp::save_table_csv(std::filesystem::path(dir / "chi.csv").string(),
                                 wfpp::chi_table(rep));
            std::cout << (dir / "chi.csv").string() << "\n";
        }
        return 0;
    } catch (const wfpp::ConfigError& e) {
        emit_error(e.category(), e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("runtime.error", e.what());
        return 4;
    }
}
