// Acceptance checks for the growth engine and the deterministic metric.
// Each check pins its own tolerances and time budget and prints one
// PASS/FAIL line; the exit status is the number of failures.
//
// Usage: wfpp_acceptance [criterion 1..13] [path-to-wfpp-cli]

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wfpp/config_json.hpp"
#include "wfpp/dmetric.hpp"
#include "wfpp/engine.hpp"
#include "wfpp/experiments.hpp"
#include "wfpp/geometry.hpp"
#include "wfpp/rng.hpp"
#include "wfpp/shape_constants.hpp"
#include "wfpp/stats.hpp"

using namespace wfpp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string g_cli_path;  // optional, used by the determinism check

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return std::string(buf);
}

AlphaWeight const_weight(int dim, double alpha, double value = 1.0) {
    return AlphaWeight(alpha, SphereProfile::constant(dim, value));
}

// ---------------------------------------------------------------- criterion 1

ClusterState state_from_edges(const std::vector<Edge>& order) {
    ClusterState st;
    st.dim = 2;
    st.root = Vertex{};
    st.vertex_times[st.root] = 0.0;
    double t = 0.0;
    for (const Edge& e : order) {
        t += 0.1;
        st.edges.push_back({e, t});
        for (const Vertex& v : {e.a, e.b()})
            if (!st.vertex_times.count(v)) st.vertex_times[v] = t;
    }
    st.clock = t;
    return st;
}

Outcome check_sampler_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ClusterState> states;
    states.push_back(state_from_edges({}));
    states.push_back(state_from_edges({Edge(Vertex{0, 0}, 0)}));
    states.push_back(state_from_edges({Edge(Vertex{0, 0}, 0), Edge(Vertex{1, 0}, 0)}));
    states.push_back(state_from_edges({Edge(Vertex{0, 0}, 0), Edge(Vertex{0, 0}, 1)}));
    states.push_back(state_from_edges({Edge(Vertex{0, 0}, 0), Edge(Vertex{0, 0}, 1),
                                       Edge(Vertex{1, 0}, 1), Edge(Vertex{0, 1}, 0),
                                       Edge(Vertex{1, 0}, 0), Edge(Vertex{0, 1}, 1)}));
    std::vector<AlphaWeight> weights{
        const_weight(2, 0.0), const_weight(2, 1.5),
        AlphaWeight(0.5, SphereProfile::norm_power(Norm::l1(2), 1.0))};

    const int replicates = 100000;
    double min_p = 1.0;
    int combos = 0;
    for (const ClusterState& st : states) {
        for (const AlphaWeight& f : weights) {
            std::vector<Edge> bd = boundary_edges(st.edge_list(), st.vertices(), 2);
            std::vector<double> probs(bd.size());
            double total = 0.0;
            for (std::size_t i = 0; i < bd.size(); ++i) total += probs[i] = edge_weight(f, bd[i], 2);
            for (double& p : probs) p /= total;

            RunConfig cfg;
            cfg.dim = 2;
            cfg.weight = f;
            cfg.seed = 811;
            cfg.stop = StopRule::edges(st.edges.size() + 1);
            std::vector<std::uint64_t> counts(bd.size(), 0);
            for (int rep = 0; rep < replicates; ++rep) {
                FppSimulation sim(cfg, st, std::uint64_t(rep) + 1);
                if (!sim.step()) return {false, "resumed simulation refused to step"};
                Edge next = sim.state().edges.back().edge;
                auto it = std::lower_bound(bd.begin(), bd.end(), next);
                if (it == bd.end() || *it != next)
                    return {false, "absorbed an edge outside the boundary"};
                ++counts[std::size_t(it - bd.begin())];
            }
            ChiSquareResult chi = chi_square_test(counts, probs);
            min_p = std::min(min_p, chi.p_value);
            ++combos;
        }
    }
    double secs = seconds_since(t0);
    bool pass = min_p > 0.001 && secs < 60.0;
    return {pass, fmt("min p=%.4f over %d state/weight pairs at %d replicates (%.1fs, limit 60s)",
                      min_p, combos, replicates, secs)};
}

// ---------------------------------------------------------------- criterion 2

Outcome check_scaling() {
    auto t0 = std::chrono::steady_clock::now();
    Norm euclid = Norm::euclidean(2);
    CounterStream pair_stream(99, 7);
    double worst = 0.0;
    int checks = 0;
    for (double alpha : {-1.0, 0.0, 0.5, 2.0}) {
        for (int prof = 0; prof < 2; ++prof) {
            AlphaWeight f = prof == 0
                                ? const_weight(2, alpha)
                                : AlphaWeight(alpha, SphereProfile::norm_power(Norm::l1(2), 1.0));
            for (double r : {0.5, 2.0}) {
                for (int k = 0; k < 10; ++k) {
                    RVec z, w;
                    do {
                        double rz = 0.6 + 0.6 * pair_stream.uniform();
                        double az = 2.0 * M_PI * pair_stream.uniform();
                        double rw = 0.6 + 0.6 * pair_stream.uniform();
                        double aw = 2.0 * M_PI * pair_stream.uniform();
                        z = {rz * std::cos(az), rz * std::sin(az)};
                        w = {rw * std::cos(aw), rw * std::sin(aw)};
                    } while (norm2({z[0] - w[0], z[1] - w[1]}) < 0.4);
                    ScalingReport rep = scaling_check(f, euclid, z, w, r, 0.02);
                    worst = std::max(worst, rep.relative_discrepancy);
                    ++checks;
                }
            }
        }
    }
    double secs = seconds_since(t0);
    bool pass = worst <= 0.03 && secs < 120.0;
    return {pass, fmt("max |D(rz,rw) - r^(1-a) D(z,w)| / D = %.4f%% over %d checks "
                      "(tolerance 3%%, %.1fs, limit 120s)",
                      100.0 * worst, checks, secs)};
}

// ---------------------------------------------------------------- criterion 3

Outcome check_cylinder_closed_form() {
    auto t0 = std::chrono::steady_clock::now();
    struct Combo { double alpha, q, s, kappa; };
    Norm euclid = Norm::euclidean(2);
    double worst = 0.0;
    std::string parts;
    for (Combo c : {Combo{2.0, 2.0, 2.0, 1.0}, Combo{3.0, 1.5, 3.0, 1.0},
                    Combo{2.0, 2.0, 2.0, 2.0}}) {
        CylinderSpec spec = default_cylinder(2, c.s);
        AdmissibleProfile prof;
        prof.kappa_upper_s = c.kappa;
        prof.kappa_lower_s = c.kappa;
        AlphaWeight f = cylinder_weight(spec, prof, c.alpha);
        GridRegion region;
        region.h = 0.02;
        region.norm = cylinder_norm(spec);
        region.r_in = 0.5;
        region.r_out = c.q + 0.5;
        double num = d_distance_restricted({1.0, 0.0}, {c.q, 0.0}, f, euclid, region);
        double closed = cylinder_distance_closed_form(c.q, c.alpha, c.kappa);
        double rel = std::abs(num - closed) / closed;
        worst = std::max(worst, rel);
        parts += fmt("%s%.6f vs %.6f", parts.empty() ? "" : ", ", num, closed);
    }
    double secs = seconds_since(t0);
    bool pass = worst <= 0.015 && secs < 120.0;
    return {pass, fmt("face-to-face %s; max rel err %.3f%% (tolerance 1.5%%, %.1fs, limit 120s)",
                      parts.c_str(), 100.0 * worst, secs)};
}

// ---------------------------------------------------------------- criterion 4

Outcome check_tube_bounds() {
    auto t0 = std::chrono::steady_clock::now();
    TubeBounds tb = tube_distance_bounds(2.0, 2.0, 2.0, 0.0, 1.0, 1.0);
    if (std::abs(tb.upper - 1.5) > 1e-9 || std::abs(tb.ball_lower - 0.75) > 1e-9 ||
        std::abs(tb.global_lower - 0.7) > 1e-9)
        return {false, fmt("closed forms off: %.6f %.6f %.6f (want 1.5 0.75 0.7)", tb.upper,
                           tb.ball_lower, tb.global_lower)};

    CylinderSpec spec = default_cylinder(2, 2.0);
    AdmissibleProfile prof;  // kappa 1 on the whole shell
    AlphaWeight f = cylinder_weight(spec, prof, 2.0);
    Norm euclid = Norm::euclidean(2);

    // Exit path along the shell and out through the face.
    PLPath exit_path({{0.0, 2.0}, {1.0, 2.0}, {2.0, 2.0}});
    double ub = d_length(exit_path, f, euclid);
    bool ok_upper = ub <= tb.upper * 1.02;

    std::vector<RVec> zs{{1.0, 0.0}, {0.0, 2.0}};
    std::vector<RVec> ws{{0.0, 4.0}, {1.0, 4.0}};
    GridRegion tube;
    tube.h = 0.02;
    tube.norm = cylinder_norm(spec);
    tube.r_out = 2.0;
    double min_restricted = 1e300;
    for (const RVec& z : zs)
        for (const RVec& w : ws)
            min_restricted = std::min(min_restricted, d_distance_restricted(z, w, f, euclid, tube));
    bool ok_ball = min_restricted >= tb.ball_lower * 0.98;

    GridRegion open_region;
    open_region.h = 0.03;
    open_region.r_out = 5.0;
    GeodesicGrid open_grid(2, open_region);
    double min_open = 1e300;
    for (const RVec& z : zs)
        for (const RVec& w : ws)
            min_open = std::min(min_open, d_distance(z, w, f, euclid, open_grid));
    bool ok_global = min_open >= tb.global_lower * 0.98;

    double secs = seconds_since(t0);
    bool pass = ok_upper && ok_ball && ok_global;
    return {pass, fmt("exit path %.4f <= 1.53; restricted min %.4f >= %.4f; "
                      "unrestricted min %.4f >= %.4f (%.1fs)",
                      ub, min_restricted, tb.ball_lower * 0.98, min_open,
                      tb.global_lower * 0.98, secs)};
}

// ---------------------------------------------------------------- criterion 5

Outcome check_sandwich() {
    auto t0 = std::chrono::steady_clock::now();
    Norm euclid = Norm::euclidean(2);
    CounterStream stream(505, 1);
    int violations = 0;
    const int draws = 100;
    for (int k = 0; k < draws; ++k) {
        double alpha = -1.0 + 1.9 * stream.uniform();
        AlphaWeight f =
            stream.below(2) == 0
                ? const_weight(2, alpha, 0.5 + 1.5 * stream.uniform())
                : AlphaWeight(alpha, SphereProfile::norm_power(Norm::l1(2), 1.0,
                                                               0.5 + 1.5 * stream.uniform()));
        RVec z, w;
        do {
            double rz = 0.5 + stream.uniform();
            double az = 2.0 * M_PI * stream.uniform();
            double rw = 0.5 + stream.uniform();
            double aw = 2.0 * M_PI * stream.uniform();
            z = {rz * std::cos(az), rz * std::sin(az)};
            w = {rw * std::cos(aw), rw * std::sin(aw)};
        } while (norm2({z[0] - w[0], z[1] - w[1]}) < 0.3);
        SandwichReport rep = sandwich_check(f, euclid, z, w, 0.02);
        if (!rep.ordered) ++violations;
    }
    double secs = seconds_since(t0);
    return {violations == 0,
            fmt("%d violations of phi <= D <= chord over %d random (z, w, alpha, profile) "
                "draws (%.1fs)",
                violations, draws, secs)};
}

// ---------------------------------------------------------------- criterion 6

Outcome check_dball() {
    auto t0 = std::chrono::steady_clock::now();
    DBall ball = trace_d_ball(const_weight(2, 0.5), Norm::euclidean(2), 1.0, 256);
    double worst = 0.0;
    for (double r : ball.radii) worst = std::max(worst, std::abs(r - 0.25) / 0.25);
    double secs = seconds_since(t0);
    bool pass = ball.radii.size() == 256 && worst <= 0.02;
    return {pass, fmt("max radius error %.3f%% across 256 directions (tolerance 2%%, %.1fs)",
                      100.0 * worst, secs)};
}

// ---------------------------------------------------------------- criterion 7

Outcome check_urn() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec;
    spec.kind = "urn_d1";
    spec.engine_config.dim = 1;
    spec.engine_config.weight = const_weight(1, 1.0);
    spec.engine_config.seed = 2026;
    spec.urn_steps = 20;
    spec.replicates = 100000;
    UrnReport rep = run_urn_d1(spec);
    double secs = seconds_since(t0);
    bool pass = rep.tv_distance < 0.01 && secs < 30.0;
    return {pass, fmt("total variation %.4f vs exact urn law at N=20, 1e5 replicates "
                      "(tolerance 0.01, %.1fs, limit 30s)",
                      rep.tv_distance, secs)};
}

// ---------------------------------------------------------------- criterion 8

Outcome check_lambda() {
    auto t0 = std::chrono::steady_clock::now();
    LambdaReport rep = compute_lambda_report(const_weight(2, 0.5), Norm::euclidean(2), 1024);
    double secs = seconds_since(t0);
    bool pass = rep.value >= M_PI - 0.02 && rep.value <= M_PI + 0.02 &&
                rep.resolutions.size() >= 2;
    return {pass, fmt("lambda = %.8f (pi %+.2e) with %zu-level extrapolation (%.1fs)", rep.value,
                      rep.value - M_PI, rep.resolutions.size(), secs)};
}

// ---------------------------------------------------------------- criterion 9

Outcome check_cone_thresholds() {
    ConeConditionReport rep = check_cone_conditions(2.0, 10.0, 1.0, 1.0);
    bool ok_t1 = std::abs(rep.t1 - 3.0) < 1e-12;
    bool ok_t2 = std::abs(rep.t2 - 5.0) < 1e-12;
    double thr = alpha_near_1_threshold(1.0, 1.0, M_PI);
    bool ok_thr = std::abs(thr - (1.0 + 1.0 / M_PI)) < 1e-12;
    return {ok_t1 && ok_t2 && ok_thr,
            fmt("T1(2) = %.12f, T2(2) = %.12f, alpha threshold %.12f (want 3, 5, 1 + 1/pi)",
                rep.t1, rep.t2, thr)};
}

// --------------------------------------------------------------- criterion 10

Outcome check_covering() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec;
    spec.kind = "covering";
    spec.engine_config.dim = 2;
    spec.engine_config.weight = const_weight(2, 1.0);
    spec.engine_config.seed = 4100;
    spec.annuli = {10, 20};
    spec.covering_factor = 8.0;
    spec.replicates = 50;
    CoveringReport rep = run_covering(spec);
    double secs = seconds_since(t0);
    bool pass = secs < 300.0;
    std::string detail;
    for (std::size_t i = 0; i < rep.annuli.size(); ++i) {
        if (rep.swallow_fraction[i] < 0.95) pass = false;
        detail += fmt("%sn=%d: %.2f", detail.empty() ? "" : ", ", rep.annuli[i],
                      rep.swallow_fraction[i]);
    }
    return {pass, fmt("swallow fraction %s at factor 8, 50 replicates "
                      "(threshold 0.95 each, %.1fs, limit 300s)",
                      detail.c_str(), secs)};
}

// --------------------------------------------------------------- criterion 11

Outcome check_cone_trapping() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec spec;
    spec.kind = "cone";
    spec.engine_config.dim = 2;
    spec.engine_config.seed = 4111;
    spec.cone.alpha = 3.0;
    spec.cone.aspect = 8.0;  // above the almost-sure threshold for alpha 3
    spec.cone.kappa_upper = 1.0;
    spec.cone.kappa_lower = 1.0;
    spec.replicates = 100;
    spec.edges_per_run = 100000;
    spec.tail_fraction = 0.10;
    spec.tail_threshold = 0.99;
    ConeReport wide = run_cone(spec);

    ExperimentSpec control = spec;
    control.cone.aspect = 1.01;
    ConeReport narrow = run_cone(control);

    double secs = seconds_since(t0);
    bool pass = wide.pass_fraction >= 0.95 && narrow.pass_fraction < wide.pass_fraction &&
                secs < 900.0;
    return {pass, fmt("tail containment pass fraction %.2f at aspect 8 vs %.2f at aspect 1.01 "
                      "(want >= 0.95 and strictly lower control, %.1fs, limit 900s)",
                      wide.pass_fraction, narrow.pass_fraction, secs)};
}

// --------------------------------------------------------------- criterion 12

bool run_cli(const std::string& args) {
    std::string cmd = "\"" + g_cli_path + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

bool trees_identical(const fs::path& a, const fs::path& b, std::string* why) {
    std::vector<fs::path> rel_a, rel_b;
    for (auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a));
    for (auto& entry : fs::recursive_directory_iterator(b))
        if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b));
    std::sort(rel_a.begin(), rel_a.end());
    std::sort(rel_b.begin(), rel_b.end());
    if (rel_a != rel_b) {
        *why = "file lists differ";
        return false;
    }
    for (const fs::path& rel : rel_a) {
        std::ifstream fa(a / rel, std::ios::binary), fb(b / rel, std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str()) {
            *why = "content differs in " + rel.string();
            return false;
        }
    }
    return true;
}

Outcome check_determinism() {
    if (g_cli_path.empty())
        return {false, "cli binary path not provided (argv[2] or WFPP_CLI)"};
    auto t0 = std::chrono::steady_clock::now();
    fs::path root = fs::temp_directory_path() / "wfpp_acceptance_12";
    fs::remove_all(root);
    fs::create_directories(root);

    std::ofstream(root / "sim.json") << R"({
        "dim": 2, "seed": 42,
        "weight": {"alpha": 0.5, "profile": "const:1"},
        "stop": {"edges": 20000},
        "snapshots": {"steps": [1000, 5000], "times": [1.0]}
    })";
    std::ofstream(root / "urn.json") << R"({
        "kind": "urn_d1", "replicates": 20000, "urn_steps": 12,
        "engine": {"dim": 1, "seed": 7,
                   "weight": {"alpha": 1.0, "profile": "const:1"},
                   "stop": {"edges": 1}}
    })";

    std::string sim_cfg = (root / "sim.json").string();
    std::string urn_cfg = (root / "urn.json").string();
    for (const char* rep : {"1", "2"}) {
        if (!run_cli("--out \"" + (root / (std::string("sim") + rep)).string() +
                     "\" simulate --config \"" + sim_cfg + "\" --render --binary"))
            return {false, "simulate invocation failed"};
        if (!run_cli("--out \"" + (root / (std::string("urn") + rep)).string() +
                     "\" urn --config \"" + urn_cfg + "\""))
            return {false, "urn invocation failed"};
    }
    std::string why;
    bool sim_ok = trees_identical(root / "sim1", root / "sim2", &why);
    std::string sim_why = why;
    bool urn_ok = sim_ok && trees_identical(root / "urn1", root / "urn2", &why);
    double secs = seconds_since(t0);
    fs::remove_all(root);
    if (!sim_ok) return {false, "simulate outputs differ: " + sim_why};
    if (!urn_ok) return {false, "urn outputs differ: " + why};
    return {true, fmt("repeated simulate and urn invocations are byte-identical (%.1fs)", secs)};
}

// --------------------------------------------------------------- criterion 13

Outcome check_throughput() {
    RunConfig cfg;
    cfg.dim = 2;
    cfg.weight = const_weight(2, 0.5);
    cfg.seed = 1313;
    cfg.stop = StopRule::edges(1000000);
    auto t0 = std::chrono::steady_clock::now();
    RunResult res = run_fpp(cfg);
    double secs = seconds_since(t0);
    bool pass = res.state.edges.size() == 1000000 && secs < 10.0;
    return {pass, fmt("1e6 edges in %.2fs (%.2f Medges/s, limit 10s)", secs,
                      1.0 / std::max(secs, 1e-9))};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria{
        {"sampler-equivalence", check_sampler_equivalence},
        {"metric-scaling", check_scaling},
        {"cylinder-closed-form", check_cylinder_closed_form},
        {"tube-bounds", check_tube_bounds},
        {"sandwich-bounds", check_sandwich},
        {"metric-ball", check_dball},
        {"urn-law", check_urn},
        {"lambda", check_lambda},
        {"cone-thresholds", check_cone_thresholds},
        {"annulus-covering", check_covering},
        {"cone-trapping", check_cone_trapping},
        {"cli-determinism", check_determinism},
        {"throughput", check_throughput},
    };

    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > int(criteria.size())) {
            std::fprintf(stderr, "criterion out of range: %s\n", argv[1]);
            return 64;
        }
    }
    if (argc > 2) g_cli_path = argv[2];
    if (g_cli_path.empty())
        if (const char* env = std::getenv("WFPP_CLI")) g_cli_path = env;

    int failures = 0;
    for (int k = 1; k <= int(criteria.size()); ++k) {
        if (only != 0 && k != only) continue;
        Outcome out;
        try {
            out = criteria[std::size_t(k - 1)].fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%2d] %s %s: %s\n", k, out.pass ? "PASS" : "FAIL",
                    criteria[std::size_t(k - 1)].name, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
