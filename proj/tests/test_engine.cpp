#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "wfpp/engine.hpp"
#include "wfpp/rng.hpp"
#include "wfpp/snapshot_io.hpp"
#include "wfpp/stats.hpp"

using namespace wfpp;

namespace {

RunConfig flat_config(int dim, std::uint64_t seed, StopRule stop) {
    RunConfig cfg;
    cfg.dim = dim;
    cfg.weight = AlphaWeight(0.0, SphereProfile::constant(dim, 1.0));
    cfg.seed = seed;
    cfg.stop = stop;
    return cfg;
}

std::vector<Edge> sorted_edges(const ClusterState& st) {
    std::vector<Edge> es = st.edge_list();
    std::sort(es.begin(), es.end());
    return es;
}

// Exact law of the unordered 3-edge cluster under the weighted chain.
void enumerate_shapes(std::vector<Edge>& cluster, std::vector<Vertex>& verts,
                      const AlphaWeight& f, int depth, double prob,
                      std::map<std::vector<Edge>, double>& law) {
    if (depth == 0) {
        std::vector<Edge> key = cluster;
        std::sort(key.begin(), key.end());
        law[key] += prob;
        return;
    }
    auto bd = boundary_edges(cluster, verts, 2);
    double total = 0.0;
    std::vector<double> wts(bd.size());
    for (std::size_t i = 0; i < bd.size(); ++i) total += wts[i] = edge_weight(f, bd[i], 2);
    for (std::size_t i = 0; i < bd.size(); ++i) {
        cluster.push_back(bd[i]);
        bool added_a = std::find(verts.begin(), verts.end(), bd[i].a) == verts.end();
        bool added_b = std::find(verts.begin(), verts.end(), bd[i].b()) == verts.end();
        if (added_a) verts.push_back(bd[i].a);
        if (added_b) verts.push_back(bd[i].b());
        enumerate_shapes(cluster, verts, f, depth - 1, prob * wts[i] / total, law);
        if (added_b) verts.pop_back();
        if (added_a) verts.pop_back();
        cluster.pop_back();
    }
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("single flat step is uniform over the four incident edges") {
    const int n = 20000;
    std::vector<std::uint64_t> counts(4, 0);
    RunConfig cfg = flat_config(2, 0, StopRule::edges(1));  // weight built once, seeds vary
    for (int r = 0; r < n; ++r) {
        cfg.seed = derive_seed(501, r);
        RunResult res = run_fpp(cfg);
        REQUIRE(res.state.edges.size() == 1);
        auto inc = incident_edges(Vertex{}, 2);
        auto it = std::find(inc.begin(), inc.end(), res.state.edges[0].edge);
        REQUIRE(it != inc.end());
        ++counts[it - inc.begin()];
    }
    auto chi = chi_square_test(counts, {0.25, 0.25, 0.25, 0.25});
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("two steps of the d=1 linear weight favor one side") {
    // After the first edge the outer edge has weight 1.5 against 0.5, so
    // P(both edges on the same side) = 2 * (1/2) * (3/4) = 3/4.
    const int n = 100000;
    int same = 0;
    RunConfig cfg;
    cfg.dim = 1;
    cfg.weight = AlphaWeight(1.0, SphereProfile::constant(1, 1.0));
    cfg.stop = StopRule::edges(2);
    for (int r = 0; r < n; ++r) {
        cfg.seed = derive_seed(733, r);
        RunResult res = run_fpp(cfg);
        REQUIRE(res.state.edges.size() == 2);
        int lo0 = res.state.edges[0].edge.a[0];
        int lo1 = res.state.edges[1].edge.a[0];
        bool right0 = lo0 == 0, right1 = lo1 >= 1;
        bool left0 = lo0 == -1, left1 = lo1 <= -2;
        if ((right0 && right1) || (left0 && left1)) ++same;
    }
    CHECK(double(same) / n == doctest::Approx(0.75).epsilon(0.01));
}

TEST_CASE("eden resume picks the heavier edge with the right odds") {
    ClusterState st;
    st.dim = 1;
    st.clock = 0.3;
    st.edges = {{Edge(Vertex{0}, 0), 0.3}};
    st.vertex_times = {{Vertex{0}, 0.0}, {Vertex{1}, 0.3}};
    AlphaWeight f(1.0, SphereProfile::constant(1, 1.0));

    EdenChain probe(1, f, 1, st);
    auto bd = probe.boundary();
    REQUIRE(bd.size() == 2);
    CHECK(bd[0].first == Edge(Vertex{-1}, 0));
    CHECK(bd[0].second == doctest::Approx(0.5));
    CHECK(bd[1].first == Edge(Vertex{1}, 0));
    CHECK(bd[1].second == doctest::Approx(1.5));
    CHECK(probe.total_boundary_weight() == doctest::Approx(2.0));

    const int n = 40000;
    int right = 0;
    for (int r = 0; r < n; ++r) {
        EdenChain chain(1, f, derive_seed(88, r), st);
        Edge e = chain.step(false);
        if (e == Edge(Vertex{1}, 0)) ++right;
    }
    CHECK(double(right) / n == doctest::Approx(0.75).epsilon(0.012));
}

TEST_CASE("identical config gives identical results") {
    RunConfig cfg = flat_config(2, 9001, StopRule::edges(300));
    cfg.weight = AlphaWeight(0.5, SphereProfile::constant(2, 1.0));
    RunResult a = run_fpp(cfg);
    RunResult b = run_fpp(cfg);
    REQUIRE(a.state.edges.size() == b.state.edges.size());
    for (std::size_t i = 0; i < a.state.edges.size(); ++i) {
        CHECK(a.state.edges[i].edge == b.state.edges[i].edge);
        CHECK(a.state.edges[i].time == b.state.edges[i].time);
    }
    CHECK(a.stop_time == b.stop_time);
    CHECK(a.rng_draws == b.rng_draws);
}

TEST_CASE("doubling the weight halves every absorption time exactly") {
    RunConfig one = flat_config(2, 4242, StopRule::edges(250));
    RunConfig two = one;
    two.weight = AlphaWeight(0.0, SphereProfile::constant(2, 2.0));
    RunResult r1 = run_fpp(one);
    RunResult r2 = run_fpp(two);
    REQUIRE(r1.state.edges.size() == r2.state.edges.size());
    for (std::size_t i = 0; i < r1.state.edges.size(); ++i) {
        CHECK(r1.state.edges[i].edge == r2.state.edges[i].edge);
        CHECK(r2.state.edges[i].time == r1.state.edges[i].time / 2.0);
    }
}

TEST_CASE("frontier stays in step with the boundary of the cluster") {
    RunConfig cfg = flat_config(2, 31, StopRule::edges(1000000));
    cfg.weight = AlphaWeight(0.5, SphereProfile::constant(2, 1.0));
    FppSimulation sim(cfg);
    for (int k = 0; k < 25; ++k) REQUIRE(sim.step());
    ClusterState st = sim.state();
    auto expect = boundary_edges(st.edge_list(), st.vertices(), 2);
    auto frontier = sim.frontier();
    REQUIRE(frontier.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(frontier[i].first == expect[i]);
        CHECK(frontier[i].second > st.clock);  // tentative times are in the future
    }
}

TEST_CASE("snapshots record steps and times consistently") {
    RunConfig cfg = flat_config(2, 77, StopRule::edges(120));
    cfg.snapshots.at_steps = {10, 50};
    cfg.snapshots.at_times = {0.5, 1.0};
    RunResult res = run_fpp(cfg);
    REQUIRE(res.snapshots.size() >= 2);
    for (const Snapshot& s : res.snapshots) {
        ClusterState then = cluster_at_snapshot(res.state, s);
        CHECK(then.edges.size() == s.step);
        CHECK(then.clock == s.time);
        for (const auto& ae : then.edges) CHECK(ae.time <= s.time);
        if (s.step < res.state.edges.size())
            CHECK(res.state.edges[s.step].time > s.time);
    }
    // The step snapshots are present verbatim.
    int with_step_10 = 0, with_step_50 = 0;
    for (const Snapshot& s : res.snapshots) {
        if (s.step == 10) ++with_step_10;
        if (s.step == 50) ++with_step_50;
    }
    CHECK(with_step_10 >= 1);
    CHECK(with_step_50 >= 1);
}

TEST_CASE("radius stop records the unique escaping vertex") {
    RunConfig cfg = flat_config(2, 5150, StopRule::euclid_radius(5.0));
    RunResult res = run_fpp(cfg);
    REQUIRE(res.exit_vertex.has_value());
    CHECK(res.exit_vertex->euclid_norm() > 5.0);
    int outside = 0;
    for (const auto& [v, t] : res.state.vertex_times)
        if (v.euclid_norm() > 5.0) ++outside;
    CHECK(outside == 1);

    RunConfig l1cfg = flat_config(2, 5151, StopRule::norm_radius(3.0, Norm::l1(2)));
    RunResult l1res = run_fpp(l1cfg);
    REQUIRE(l1res.exit_vertex.has_value());
    const Vertex& u = *l1res.exit_vertex;
    CHECK(std::abs(u[0]) + std::abs(u[1]) > 3);
}

TEST_CASE("time stop freezes the clock at the deadline") {
    RunConfig cfg = flat_config(2, 66, StopRule::at_time(1.25));
    RunResult res = run_fpp(cfg);
    CHECK(res.stop_time == 1.25);
    CHECK(res.state.clock == 1.25);
    for (const auto& ae : res.state.edges) CHECK(ae.time <= 1.25);
    CHECK_FALSE(res.exit_vertex.has_value());
}

TEST_CASE("vertex hit and vertex cap") {
    Vertex target{3, 2};
    RunConfig cfg = flat_config(2, 99, StopRule::vertex_hit(target));
    RunResult res = run_fpp(cfg);
    CHECK(res.state.contains_vertex(target));

    RunConfig capped = flat_config(2, 99, StopRule::edges(1000000));
    capped.vertex_cap = 10;
    RunResult capres = run_fpp(capped);
    CHECK(capres.vertex_cap_hit);
    CHECK(capres.state.vertex_times.size() <= 11);
}

TEST_CASE("three-step shape law matches exact enumeration for both samplers") {
    AlphaWeight f(0.0, SphereProfile::constant(2, 1.0));
    std::map<std::vector<Edge>, double> law;
    std::vector<Edge> cluster;
    std::vector<Vertex> verts{Vertex{}};
    enumerate_shapes(cluster, verts, f, 3, 1.0, law);
    double mass = 0.0;
    for (const auto& [k, p] : law) mass += p;
    REQUIRE(mass == doctest::Approx(1.0).epsilon(1e-12));

    const int n = 100000;
    std::map<std::vector<Edge>, double> emp_fpp, emp_eden;
    RunConfig cfg = flat_config(2, 0, StopRule::edges(3));
    for (int r = 0; r < n; ++r) {
        cfg.seed = derive_seed(1601, r);
        emp_fpp[sorted_edges(run_fpp(cfg).state)] += 1.0 / n;
        cfg.seed = derive_seed(1602, r);
        emp_eden[sorted_edges(run_eden_chain(cfg).state)] += 1.0 / n;
    }
    double tv_fpp = 0.0, tv_eden = 0.0;
    for (const auto& [k, p] : law) {
        auto it = emp_fpp.find(k);
        tv_fpp += std::abs((it == emp_fpp.end() ? 0.0 : it->second) - p);
        auto jt = emp_eden.find(k);
        tv_eden += std::abs((jt == emp_eden.end() ? 0.0 : jt->second) - p);
    }
    for (const auto& [k, p] : emp_fpp)
        if (!law.count(k)) tv_fpp += p;  // impossible shapes, if any
    for (const auto& [k, p] : emp_eden)
        if (!law.count(k)) tv_eden += p;
    // Null expectation of the empirical TV at 1e5 draws over ~90 outcomes is
    // about 0.012; a biased sampler plateaus far above the 0.02 cutoff.
    CHECK(tv_fpp / 2 < 0.02);
    CHECK(tv_eden / 2 < 0.02);
}

TEST_CASE("eden chain resumes from its own state") {
    RunConfig cfg;
    cfg.dim = 2;
    cfg.weight = AlphaWeight(0.5, SphereProfile::constant(2, 1.0));
    cfg.seed = 11;
    cfg.stop = StopRule::edges(40);
    RunResult first = run_eden_chain(cfg);
    EdenChain resumed(2, cfg.weight, 12, first.state);
    auto bd_before = resumed.boundary();
    auto expect = boundary_edges(first.state.edge_list(), first.state.vertices(), 2);
    REQUIRE(bd_before.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(bd_before[i].first == expect[i]);
        CHECK(bd_before[i].second == doctest::Approx(edge_weight(cfg.weight, expect[i], 2)));
    }
    for (int k = 0; k < 10; ++k) resumed.step();
    CHECK(resumed.state().edges.size() == 50);
    CHECK(resumed.clock() > first.state.clock);
}

TEST_CASE("passage times are recoverable from the final state") {
    RunConfig cfg = flat_config(2, 314, StopRule::edges(50));
    RunResult res = run_fpp(cfg);
    CHECK(passage_time(res.state, Vertex{}) == doctest::Approx(0.0));
    auto far = passage_time(res.state, Vertex{100, 100});
    CHECK_FALSE(far.has_value());
    int positive = 0;
    for (const auto& [v, t] : res.state.vertex_times)
        if (v != Vertex{} && t > 0.0) ++positive;
    CHECK(positive == int(res.state.vertex_times.size()) - 1);
}

TEST_CASE("explosion profile is monotone and bounded by the ray estimate") {
    AlphaWeight f(3.0, SphereProfile::constant(1, 1.0));
    TauInfinityReport rep = tau_infinity_estimate(f, 1, 17, {1.0, 2.0, 3.0}, 2000);
    REQUIRE(rep.sigma_means.size() == 3);
    CHECK(rep.sigma_means[0] <= rep.sigma_means[1]);
    CHECK(rep.sigma_means[1] <= rep.sigma_means[2]);
    CHECK(rep.tail_mean_bound > 0.0);
    // Mean exit time from [-2, 2] is at most the one-ray bound 8 + 8/27.
    double bound = 8.0 + 8.0 / 27.0;
    CHECK(rep.sigma_means[1] <= bound + 3.0 * rep.sigma_std_errors[1]);

    AlphaWeight sub(1.0, SphereProfile::constant(1, 1.0));
    CHECK_THROWS_AS(tau_infinity_estimate(sub, 1, 17, {1.0}, 10), std::invalid_argument);
}

}  // TEST_SUITE
