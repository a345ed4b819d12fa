#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "wfpp/experiments.hpp"
#include "wfpp/stats.hpp"

using namespace wfpp;

namespace {

ExperimentSpec base_spec(const std::string& kind, int dim, double alpha) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.engine_config.dim = dim;
    spec.engine_config.weight = AlphaWeight(alpha, SphereProfile::constant(dim, 1.0));
    spec.engine_config.seed = 2026;
    return spec;
}

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("urn law is a probability vector with the known two-step values") {
    for (int n : {1, 2, 5, 17, 64}) {
        std::vector<double> law = urn_exact_law(n);
        REQUIRE(law.size() == std::size_t(n) + 1);
        double mass = std::accumulate(law.begin(), law.end(), 0.0);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
    std::vector<double> two = urn_exact_law(2);
    CHECK(two[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
    CHECK(two[2] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    std::vector<double> one = urn_exact_law(1);
    CHECK(one[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("urn runs converge to the exact law and reproduce") {
    ExperimentSpec spec = base_spec("urn_d1", 1, 1.0);
    spec.urn_steps = 6;
    spec.replicates = 20000;
    UrnReport rep = run_urn_d1(spec);
    CHECK(rep.steps == 6);
    CHECK(rep.replicates == 20000);
    REQUIRE(rep.counts.size() == 7);
    std::uint64_t total = std::accumulate(rep.counts.begin(), rep.counts.end(), std::uint64_t{0});
    CHECK(total == 20000);
    CHECK(rep.tv_distance < 0.05);
    CHECK(rep.tv_distance ==
          doctest::Approx(total_variation(rep.empirical, rep.exact)).epsilon(1e-12));

    UrnReport again = run_urn_d1(spec);
    CHECK(again.counts == rep.counts);

    ExperimentSpec wrong = base_spec("urn_d1", 2, 1.0);
    CHECK_THROWS_AS(run_urn_d1(wrong), std::invalid_argument);
}

TEST_CASE("fluctuation exponent recovered from synthetic radial data") {
    RadialSamples samples;
    samples.times = {10.0, 100.0, 1000.0, 10000.0};
    const int reps = 8, bins = 32;
    auto build = [&](auto amplitude) {
        samples.radial.clear();
        for (double t : samples.times) {
            std::vector<std::vector<double>> per_rep;
            for (int r = 0; r < reps; ++r) {
                std::vector<double> row(bins);
                for (int b = 0; b < bins; ++b)
                    row[b] = 1.0 + amplitude(t) * std::sin(2.0 * M_PI * (b + 4.0 * r) / bins);
                per_rep.push_back(row);
            }
            samples.radial.push_back(per_rep);
        }
    };
    build([](double t) { return 1.0 / std::sqrt(t); });
    ChiReport rep = chi_from_radial_samples(samples, 100, 3);
    // Widths decay like t^(-1/2), reported with the opposite sign.
    CHECK(rep.chi_hat == doctest::Approx(0.5).epsilon(0.1));
    REQUIRE(rep.widths.size() == 4);
    CHECK(rep.widths[0] > rep.widths[3]);

    build([](double) { return 0.25; });
    ChiReport flat = chi_from_radial_samples(samples, 100, 3);
    CHECK(std::abs(flat.chi_hat) < 0.05);

    RadialSamples thin = samples;
    thin.times = {10.0, 20.0, 30.0, 40.0};  // spans less than two decades
    CHECK_THROWS_AS(chi_from_radial_samples(thin, 10, 3), std::invalid_argument);
}

TEST_CASE("limit shape runner on a short schedule") {
    ExperimentSpec spec = base_spec("limit_shape", 2, 0.0);
    spec.times = {8.0};
    spec.replicates = 3;
    spec.direction_bins = 64;
    ShapeReport rep = run_limit_shape(spec);
    REQUIRE(rep.times.size() == 1);
    REQUIRE(rep.distances.size() == 1);
    CHECK(rep.distances[0].size() == 3);
    CHECK_FALSE(rep.has_exponent);  // one checkpoint cannot support a slope
    CHECK(rep.seeds.size() == 3);
    for (double d : rep.distances[0]) CHECK(d >= 0.0);

    ExperimentSpec super = base_spec("limit_shape", 2, 1.5);
    super.times = {8.0};
    CHECK_THROWS_AS(run_limit_shape(super), std::invalid_argument);
}

TEST_CASE("covering runner reports per-annulus swallow fractions") {
    ExperimentSpec spec = base_spec("covering", 2, 0.0);
    spec.annuli = {1, 2};
    spec.covering_factor = 8.0;
    spec.replicates = 5;
    CoveringReport rep = run_covering(spec);
    REQUIRE(rep.annuli == std::vector<int>{1, 2});
    REQUIRE(rep.swallow_fraction.size() == 2);
    REQUIRE(rep.swallowed.size() == 2);
    CHECK(rep.replicates == 5);
    CHECK(rep.factor == 8.0);
    for (std::size_t i = 0; i < rep.swallow_fraction.size(); ++i) {
        int hits = 0;
        for (bool s : rep.swallowed[i]) hits += s ? 1 : 0;
        CHECK(rep.swallow_fraction[i] == doctest::Approx(double(hits) / 5.0));
    }
    // Flat weights at factor 8 swallow the innermost annuli every time.
    CHECK(rep.swallow_fraction[0] == doctest::Approx(1.0));
    // The growth condition only applies at alpha >= 1; below it the run is
    // outside the guaranteed regime and carries a warning instead.
    CHECK_FALSE(rep.condition_checked);
    CHECK(rep.warned);
}

TEST_CASE("cone runner pass fraction matches its per-run stats") {
    ExperimentSpec spec = base_spec("cone", 2, 3.0);
    spec.cone.alpha = 3.0;
    spec.cone.aspect = 8.0;
    spec.replicates = 4;
    spec.edges_per_run = 2000;
    spec.tail_fraction = 0.25;
    spec.tail_threshold = 0.95;
    ConeReport rep = run_cone(spec);
    REQUIRE(rep.per_run.size() == 4);
    CHECK(rep.seeds.size() == 4);
    int passes = 0;
    for (const ConeStats& st : rep.per_run) {
        CHECK(st.tail_count > 0);
        double covered = st.in_k + st.in_neg_k + double(st.outside_both) / st.tail_count;
        CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));
        if (std::max(st.in_k, st.in_neg_k) >= spec.tail_threshold) ++passes;
    }
    CHECK(rep.pass_fraction == doctest::Approx(double(passes) / 4.0));
    CHECK(rep.conditions.t1 > 1.0);
}

TEST_CASE("numeric tables round trip and reject ragged input") {
    NumericTable table;
    table.columns = {"n", "value"};
    table.rows = {{1.0, 0.5}, {2.0, 0.25}, {3.0, 0.125}};
    auto path = temp_path("wfpp_table_t.csv");
    save_table_csv(path.string(), table);
    NumericTable back = load_table_csv(path.string());
    CHECK(tables_equal(table, back));
    std::filesystem::remove(path);

    NumericTable ragged;
    ragged.columns = {"a", "b"};
    ragged.rows = {{1.0, 2.0}, {3.0}};
    CHECK_THROWS(save_table_csv(path.string(), ragged));
    CHECK_THROWS(load_table_csv((temp_path("wfpp_absent.csv")).string()));
}

TEST_CASE("spec validation rejects malformed generic fields") {
    ExperimentSpec spec = base_spec("covering", 2, 0.0);
    spec.annuli = {1, 2};
    validate_experiment_spec(spec);  // sane spec passes

    ExperimentSpec bad = spec;
    bad.kind = "bogus";
    CHECK_THROWS_AS(validate_experiment_spec(bad), std::invalid_argument);
    bad = spec;
    bad.replicates = 0;
    CHECK_THROWS_AS(validate_experiment_spec(bad), std::invalid_argument);
    bad = spec;
    bad.annuli = {3, 2};
    CHECK_THROWS_AS(validate_experiment_spec(bad), std::invalid_argument);
    bad = spec;
    bad.tail_fraction = 0.0;
    CHECK_THROWS_AS(validate_experiment_spec(bad), std::invalid_argument);
    bad = spec;
    bad.covering_factor = 0.5;
    CHECK_THROWS_AS(validate_experiment_spec(bad), std::invalid_argument);
    bad = spec;
    bad.direction_bins = 2;
    CHECK_THROWS_AS(validate_experiment_spec(bad), std::invalid_argument);
}

TEST_CASE("fattened boundary of the bare root is the unit square rim") {
    ClusterState st;
    st.dim = 2;
    st.vertex_times = {{Vertex{}, 0.0}};
    std::vector<RVec> rim = fattened_boundary_2d(st);
    REQUIRE(rim.size() >= 4);
    for (const RVec& p : rim) {
        CHECK(std::max(std::abs(p[0]), std::abs(p[1])) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("hausdorff distance basics") {
    std::vector<RVec> a{{0.0, 0.0}, {1.0, 0.0}};
    CHECK(hausdorff_distance(a, a) == doctest::Approx(0.0));
    std::vector<RVec> b{{3.0, 4.0}};
    CHECK(hausdorff_distance({{0.0, 0.0}}, b) == doctest::Approx(5.0));
    std::vector<RVec> c{{0.0, 0.0}};
    // Directed distances differ; the metric takes the larger one.
    CHECK(hausdorff_distance(a, c) == doctest::Approx(1.0));
    CHECK_THROWS_AS(hausdorff_distance({}, a), std::invalid_argument);
}

}  // TEST_SUITE
