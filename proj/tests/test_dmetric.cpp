#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "wfpp/dmetric.hpp"

using namespace wfpp;

namespace {

AlphaWeight weight(double alpha, double c = 1.0) {
    return AlphaWeight(alpha, SphereProfile::constant(2, c));
}

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("dmetric") {

TEST_CASE("path length reduces to arclength over f") {
    Norm euclid = Norm::euclidean(2);
    // Flat weight: length of the segment.
    PLPath seg({{0.0, 0.0}, {3.0, 4.0}});
    CHECK(d_length(seg, weight(0.0), euclid) == doctest::Approx(5.0).epsilon(1e-10));
    // Radial segment under |z|^2: integral of t^-2 from 1 to 2.
    PLPath rad({{1.0, 0.0}, {2.0, 0.0}});
    CHECK(d_length(rad, weight(2.0), euclid) == doctest::Approx(0.5).epsilon(1e-9));
    // Doubling f halves the length.
    CHECK(d_length(seg, weight(0.0, 2.0), euclid) == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("segments through the origin integrate in closed form below alpha one") {
    Norm euclid = Norm::euclidean(2);
    CHECK(radial_d_length({1.0, 0.0}, weight(0.5), euclid) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(radial_d_length({1.0, 0.0}, weight(0.5), Norm::scaled(euclid, 2.0)) ==
          doctest::Approx(4.0).epsilon(1e-12));
    PLPath through({{-1.0, 0.0}, {1.0, 0.0}});
    CHECK(d_length(through, weight(0.5), euclid) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK_THROWS_AS(d_length(through, weight(1.5), euclid), std::domain_error);
}

TEST_CASE("numerical distance is symmetric and satisfies the triangle inequality") {
    AlphaWeight f = weight(0.5);
    Norm euclid = Norm::euclidean(2);
    RVec a{1.0, 0.2}, b{-0.4, 0.9}, c{0.3, -0.8};
    GeodesicGrid grid(2, default_region_for(a, b, 0.5, 0.04));
    DistanceReport ab = d_distance_report(a, b, f, euclid, grid);
    DistanceReport ba = d_distance_report(b, a, f, euclid, grid);
    CHECK(ab.distance == doctest::Approx(ba.distance).epsilon(1e-12));

    double ac = d_distance_restricted(a, c, f, euclid, default_region_for(a, c, 0.5, 0.04));
    double cb = d_distance_restricted(c, b, f, euclid, default_region_for(c, b, 0.5, 0.04));
    CHECK(ab.distance <= ac + cb + 2.0 * ab.error_budget);
}

TEST_CASE("reported path starts and ends at the query points") {
    AlphaWeight f = weight(0.5);
    Norm euclid = Norm::euclidean(2);
    RVec a{0.9, -0.1}, b{-0.2, 0.7};
    GeodesicGrid grid(2, default_region_for(a, b, 0.5, 0.05));
    DistanceReport rep = d_distance_report(a, b, f, euclid, grid);
    REQUIRE(rep.path.points.size() >= 2);
    // The witness joins the query points; orientation is not promised.
    auto gap = [](const RVec& p, const RVec& q) { return norm2({p[0] - q[0], p[1] - q[1]}); };
    const RVec& front = rep.path.points.front();
    const RVec& back = rep.path.points.back();
    bool forward = gap(front, a) < 1e-12 && gap(back, b) < 1e-12;
    bool reversed = gap(front, b) < 1e-12 && gap(back, a) < 1e-12;
    CHECK((forward || reversed));
    CHECK(d_length(rep.path, f, euclid) == doctest::Approx(rep.distance).epsilon(1e-9));
}

TEST_CASE("refining the grid never increases the estimate much") {
    AlphaWeight f = weight(0.5);
    Norm euclid = Norm::euclidean(2);
    RVec a{1.0, 0.0}, b{0.0, 1.0};
    double prev = 1e300;
    for (double h : {0.1, 0.05, 0.025}) {
        double d = d_distance_restricted(a, b, f, euclid, default_region_for(a, b, 0.5, h));
        CHECK(d <= prev + 1e-9);  // estimates are upper bounds that tighten
        prev = d;
    }
    // Flat weight recovers the straight chord.
    double flat =
        d_distance_restricted(a, b, weight(0.0), euclid, default_region_for(a, b, 0.0, 0.05));
    CHECK(flat == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("restricted distance dominates the unrestricted one") {
    AlphaWeight f = weight(0.5);
    Norm euclid = Norm::euclidean(2);
    RVec a{0.8, 0.0}, b{-0.8, 0.0};
    GridRegion wide;
    wide.h = 0.05;
    wide.r_out = 2.0;
    GridRegion tight = wide;
    tight.norm = Norm::linf(2);
    tight.r_out = 0.85;  // forces paths to stay inside the small box
    double free_d = d_distance_restricted(a, b, f, euclid, wide);
    double boxed = d_distance_restricted(a, b, f, euclid, tight);
    CHECK(boxed >= free_d - 1e-12);

    GridRegion roomy = wide;
    roomy.norm = Norm::linf(2);
    double same = d_distance_restricted(a, b, f, euclid, roomy);
    CHECK(same == doctest::Approx(free_d).epsilon(1e-9));
}

TEST_CASE("scaling check is tight for homogeneous weights") {
    AlphaWeight f = weight(0.5);
    Norm euclid = Norm::euclidean(2);
    ScalingReport rep = scaling_check(f, euclid, {1.0, 0.1}, {-0.3, 0.8}, 2.0, 0.04);
    CHECK(rep.r == 2.0);
    CHECK(rep.predicted_scaled == doctest::Approx(rep.base_distance * std::pow(2.0, 0.5)));
    CHECK(rep.relative_discrepancy < 0.03);
}

TEST_CASE("sandwich bounds bracket the numerical distance") {
    AlphaWeight f = weight(0.5);
    Norm euclid = Norm::euclidean(2);
    SandwichReport rep = sandwich_check(f, euclid, {1.0, 0.0}, {0.0, 1.0}, 0.04);
    CHECK(rep.ordered);
    CHECK(rep.phi <= rep.numerical + rep.tolerance);
    CHECK(rep.numerical <= rep.chord_upper + rep.tolerance);
    // The lower envelope only uses the endpoint norms.
    double phi_same = sandwich_phi(1.0, std::sqrt(2.0), 0.5, 1.0, 1.0);
    CHECK(rep.phi == doctest::Approx(phi_same).epsilon(1e-12));
}

TEST_CASE("d-ball of a flat weight is a euclidean circle") {
    DBall ball = trace_d_ball(weight(0.0), Norm::euclidean(2), 0.7, 64);
    REQUIRE(ball.radii.size() == 64);
    for (double r : ball.radii) CHECK(r == doctest::Approx(0.7).epsilon(5e-3));
}

TEST_CASE("d-ball radius for the square-root weight") {
    // Radial geodesics give r(u) = (radius * (1 - alpha))^(1/(1-alpha)).
    DBall ball = trace_d_ball(weight(0.5), Norm::euclidean(2), 1.0, 32);
    for (double r : ball.radii) CHECK(r == doctest::Approx(0.25).epsilon(0.02));
    // Doubling the target radius scales the ball by 2^(1/(1-alpha)) = 4.
    DBall big = trace_d_ball(weight(0.5), Norm::euclidean(2), 2.0, 32);
    for (std::size_t i = 0; i < big.radii.size(); ++i)
        CHECK(big.radii[i] / ball.radii[i] == doctest::Approx(4.0).epsilon(0.04));
    CHECK_THROWS_AS(trace_d_ball(weight(1.5), Norm::euclidean(2), 1.0, 16), std::invalid_argument);
}

TEST_CASE("d-ball csv and json round trips") {
    DBall ball = trace_d_ball(weight(0.5), Norm::euclidean(2), 1.0, 16);
    auto path = temp_path("wfpp_dball_t.csv");
    save_dball_csv(path.string(), ball);
    DBall back = load_dball_csv(path.string());
    REQUIRE(back.radii.size() == ball.radii.size());
    for (std::size_t i = 0; i < ball.radii.size(); ++i) {
        CHECK(back.radii[i] == doctest::Approx(ball.radii[i]).epsilon(1e-12));
        CHECK(back.directions[i][0] == doctest::Approx(ball.directions[i][0]).epsilon(1e-12));
    }
    std::filesystem::remove(path);
    std::string json = dball_report_json(ball);
    CHECK(json.find("\"radius\"") != std::string::npos);
    CHECK(json.find("\"grid_h\"") != std::string::npos);
}

TEST_CASE("cylinder face-to-face distance matches the closed form") {
    struct Row { double q, alpha, kappa; double expect; };
    // (1 - q^(1-alpha)) / (kappa * (alpha - 1))
    for (Row row : {Row{2.0, 2.0, 1.0, 0.5},
                    Row{1.5, 3.0, 1.0, (1.0 - std::pow(1.5, -2.0)) / 2.0},
                    Row{2.0, 2.0, 2.0, 0.25}}) {
        CHECK(cylinder_distance_closed_form(row.q, row.alpha, row.kappa) ==
              doctest::Approx(row.expect).epsilon(1e-12));
    }
}

TEST_CASE("tube bounds at the reference parameters") {
    TubeBounds tb = tube_distance_bounds(2.0, 2.0, 2.0, 0.0, 1.0, 1.0);
    CHECK(tb.upper == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(tb.ball_lower == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(tb.global_lower == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(tb.global_lower <= tb.ball_lower);
    CHECK(tb.ball_lower <= tb.upper);
}

TEST_CASE("grid region guards the origin and endpoint snapping") {
    GridRegion region;
    region.h = 0.1;
    region.r_out = 1.0;
    CHECK_FALSE(region.contains({0.0, 0.0}));
    CHECK(region.contains({0.3, 0.3}));
    CHECK_FALSE(region.contains({1.2, 0.0}));
    CHECK_THROWS_AS(
        d_distance_restricted({3.0, 0.0}, {0.5, 0.0}, weight(0.5), Norm::euclidean(2), region),
        std::domain_error);
}

}  // TEST_SUITE
