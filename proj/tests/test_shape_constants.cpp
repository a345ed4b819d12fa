#include <doctest.h>

#include <cmath>

#include "wfpp/shape_constants.hpp"
#include "wfpp/sphere_grid.hpp"

using namespace wfpp;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_SUITE("shape_constants") {

TEST_CASE("circle directions are unit and evenly spread") {
    auto dirs = circle_directions(8);
    REQUIRE(dirs.size() == 8);
    for (const RVec& u : dirs) CHECK(norm2(u) == doctest::Approx(1.0));
    CHECK(dirs[0][0] == doctest::Approx(1.0));
    CHECK(dirs[2][1] == doctest::Approx(1.0));  // quarter turn
}

TEST_CASE("icosphere refinement meets the size floor") {
    Icosphere ico = icosphere_at_least(100);
    CHECK(ico.vertices.size() >= 100);
    for (const RVec& v : ico.vertices) CHECK(norm2(v) == doctest::Approx(1.0));
    REQUIRE(!ico.faces.empty());
    for (const auto& f : ico.faces)
        for (int idx : f) CHECK(idx < static_cast<int>(ico.vertices.size()));
    auto [face, bary] = ico.locate(normalized(RVec{1.0, 2.0, 3.0}));
    CHECK(face >= 0);
    CHECK(bary[0] + bary[1] + bary[2] == doctest::Approx(1.0));
}

TEST_CASE("sphere extrema find axis and diagonal of the l1 gauge") {
    Norm l1 = Norm::l1(2);
    SphereExtrema ex =
        extremize_on_sphere(2, [&](const RVec& u) { return l1(u); }, 2048);
    CHECK(ex.max_value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
    CHECK(ex.min_value == doctest::Approx(1.0).epsilon(1e-5));
    REQUIRE(!ex.max_directions.empty());
    RVec umax = ex.max_directions.front();
    CHECK(std::abs(std::abs(umax[0]) - std::sqrt(0.5)) < 1e-2);
}

TEST_CASE("shape constants for round and scaled balls") {
    ShapeConstants c1 = compute_shape_constants(Norm::euclidean(2), 1024);
    CHECK(c1.rho_upper == doctest::Approx(1.0));
    CHECK(c1.rho_lower == doctest::Approx(1.0));
    ShapeConstants c2 = compute_shape_constants(Norm::scaled(Norm::euclidean(2), 2.0), 1024);
    CHECK(c2.rho_upper == doctest::Approx(0.5));
    CHECK(c2.rho_lower == doctest::Approx(0.5));
    ShapeConstants c3 = compute_shape_constants(Norm::l1(2), 4096);
    CHECK(c3.rho_upper == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(c3.rho_lower == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
}

TEST_CASE("lambda reproduces the half circumference") {
    AlphaWeight unit(0.5, SphereProfile::constant(2, 1.0));
    Norm mu = Norm::euclidean(2);
    LambdaReport rep = compute_lambda_report(unit, mu, 512);
    CHECK(rep.value == doctest::Approx(kPi).epsilon(1e-6));
    CHECK(rep.error_estimate < 1e-3);
    CHECK(rep.resolutions.size() == rep.values.size());
    CHECK(rep.resolutions.size() >= 3);

    AlphaWeight twice(0.5, SphereProfile::constant(2, 2.0));
    CHECK(compute_lambda(twice, mu, 512) == doctest::Approx(kPi / 2).epsilon(1e-6));
    Norm mu2 = Norm::scaled(Norm::euclidean(2), 2.0);
    CHECK(compute_lambda(unit, mu2, 512) == doctest::Approx(2 * kPi).epsilon(1e-6));
}

TEST_CASE("lambda in three dimensions approaches the great-circle bound") {
    AlphaWeight unit(0.5, SphereProfile::constant(3, 1.0));
    double lam = compute_lambda(unit, Norm::euclidean(3), 400);
    CHECK(lam == doctest::Approx(kPi).epsilon(0.05));
}

TEST_CASE("lipschitz diagnostics accept a constant profile") {
    AlphaWeight f(0.5, SphereProfile::constant(2, 1.0));
    LipschitzReport rep = check_lipschitz(f, 2000, 3);
    CHECK(rep.max_sphere_ratio <= 1e-9);
    CHECK(rep.full_space_violations == 0);
    CHECK(rep.consistent);
}

TEST_CASE("lipschitz diagnostics see variation in a norm-power profile") {
    AlphaWeight f(0.5, SphereProfile::norm_power(Norm::l1(2), 1.0));
    LipschitzReport rep = check_lipschitz(f, 2000, 3);
    CHECK(rep.max_sphere_ratio > 0.1);
    CHECK(rep.full_space_violations == 0);
}

}  // TEST_SUITE
