#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfpp/stats.hpp"

using namespace wfpp;

TEST_SUITE("stats") {

TEST_CASE("chi square survival function hits the textbook quantiles") {
    CHECK(chi_square_sf(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chi_square_sf(5.991, 2) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chi_square_sf(0.0, 4) == doctest::Approx(1.0));
    CHECK(chi_square_sf(100.0, 2) < 1e-10);
    CHECK(regularized_gamma_p(0.5, 1e9) == doctest::Approx(1.0));
}

TEST_CASE("chi square test accepts matching counts and rejects skewed ones") {
    std::vector<std::uint64_t> fair{2500, 2510, 2490, 2500};
    auto ok = chi_square_test(fair, {0.25, 0.25, 0.25, 0.25});
    CHECK(ok.dof == 3);
    CHECK(ok.p_value > 0.5);

    std::vector<std::uint64_t> skew{4000, 2000, 2000, 2000};
    auto bad = chi_square_test(skew, {0.25, 0.25, 0.25, 0.25});
    CHECK(bad.p_value < 1e-6);
    CHECK(bad.statistic > ok.statistic);
}

TEST_CASE("mean and standard error") {
    MeanReport rep = mean_and_se({1.0, 2.0, 3.0, 4.0});
    CHECK(rep.mean == doctest::Approx(2.5));
    CHECK(rep.count == 4);
    // SE = sd / sqrt(n) with sd^2 = 5/3.
    CHECK(rep.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("bootstrap intervals bracket the estimate deterministically") {
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(0.1 * i);
    auto mean_stat = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / double(v.size());
    };
    BootstrapCI ci = bootstrap_ci(xs, mean_stat, 200, 0.95, 9);
    CHECK(ci.lo <= ci.estimate);
    CHECK(ci.estimate <= ci.hi);
    CHECK(ci.estimate == doctest::Approx(2.45));
    BootstrapCI again = bootstrap_ci(xs, mean_stat, 200, 0.95, 9);
    CHECK(again.lo == ci.lo);
    CHECK(again.hi == ci.hi);
}

TEST_CASE("linear fit recovers exact lines") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y{3.0, 5.0, 7.0, 9.0};
    SlopeFit fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> px{1.0, 10.0, 100.0};
    std::vector<double> py{2.0, 200.0, 20000.0};  // y = 2 x^2
    SlopeFit ll = log_log_slope(px, py);
    CHECK(ll.slope == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("total variation distance") {
    CHECK(total_variation({0.5, 0.5}, {0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(total_variation({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(total_variation({0.6, 0.4}, {0.5, 0.5}) == doctest::Approx(0.1).epsilon(1e-12));
}

}  // TEST_SUITE
