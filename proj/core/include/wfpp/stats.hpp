#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace wfpp {

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_sf(double statistic, int dof);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit test of observed counts against expected
/// probabilities (renormalized). Cells with zero expected probability must
/// have zero observed count.
ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& expected_probs);

struct MeanReport {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

MeanReport mean_and_se(const std::vector<double>& xs);

struct BootstrapCI {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int resamples = 0;
    double level = 0.0;
};

/// Percentile bootstrap for a statistic of an iid sample. Deterministic in
/// (xs, resamples, level, seed).
BootstrapCI bootstrap_ci(const std::vector<double>& xs,
                         const std::function<double(const std::vector<double>&)>& statistic,
                         int resamples = 200, double level = 0.95, std::uint64_t seed = 1);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through the given points; needs at least 2 distinct x.
SlopeFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares line through (log x, log y); requires strictly positive data.
SlopeFit log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Total variation distance between two distributions on a shared support.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace wfpp
