#include "wfpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfpp/rng.hpp"

namespace wfpp {

namespace {

/// Lower incomplete gamma by power series; converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Upper incomplete gamma by Lentz continued fraction; for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("incomplete gamma: a must be positive");
    if (x < 0.0) throw std::invalid_argument("incomplete gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi_square_sf(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("chi-square: dof must be positive");
    if (statistic <= 0.0) return 1.0;
    double a = 0.5 * dof;
    double x = 0.5 * statistic;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size() || observed.size() < 2)
        throw std::invalid_argument("chi-square: need matching cell counts, at least 2 cells");
    double total = 0.0;
    double psum = 0.0;
    for (std::uint64_t c : observed) total += double(c);
    for (double p : expected_probs) {
        if (p < 0.0 || !std::isfinite(p))
            throw std::invalid_argument("chi-square: expected probabilities must be finite, >= 0");
        psum += p;
    }
    if (total <= 0.0) throw std::invalid_argument("chi-square: no observations");
    if (psum <= 0.0) throw std::invalid_argument("chi-square: expected mass is zero");

    ChiSquareResult res;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = total * expected_probs[i] / psum;
        if (e == 0.0) {
            if (observed[i] != 0)
                throw std::invalid_argument("chi-square: observation in a zero-probability cell");
            continue;
        }
        double d = double(observed[i]) - e;
        res.statistic += d * d / e;
        res.dof += 1;
    }
    res.dof -= 1;  // multinomial constraint
    if (res.dof < 1) throw std::invalid_argument("chi-square: fewer than 2 live cells");
    res.p_value = chi_square_sf(res.statistic, res.dof);
    return res;
}

MeanReport mean_and_se(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    MeanReport rep;
    rep.count = xs.size();
    for (double x : xs) rep.mean += x;
    rep.mean /= double(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - rep.mean) * (x - rep.mean);
        rep.std_error = std::sqrt(ss / (double(xs.size()) * double(xs.size() - 1)));
    }
    return rep;
}

BootstrapCI bootstrap_ci(const std::vector<double>& xs,
                         const std::function<double(const std::vector<double>&)>& statistic,
                         int resamples, double level, std::uint64_t seed) {
    if (xs.empty()) throw std::invalid_argument("bootstrap: empty sample");
    if (resamples < 1) throw std::invalid_argument("bootstrap: need resamples >= 1");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap: level in (0,1)");

    BootstrapCI ci;
    ci.estimate = statistic(xs);
    ci.resamples = resamples;
    ci.level = level;

    CounterStream rng(seed, 0x626f6f74ULL);
    std::vector<double> stats(resamples);
    std::vector<double> resample(xs.size());
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            resample[i] = xs[rng.below(xs.size())];
        stats[b] = statistic(resample);
    }
    std::sort(stats.begin(), stats.end());
    auto pick = [&](double q) {
        double pos = q * double(resamples - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min<std::size_t>(lo + 1, resamples - 1);
        double frac = pos - double(lo);
        return stats[lo] * (1.0 - frac) + stats[hi] * frac;
    };
    double tail = 0.5 * (1.0 - level);
    ci.lo = std::min(pick(tail), ci.estimate);
    ci.hi = std::max(pick(1.0 - tail), ci.estimate);
    return ci;
}

SlopeFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit: need at least 2 matched points");
    double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double vx = sxx - sx * sx / n;
    if (vx <= 0.0) throw std::invalid_argument("fit: x values are all equal");
    SlopeFit fit;
    fit.slope = (sxy - sx * sy / n) / vx;
    fit.intercept = (sy - fit.slope * sx) / n;
    double vy = syy - sy * sy / n;
    double cov = sxy - sx * sy / n;
    fit.r_squared = vy > 0.0 ? (cov * cov) / (vx * vy) : 1.0;
    return fit;
}

SlopeFit log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit: need at least 2 matched points");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("log-log fit: data must be strictly positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return linear_fit(lx, ly);
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total variation: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

}  // namespace wfpp
