#include "wfpp/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "wfpp/parallel.hpp"
#include "wfpp/rng.hpp"
#include "wfpp/shape_constants.hpp"
#include "wfpp/snapshot_io.hpp"

namespace wfpp {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

template <typename T>
void require_strictly_increasing(const std::vector<T>& xs, const char* what) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Norm mu_or_euclidean(const ExperimentSpec& spec) {
    if (spec.reference_mu.valid()) return spec.reference_mu;
    return Norm::euclidean(spec.engine_config.dim);
}

json seeds_json(const std::vector<std::uint64_t>& seeds) {
    json arr = json::array();
    for (std::uint64_t s : seeds) arr.push_back(s);
    return arr;
}

json ci_json(const BootstrapCI& ci) {
    return json{{"estimate", ci.estimate},
                {"hi", ci.hi},
                {"level", ci.level},
                {"lo", ci.lo},
                {"resamples", ci.resamples}};
}

}  // namespace

void validate_experiment_spec(const ExperimentSpec& spec) {
    static const char* kinds[] = {"limit_shape", "covering",     "cone",
                                  "urn_d1",      "chi_estimate", "mu_estimate"};
    if (std::find(std::begin(kinds), std::end(kinds), spec.kind) == std::end(kinds))
        throw std::invalid_argument("experiment: unknown kind '" + spec.kind + "'");
    if (spec.replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
    require_strictly_increasing(spec.times, "experiment: checkpoint times");
    require_strictly_increasing(spec.annuli, "experiment: annulus schedule");
    for (double t : spec.times)
        if (!(t > 0.0)) throw std::invalid_argument("experiment: checkpoint times must be positive");
    for (int n : spec.annuli)
        if (n < 1) throw std::invalid_argument("experiment: annulus indices must be >= 1");
    if (!(spec.covering_factor >= 1.0))
        throw std::invalid_argument("experiment: covering factor must be >= 1");
    if (spec.edges_per_run < 1) throw std::invalid_argument("experiment: edges_per_run must be >= 1");
    if (!(spec.tail_fraction > 0.0 && spec.tail_fraction <= 1.0))
        throw std::invalid_argument("experiment: tail fraction must be in (0, 1]");
    if (!(spec.tail_threshold > 0.0 && spec.tail_threshold <= 1.0))
        throw std::invalid_argument("experiment: tail threshold must be in (0, 1]");
    if (spec.urn_steps < 1) throw std::invalid_argument("experiment: urn steps must be >= 1");
    if (spec.direction_bins < 4)
        throw std::invalid_argument("experiment: direction bins must be >= 4");
    if (!(spec.shape_time > 0.0))
        throw std::invalid_argument("experiment: shape time must be positive");
}

std::vector<RVec> fattened_boundary_2d(const ClusterState& state) {
    if (state.dim != 2) throw std::invalid_argument("boundary extraction needs dimension 2");
    std::vector<RVec> out;
    for (const auto& [v, t] : state.vertex_times) {
        (void)t;
        for (int axis = 0; axis < 2; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                Vertex w = v;
                w.c[axis] += dir;
                if (state.vertex_times.count(w)) continue;
                RVec p = v.to_rvec(2);
                p[axis] += 0.5 * dir;
                out.push_back(p);
            }
        }
    }
    return out;
}

namespace {

/// Directed Hausdorff with an x-sorted target set; the window around the
/// query's x position shrinks with the best distance found so far.
double directed_hausdorff(const std::vector<RVec>& from, const std::vector<RVec>& to_sorted) {
    double worst = 0.0;
    for (const RVec& p : from) {
        auto it = std::lower_bound(to_sorted.begin(), to_sorted.end(), p[0],
                                   [](const RVec& q, double x) { return q[0] < x; });
        std::size_t idx = static_cast<std::size_t>(it - to_sorted.begin());
        double best = std::numeric_limits<double>::infinity();
        std::size_t lo = idx, hi = idx;
        bool more = true;
        while (more) {
            more = false;
            if (hi < to_sorted.size() && to_sorted[hi][0] - p[0] < best) {
                best = std::min(best, norm2(to_sorted[hi] - p));
                ++hi;
                more = true;
            }
            if (lo > 0 && p[0] - to_sorted[lo - 1][0] < best) {
                --lo;
                best = std::min(best, norm2(to_sorted[lo] - p));
                more = true;
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

std::vector<RVec> sorted_by_x(std::vector<RVec> pts) {
    std::sort(pts.begin(), pts.end(), [](const RVec& a, const RVec& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    return pts;
}

}  // namespace

double hausdorff_distance(const std::vector<RVec>& a, const std::vector<RVec>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty point set");
    std::vector<RVec> sa = sorted_by_x(a);
    std::vector<RVec> sb = sorted_by_x(b);
    return std::max(directed_hausdorff(sa, sb), directed_hausdorff(sb, sa));
}

ShapeReport run_limit_shape(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    if (spec.times.empty()) throw std::invalid_argument("limit shape: no checkpoint times");
    const AlphaWeight& f = spec.engine_config.weight;
    if (!f.profile().valid()) throw std::invalid_argument("limit shape: no weight configured");
    if (!(f.alpha() < 1.0)) throw std::invalid_argument("limit shape: needs alpha < 1");
    if (spec.engine_config.dim != 2)
        throw std::invalid_argument("limit shape: boundary extraction needs dimension 2");

    Norm mu = mu_or_euclidean(spec);
    ShapeReport rep;
    rep.times = spec.times;
    rep.rescale_exponent = 1.0 / (1.0 - f.alpha());
    rep.reference = trace_d_ball(f, mu, 1.0, spec.direction_bins);

    std::vector<RVec> ref_points;
    ref_points.reserve(rep.reference.directions.size());
    for (std::size_t i = 0; i < rep.reference.directions.size(); ++i)
        ref_points.push_back(rep.reference.directions[i] * rep.reference.radii[i]);

    const int R = spec.replicates;
    rep.seeds.resize(R);
    for (int r = 0; r < R; ++r) rep.seeds[r] = derive_seed(spec.engine_config.seed, r);

    rep.distances.assign(spec.times.size(), std::vector<double>(R, 0.0));
    parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        RunConfig cfg = spec.engine_config;
        cfg.seed = rep.seeds[r];
        cfg.stop = StopRule::at_time(spec.times.back());
        cfg.snapshots = SnapshotPlan{};
        cfg.snapshots.at_times = spec.times;
        RunResult res = run_fpp(cfg);
        if (res.snapshots.size() != spec.times.size())
            throw std::runtime_error("limit shape: missing checkpoint snapshot");
        for (std::size_t i = 0; i < spec.times.size(); ++i) {
            ClusterState cl = cluster_at_snapshot(res.state, res.snapshots[i]);
            std::vector<RVec> boundary = fattened_boundary_2d(cl);
            double scale = std::pow(spec.times[i], -rep.rescale_exponent);
            for (RVec& p : boundary) p = p * scale;
            rep.distances[i][r] = hausdorff_distance(boundary, ref_points);
        }
    });

    rep.mean_distance.resize(spec.times.size());
    for (std::size_t i = 0; i < spec.times.size(); ++i)
        rep.mean_distance[i] = mean_and_se(rep.distances[i]).mean;

    rep.exponent = std::numeric_limits<double>::quiet_NaN();
    if (spec.times.size() >= 2) {
        rep.has_exponent = true;
        rep.exponent = log_log_slope(rep.times, rep.mean_distance).slope;
        std::vector<double> idx(R);
        for (int r = 0; r < R; ++r) idx[r] = double(r);
        rep.exponent_ci = bootstrap_ci(
            idx,
            [&](const std::vector<double>& sample) {
                std::vector<double> means(rep.times.size(), 0.0);
                for (std::size_t i = 0; i < rep.times.size(); ++i) {
                    for (double rr : sample) means[i] += rep.distances[i][std::size_t(rr)];
                    means[i] /= double(sample.size());
                }
                return log_log_slope(rep.times, means).slope;
            },
            200, 0.95, derive_seed(spec.engine_config.seed, 0x73686170));
    }
    return rep;
}

namespace {

/// All lattice points z with n-1 < |z| <= n.
std::vector<Vertex> annulus_points(int dim, int n) {
    std::vector<Vertex> out;
    std::array<int, 4> idx{0, 0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += double(idx[k]) * double(idx[k]);
            double r = std::sqrt(s);
            if (r > double(n - 1) && r <= double(n)) {
                Vertex v{};
                for (int k = 0; k < dim; ++k) v.c[k] = idx[k];
                out.push_back(v);
            }
            return;
        }
        for (int x = -n; x <= n; ++x) {
            idx[axis] = x;
            rec(axis + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

CoveringReport run_covering(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    if (spec.annuli.empty()) throw std::invalid_argument("covering: empty annulus schedule");
    const AlphaWeight& f = spec.engine_config.weight;
    if (!f.profile().valid()) throw std::invalid_argument("covering: no weight configured");

    CoveringReport rep;
    rep.annuli = spec.annuli;
    rep.factor = spec.covering_factor;
    rep.replicates = spec.replicates;

    double alpha = f.alpha();
    if (alpha >= 1.0) {
        Norm mu = mu_or_euclidean(spec);
        double rho_upper = compute_shape_constants(mu, 2048).rho_upper;
        double lambda = compute_lambda(f, mu, 512);
        rep.condition_checked = true;
        rep.condition_threshold = alpha_near_1_threshold(rho_upper, f.kappa_upper(), lambda);
        rep.condition_ok = alpha < rep.condition_threshold;
        rep.warned = !rep.condition_ok;
    } else {
        // Below the theorem's regime; run anyway and flag it.
        rep.warned = true;
    }

    const int R = spec.replicates;
    const std::size_t N = spec.annuli.size();
    rep.seeds.resize(N * R);
    for (std::size_t i = 0; i < N * R; ++i)
        rep.seeds[i] = derive_seed(spec.engine_config.seed, i);

    rep.swallowed.assign(N, std::vector<bool>(R, false));
    for (std::size_t ni = 0; ni < N; ++ni) {
        int n = spec.annuli[ni];
        std::vector<Vertex> annulus = annulus_points(spec.engine_config.dim, n);
        std::vector<char> ok(R, 0);  // plain bytes; vector<bool> bit-packs and races
        parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
            RunConfig cfg = spec.engine_config;
            cfg.seed = rep.seeds[ni * R + r];
            cfg.stop = StopRule::euclid_radius(spec.covering_factor * n);
            cfg.snapshots = SnapshotPlan{};
            RunResult res = run_fpp(cfg);
            bool all = true;
            for (const Vertex& v : annulus) {
                if (!res.state.vertex_times.count(v)) {
                    all = false;
                    break;
                }
            }
            ok[r] = all ? 1 : 0;
        });
        for (int r = 0; r < R; ++r) rep.swallowed[ni][r] = ok[r] != 0;
    }

    rep.swallow_fraction.resize(N);
    for (std::size_t ni = 0; ni < N; ++ni) {
        int hit = 0;
        for (int r = 0; r < R; ++r) hit += rep.swallowed[ni][r] ? 1 : 0;
        rep.swallow_fraction[ni] = double(hit) / double(R);
    }
    return rep;
}

ConeReport run_cone(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    const ConeParams& cp = spec.cone;
    if (!(cp.alpha > 1.0)) throw std::invalid_argument("cone: needs alpha > 1");
    if (!(cp.aspect > 1.0)) throw std::invalid_argument("cone: needs aspect > 1");

    int dim = spec.engine_config.dim;
    CylinderSpec cylinder = default_cylinder(dim, cp.aspect, 1.0);
    AdmissibleProfile profile;
    profile.kappa_upper_s = cp.kappa_upper;
    profile.kappa_lower_s = cp.kappa_lower;
    profile.taper_power = cp.taper_power;
    AlphaWeight weight = cylinder_weight(cylinder, profile, cp.alpha);
    ConeSpec cone{cylinder};

    ConeReport rep;
    rep.conditions = check_cone_conditions(cp.alpha, cp.aspect, cp.kappa_upper, cp.kappa_lower);
    rep.params = cp;
    rep.tail_fraction = spec.tail_fraction;
    rep.tail_threshold = spec.tail_threshold;
    rep.edges_per_run = spec.edges_per_run;
    rep.replicates = spec.replicates;

    const int R = spec.replicates;
    rep.seeds.resize(R);
    for (int r = 0; r < R; ++r) rep.seeds[r] = derive_seed(spec.engine_config.seed, r);
    rep.per_run.resize(R);

    parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        RunConfig cfg = spec.engine_config;
        cfg.weight = weight;
        cfg.seed = rep.seeds[r];
        cfg.stop = StopRule::edges(spec.edges_per_run);
        cfg.snapshots = SnapshotPlan{};
        RunResult res = run_eden_chain(cfg);
        rep.per_run[r] = cone_membership_stats(res, cone, spec.tail_fraction);
    });

    int pass = 0;
    for (const ConeStats& st : rep.per_run)
        if (std::max(st.in_k, st.in_neg_k) >= spec.tail_threshold) ++pass;
    rep.pass_fraction = double(pass) / double(R);
    return rep;
}

std::vector<double> urn_exact_law(int steps) {
    if (steps < 0 || steps > 4096) throw std::invalid_argument("urn law: steps out of range");
    std::vector<double> dp{1.0};
    for (int n = 0; n < steps; ++n) {
        std::vector<double> next(n + 2, 0.0);
        for (int k = 0; k <= n; ++k) {
            double right = (double(k) + 0.5) / (double(n) + 1.0);
            next[k + 1] += dp[k] * right;
            next[k] += dp[k] * (1.0 - right);
        }
        dp = std::move(next);
    }
    return dp;
}

UrnReport run_urn_d1(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    if (spec.engine_config.dim != 1)
        throw std::invalid_argument("urn: the chain lives in dimension 1");

    const int N = spec.urn_steps;
    UrnReport rep;
    rep.steps = N;
    rep.exact = urn_exact_law(N);
    rep.replicates = spec.replicates;
    rep.seed = spec.engine_config.seed;

    AlphaWeight weight(1.0, SphereProfile::constant(1, 1.0));

    std::vector<int> right(spec.replicates, 0);
    parallel_for(static_cast<std::size_t>(spec.replicates), [&](std::size_t r) {
        EdenChain chain(1, weight, derive_seed(spec.engine_config.seed, r));
        for (int i = 0; i < N; ++i) chain.step(false);
        int k = 0;
        for (const auto& [v, t] : chain.state().vertex_times) {
            (void)t;
            k = std::max(k, int(v[0]));
        }
        right[r] = k;
    });

    rep.counts.assign(N + 1, 0);
    for (int k : right) rep.counts[std::size_t(k)] += 1;
    rep.empirical.resize(N + 1);
    for (int k = 0; k <= N; ++k)
        rep.empirical[k] = double(rep.counts[k]) / double(spec.replicates);
    rep.tv_distance = total_variation(rep.empirical, rep.exact);
    return rep;
}

namespace {

void require_chi_times(const std::vector<double>& times) {
    if (times.size() < 4 || !(times.back() >= 100.0 * times.front()))
        throw std::invalid_argument(
            "fluctuation fit: need at least 4 checkpoint times spanning two decades");
}

std::vector<double> widths_from_radial(const std::vector<double>& times,
                                       const std::vector<std::vector<std::vector<double>>>& radial,
                                       const std::vector<std::size_t>& reps) {
    std::vector<double> widths(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::size_t bins = radial[i].front().size();
        std::vector<double> mean(bins, 0.0);
        for (std::size_t r : reps)
            for (std::size_t k = 0; k < bins; ++k) mean[k] += radial[i][r][k];
        for (double& m : mean) m /= double(reps.size());
        double acc = 0.0;
        for (std::size_t r : reps) {
            double dev = 0.0;
            for (std::size_t k = 0; k < bins; ++k)
                dev = std::max(dev, std::abs(radial[i][r][k] - mean[k]));
            acc += dev;
        }
        widths[i] = acc / double(reps.size());
    }
    return widths;
}

}  // namespace

ChiReport chi_from_radial_samples(const RadialSamples& samples, int bootstrap_resamples,
                                  std::uint64_t seed) {
    require_chi_times(samples.times);
    if (samples.radial.size() != samples.times.size())
        throw std::invalid_argument("fluctuation fit: radial data does not match times");
    std::size_t R = samples.radial.front().size();
    if (R < 2) throw std::invalid_argument("fluctuation fit: need at least 2 replicates");
    std::size_t bins = samples.radial.front().front().size();
    for (const auto& per_time : samples.radial) {
        if (per_time.size() != R)
            throw std::invalid_argument("fluctuation fit: ragged replicate data");
        for (const auto& row : per_time)
            if (row.size() != bins)
                throw std::invalid_argument("fluctuation fit: ragged direction bins");
    }

    std::vector<std::size_t> all(R);
    for (std::size_t r = 0; r < R; ++r) all[r] = r;

    ChiReport rep;
    rep.times = samples.times;
    rep.widths = widths_from_radial(samples.times, samples.radial, all);
    for (double w : rep.widths)
        if (!(w > 0.0))
            throw std::runtime_error("fluctuation fit: zero width; replicates are identical");
    rep.chi_hat = -log_log_slope(rep.times, rep.widths).slope;
    rep.direction_bins = int(bins);
    rep.replicates = int(R);

    std::vector<double> idx(R);
    for (std::size_t r = 0; r < R; ++r) idx[r] = double(r);
    rep.ci = bootstrap_ci(
        idx,
        [&](const std::vector<double>& sample) {
            std::vector<std::size_t> reps(sample.size());
            for (std::size_t i = 0; i < sample.size(); ++i) reps[i] = std::size_t(sample[i]);
            std::vector<double> w = widths_from_radial(samples.times, samples.radial, reps);
            for (double& x : w) x = std::max(x, 1e-300);
            return -log_log_slope(samples.times, w).slope;
        },
        bootstrap_resamples, 0.95, seed);
    return rep;
}

namespace {

/// Outer radius of the rescaled boundary per angular bin; empty bins borrow
/// the angularly nearest boundary point so small clusters stay usable.
std::vector<double> radial_profile(const std::vector<RVec>& boundary, int bins) {
    if (boundary.empty()) throw std::runtime_error("radial profile: empty boundary");
    std::vector<double> out(bins, 0.0);
    std::vector<char> hit(bins, 0);
    std::vector<std::pair<double, double>> polar;
    polar.reserve(boundary.size());
    for (const RVec& p : boundary) {
        double r = std::hypot(p[0], p[1]);
        double a = std::atan2(p[1], p[0]);
        if (a < 0) a += kTwoPi;
        polar.emplace_back(a, r);
        int b = std::min(bins - 1, int(a / (kTwoPi / bins)));
        if (r > out[b]) out[b] = r;
        hit[b] = 1;
    }
    std::sort(polar.begin(), polar.end());
    for (int b = 0; b < bins; ++b) {
        if (hit[b]) continue;
        double center = (b + 0.5) * (kTwoPi / bins);
        auto it = std::lower_bound(polar.begin(), polar.end(), std::make_pair(center, 0.0));
        double best = std::numeric_limits<double>::infinity();
        double val = 0.0;
        auto consider = [&](const std::pair<double, double>& pr) {
            double d = std::abs(pr.first - center);
            d = std::min(d, kTwoPi - d);
            if (d < best) {
                best = d;
                val = pr.second;
            }
        };
        if (it != polar.end()) consider(*it);
        if (it != polar.begin()) consider(*(it - 1));
        consider(polar.front());
        consider(polar.back());
        out[b] = val;
    }
    return out;
}

}  // namespace

ChiReport estimate_chi(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    require_chi_times(spec.times);
    if (spec.replicates < 2) throw std::invalid_argument("fluctuation fit: need >= 2 replicates");
    const AlphaWeight& f = spec.engine_config.weight;
    if (!f.profile().valid()) throw std::invalid_argument("fluctuation fit: no weight configured");
    if (!(f.alpha() < 1.0)) throw std::invalid_argument("fluctuation fit: needs alpha < 1");
    if (spec.engine_config.dim != 2)
        throw std::invalid_argument("fluctuation fit: boundary extraction needs dimension 2");

    const int R = spec.replicates;
    double rescale_exponent = 1.0 / (1.0 - f.alpha());

    RadialSamples samples;
    samples.times = spec.times;
    samples.radial.assign(spec.times.size(),
                          std::vector<std::vector<double>>(R));

    std::vector<std::uint64_t> seeds(R);
    for (int r = 0; r < R; ++r) seeds[r] = derive_seed(spec.engine_config.seed, r);

    parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        RunConfig cfg = spec.engine_config;
        cfg.seed = seeds[r];
        cfg.stop = StopRule::at_time(spec.times.back());
        cfg.snapshots = SnapshotPlan{};
        cfg.snapshots.at_times = spec.times;
        RunResult res = run_fpp(cfg);
        if (res.snapshots.size() != spec.times.size())
            throw std::runtime_error("fluctuation fit: missing checkpoint snapshot");
        for (std::size_t i = 0; i < spec.times.size(); ++i) {
            ClusterState cl = cluster_at_snapshot(res.state, res.snapshots[i]);
            std::vector<RVec> boundary = fattened_boundary_2d(cl);
            double scale = std::pow(spec.times[i], -rescale_exponent);
            for (RVec& p : boundary) p = p * scale;
            samples.radial[i][r] = radial_profile(boundary, spec.direction_bins);
        }
    });

    ChiReport rep = chi_from_radial_samples(samples, 200,
                                            derive_seed(spec.engine_config.seed, 0x636869));
    rep.seeds = seeds;
    return rep;
}

MuReport run_mu_estimate(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    if (spec.engine_config.dim != 2)
        throw std::invalid_argument("shape estimate: boundary estimator needs dimension 2");
    MuReport rep;
    rep.empirical = estimate_mu(spec.replicates, spec.shape_time, spec.engine_config.seed,
                                spec.direction_bins);
    rep.convex = shape_convexity_check(rep.empirical.shape);
    rep.axis_radius =
        0.5 * (rep.empirical.shape.radii.front() + rep.empirical.shape.radii.back());
    return rep;
}

std::string shape_report_json(const ShapeReport& rep) {
    json j;
    j["distances"] = rep.distances;
    j["exponent"] = rep.has_exponent ? json(rep.exponent) : json();
    j["exponent_ci"] = rep.has_exponent ? ci_json(rep.exponent_ci) : json();
    j["mean_distance"] = rep.mean_distance;
    j["reference"] = json{{"bisection_tol", rep.reference.bisection_tol},
                          {"center_rule", rep.reference.center_rule},
                          {"direction_count", rep.reference.directions.size()},
                          {"grid_h", rep.reference.grid_h},
                          {"radius", rep.reference.radius}};
    j["rescale_exponent"] = rep.rescale_exponent;
    j["seeds"] = seeds_json(rep.seeds);
    j["times"] = rep.times;
    return j.dump(2) + "\n";
}

std::string covering_report_json(const CoveringReport& rep) {
    json j;
    j["annuli"] = rep.annuli;
    j["condition_checked"] = rep.condition_checked;
    j["condition_ok"] = rep.condition_ok;
    j["condition_threshold"] = rep.condition_threshold;
    j["factor"] = rep.factor;
    j["replicates"] = rep.replicates;
    j["seeds"] = seeds_json(rep.seeds);
    j["swallow_fraction"] = rep.swallow_fraction;
    std::vector<std::vector<int>> sw;
    for (const auto& row : rep.swallowed) sw.emplace_back(row.begin(), row.end());
    j["swallowed"] = sw;
    j["warned"] = rep.warned;
    return j.dump(2) + "\n";
}

std::string cone_report_json(const ConeReport& rep) {
    json j;
    j["conditions"] = json{{"almost_sure", rep.conditions.almost_sure},
                           {"pos_prob", rep.conditions.pos_prob},
                           {"t1", rep.conditions.t1},
                           {"t2", rep.conditions.t2}};
    j["edges_per_run"] = rep.edges_per_run;
    j["params"] = json{{"alpha", rep.params.alpha},
                       {"aspect", rep.params.aspect},
                       {"kappa_lower", rep.params.kappa_lower},
                       {"kappa_upper", rep.params.kappa_upper},
                       {"taper_power", rep.params.taper_power}};
    j["pass_fraction"] = rep.pass_fraction;
    json runs = json::array();
    for (const ConeStats& st : rep.per_run) {
        runs.push_back(json{{"in_k", st.in_k},
                            {"in_neg_k", st.in_neg_k},
                            {"outside_both", st.outside_both},
                            {"tail_count", st.tail_count}});
    }
    j["per_run"] = runs;
    j["replicates"] = rep.replicates;
    j["seeds"] = seeds_json(rep.seeds);
    // The containment cutoffs are reporting choices; the theorem is asymptotic.
    j["tail_fraction"] = rep.tail_fraction;
    j["tail_threshold"] = rep.tail_threshold;
    j["thresholds_are_artifact_choices"] = true;
    return j.dump(2) + "\n";
}

std::string urn_report_json(const UrnReport& rep) {
    json j;
    j["counts"] = rep.counts;
    j["empirical"] = rep.empirical;
    j["exact"] = rep.exact;
    j["replicates"] = rep.replicates;
    j["seed"] = rep.seed;
    j["steps"] = rep.steps;
    j["tv_distance"] = rep.tv_distance;
    return j.dump(2) + "\n";
}

std::string chi_report_json(const ChiReport& rep) {
    json j;
    j["chi_hat"] = rep.chi_hat;
    j["ci"] = ci_json(rep.ci);
    j["direction_bins"] = rep.direction_bins;
    j["replicates"] = rep.replicates;
    j["seeds"] = seeds_json(rep.seeds);
    j["times"] = rep.times;
    j["widths"] = rep.widths;
    return j.dump(2) + "\n";
}

std::string mu_report_json(const MuReport& rep) {
    json j;
    j["axis_radius"] = rep.axis_radius;
    j["convex"] = rep.convex;
    j["direction_bins"] = rep.empirical.shape.angles.size();
    j["replicates"] = rep.empirical.replicates;
    j["seeds"] = seeds_json(rep.empirical.seeds);
    j["time"] = rep.empirical.time;
    return j.dump(2) + "\n";
}

void save_table_csv(const std::string& path, const NumericTable& table) {
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("table: row width does not match header");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("table: cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i].find_first_of(",\n\"") != std::string::npos)
            throw std::invalid_argument("table: column names must be comma-free");
        out << (i ? "," : "") << table.columns[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt_double(row[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("table: write failed for '" + path + "'");
}

NumericTable load_table_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("table: cannot open '" + path + "'");
    NumericTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("table: empty file '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != table.columns.size())
            throw std::runtime_error("table: ragged row in '" + path + "'");
        table.rows.push_back(std::move(row));
    }
    return table;
}

bool tables_equal(const NumericTable& a, const NumericTable& b) {
    return a.columns == b.columns && a.rows == b.rows;
}

NumericTable shape_distance_table(const ShapeReport& rep) {
    NumericTable t;
    t.columns = {"time", "replicate", "distance"};
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        for (std::size_t r = 0; r < rep.distances[i].size(); ++r)
            t.rows.push_back({rep.times[i], double(r), rep.distances[i][r]});
    return t;
}

NumericTable covering_table(const CoveringReport& rep) {
    NumericTable t;
    t.columns = {"n", "swallow_fraction", "replicates"};
    for (std::size_t i = 0; i < rep.annuli.size(); ++i)
        t.rows.push_back({double(rep.annuli[i]), rep.swallow_fraction[i], double(rep.replicates)});
    return t;
}

NumericTable urn_table(const UrnReport& rep) {
    NumericTable t;
    t.columns = {"right_count", "exact_probability", "empirical_frequency"};
    for (std::size_t k = 0; k < rep.exact.size(); ++k)
        t.rows.push_back({double(k), rep.exact[k], rep.empirical[k]});
    return t;
}

NumericTable chi_table(const ChiReport& rep) {
    NumericTable t;
    t.columns = {"time", "width"};
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        t.rows.push_back({rep.times[i], rep.widths[i]});
    return t;
}

}  // namespace wfpp
