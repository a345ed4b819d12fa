#include "wfpp/shape_constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "quadrature.hpp"
#include "wfpp/parallel.hpp"
#include "wfpp/rng.hpp"
#include "wfpp/sphere_grid.hpp"

namespace wfpp {

namespace {

RVec angle_dir(double t) { return RVec{std::cos(t), std::sin(t)}; }

/// Golden-section maximization of g(angle_dir(t)) on [lo, hi].
double golden_max_angle(const std::function<double(const RVec&)>& g, double lo, double hi,
                        double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = g(angle_dir(c)), fd = g(angle_dir(d));
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = g(angle_dir(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = g(angle_dir(d));
        }
    }
    return 0.5 * (a + b);
}

/// Compass search on the tangent plane at `u`, angular step halving to 1e-8.
RVec tangent_refine(const std::function<double(const RVec&)>& g, RVec u, int dim,
                    double initial_step) {
    double best = g(u);
    double step = initial_step;
    // Orthonormal tangent basis at u (any deterministic completion works).
    auto tangent_basis = [&](const RVec& at) {
        std::vector<RVec> basis;
        for (int i = 0; i < dim && static_cast<int>(basis.size()) < dim - 1; ++i) {
            RVec e(dim);
            e[i] = 1.0;
            RVec t = e - dot(e, at) * at;
            for (const RVec& b : basis) t -= dot(t, b) * b;
            double n = norm2(t);
            if (n > 1e-8) basis.push_back(t * (1.0 / n));
        }
        return basis;
    };
    while (step > 1e-8) {
        bool improved = false;
        for (const RVec& t : tangent_basis(u)) {
            for (double s : {step, -step}) {
                RVec cand = normalized(u + s * t);
                double v = g(cand);
                if (v > best) {
                    best = v;
                    u = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return u;
}

std::vector<RVec> sample_directions(int dim, int count) {
    if (dim == 1) return {RVec{1.0}, RVec{-1.0}};
    if (dim == 2) return circle_directions(count);
    if (dim == 3) return icosphere_at_least(static_cast<std::size_t>(count)).vertices;
    // d = 4: deterministic Gaussian sample plus the coordinate patterns.
    std::vector<RVec> dirs;
    CounterStream rng(0x64697273ULL, dim);
    for (int i = 0; i < count; ++i) {
        RVec v(dim);
        for (int k = 0; k < dim; ++k) {
            double u1 = rng.uniform(), u2 = rng.uniform();
            v[k] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        if (norm2(v) > 1e-12) dirs.push_back(normalized(v));
    }
    for (int mask = 1; mask < (1 << dim); ++mask) {
        RVec v(dim);
        for (int k = 0; k < dim; ++k) v[k] = (mask >> k) & 1 ? 1.0 : 0.0;
        RVec u = normalized(v);
        for (int signs = 0; signs < (1 << dim); ++signs) {
            RVec w = u;
            for (int k = 0; k < dim; ++k)
                if ((signs >> k) & 1) w[k] = -w[k];
            dirs.push_back(w);
        }
    }
    return dirs;
}

struct OneSidedExtremum {
    double value;
    std::vector<RVec> directions;
};

OneSidedExtremum find_max(int dim, const std::function<double(const RVec&)>& g, int count) {
    std::vector<RVec> dirs = sample_directions(dim, count);
    std::vector<double> vals(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) vals[i] = g(dirs[i]);

    double best = -std::numeric_limits<double>::infinity();
    for (double v : vals) best = std::max(best, v);

    if (dim == 2) {
        // Refine each grid-local maximum near the global one by golden section.
        int n = count;
        double spacing = 2.0 * std::numbers::pi / n;
        std::vector<int> candidates;
        for (int i = 0; i < n; ++i) {
            double prev = vals[(i + n - 1) % n], next = vals[(i + 1) % n];
            if (vals[i] >= prev && vals[i] >= next && vals[i] >= best - 1e-3 * std::abs(best) - 1e-12)
                candidates.push_back(i);
        }
        for (int i : candidates) {
            double t0 = 2.0 * std::numbers::pi * i / n;
            double t = golden_max_angle(g, t0 - spacing, t0 + spacing, 1e-8);
            best = std::max(best, g(angle_dir(t)));
        }
    } else if (dim >= 3) {
        std::size_t best_idx = std::max_element(vals.begin(), vals.end()) - vals.begin();
        double gap = dim == 3 ? 0.1 : 0.2;
        RVec refined = tangent_refine(g, dirs[best_idx], dim, gap);
        best = std::max(best, g(refined));
    }

    OneSidedExtremum out;
    out.value = best;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        if (vals[i] >= best - 1e-6 * std::abs(best) - 1e-15) out.directions.push_back(dirs[i]);
    }
    return out;
}

}  // namespace

SphereExtrema extremize_on_sphere(int dim, const std::function<double(const RVec&)>& g,
                                  int direction_count) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("extremize_on_sphere: dim in 1..4");
    if (direction_count < 8) throw std::invalid_argument("extremize_on_sphere: need >= 8 directions");
    OneSidedExtremum mx = find_max(dim, g, direction_count);
    OneSidedExtremum mn = find_max(dim, [&](const RVec& u) { return -g(u); }, direction_count);
    SphereExtrema out;
    out.max_value = mx.value;
    out.max_directions = std::move(mx.directions);
    out.min_value = -mn.value;
    out.min_directions = std::move(mn.directions);
    return out;
}

ShapeConstants compute_shape_constants(const Norm& mu, int direction_count) {
    auto ratio = [&](const RVec& u) { return 1.0 / mu(u); };  // |u| = 1 on the sphere
    SphereExtrema ex = extremize_on_sphere(mu.dim(), ratio, direction_count);
    ShapeConstants sc;
    sc.rho_upper = ex.max_value;
    sc.rho_lower = ex.min_value;
    sc.upper_directions = std::move(ex.max_directions);
    sc.lower_directions = std::move(ex.min_directions);
    if (!(sc.rho_lower > 0.0) || !std::isfinite(sc.rho_upper))
        throw std::domain_error("compute_shape_constants: gauge must be positive and finite");
    return sc;
}

namespace {

/// Cost of the straight chord [a, b]: integral of 1/f against mu-length.
double chord_cost(const AlphaWeight& f, const Norm& mu, const RVec& a, const RVec& b,
                  int quad_nodes) {
    const auto& rule = detail::gauss_legendre(quad_nodes);
    double len = mu(b - a);
    double acc = 0;
    for (int k = 0; k < quad_nodes; ++k) acc += rule.weights[k] * f.inverse(lerp(a, b, rule.nodes[k]));
    return len * acc;
}

/// Diameter of the chord graph on `nodes` with the given neighbor lists.
double graph_diameter(const std::vector<RVec>& nodes,
                      const std::vector<std::vector<std::pair<int, double>>>& adj) {
    std::size_t n = nodes.size();
    std::vector<double> farthest(n, 0.0);
    parallel_for(n, [&](std::size_t src) {
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[src] = 0.0;
        heap.emplace(0.0, static_cast<int>(src));
        while (!heap.empty()) {
            auto [d, i] = heap.top();
            heap.pop();
            if (d > dist[i]) continue;
            for (auto [j, w] : adj[i]) {
                double nd = d + w;
                if (nd < dist[j]) {
                    dist[j] = nd;
                    heap.emplace(nd, j);
                }
            }
        }
        double far = 0.0;
        for (double d : dist) far = std::max(far, d);
        farthest[src] = far;
    });
    double diam = 0.0;
    for (double d : farthest) diam = std::max(diam, d);
    return diam;
}

double lambda_at_resolution(const AlphaWeight& f, const Norm& mu, int res) {
    const int quad_nodes = 16;
    if (f.dim() == 2) {
        std::vector<RVec> nodes = circle_directions(res);
        std::vector<std::vector<std::pair<int, double>>> adj(nodes.size());
        for (int i = 0; i < res; ++i) {
            for (int hop : {1, 2}) {
                int j = (i + hop) % res;
                double w = chord_cost(f, mu, nodes[i], nodes[j], quad_nodes);
                adj[i].emplace_back(j, w);
                adj[j].emplace_back(i, w);
            }
        }
        return graph_diameter(nodes, adj);
    }
    // d = 3: chords along the geodesic triangulation, one and two hops out.
    Icosphere sphere = icosphere_at_least(static_cast<std::size_t>(res));
    std::size_t n = sphere.vertices.size();
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> reach = sphere.adjacency[i];
        for (int nb : sphere.adjacency[i])
            for (int nb2 : sphere.adjacency[nb])
                if (nb2 != static_cast<int>(i)) reach.push_back(nb2);
        std::sort(reach.begin(), reach.end());
        reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
        for (int j : reach)
            if (j > static_cast<int>(i)) {
                double w = chord_cost(f, mu, sphere.vertices[i], sphere.vertices[j], quad_nodes);
                adj[i].emplace_back(j, w);
                adj[j].emplace_back(static_cast<int>(i), w);
            }
    }
    return graph_diameter(sphere.vertices, adj);
}

}  // namespace

LambdaReport compute_lambda_report(const AlphaWeight& f, const Norm& mu, int sphere_resolution) {
    if (f.dim() != mu.dim()) throw std::invalid_argument("compute_lambda: dimension mismatch");
    if (f.dim() != 2 && f.dim() != 3)
        throw std::invalid_argument("compute_lambda: supported in dimensions 2 and 3");
    if (sphere_resolution < 128)
        throw std::invalid_argument("compute_lambda: resolution must be >= 128");

    LambdaReport rep;
    for (int res : {sphere_resolution / 4, sphere_resolution / 2, sphere_resolution}) {
        rep.resolutions.push_back(res);
        rep.values.push_back(lambda_at_resolution(f, mu, res));
    }
    double l1 = rep.values[0], l2 = rep.values[1], l3 = rep.values[2];
    rep.finest_value = l3;
    double d1 = l2 - l1, d2 = l3 - l2;
    if (std::abs(d2) < 1e-14 || d1 * d2 <= 0.0) {
        rep.value = l3;
    } else {
        double rate = d1 / d2;
        rep.value = rate > 1.2 ? l3 + d2 / (rate - 1.0) : l3;
    }
    rep.error_estimate = std::abs(rep.value - l3);
    return rep;
}

double compute_lambda(const AlphaWeight& f, const Norm& mu, int sphere_resolution) {
    return compute_lambda_report(f, mu, sphere_resolution).value;
}

LipschitzReport check_lipschitz(const AlphaWeight& f, int sample_count, std::uint64_t seed) {
    int d = f.dim();
    CounterStream rng(seed, 0x6c697073ULL);
    auto random_unit = [&]() {
        for (;;) {
            RVec v(d);
            for (int k = 0; k < d; ++k) {
                double u1 = rng.uniform(), u2 = rng.uniform();
                v[k] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            }
            if (norm2(v) > 1e-12) return normalized(v);
        }
    };

    LipschitzReport rep{};
    rep.declared_bound = f.lipschitz_bound();
    double max_ratio = 0.0;
    for (int i = 0; i < sample_count; ++i) {
        RVec u = random_unit();
        RVec v = random_unit();
        double gap = norm2(u - v);
        if (gap < 1e-9) continue;
        max_ratio = std::max(max_ratio, std::abs(f.profile()(u) - f.profile()(v)) / gap);
    }
    rep.max_sphere_ratio = max_ratio;

    double L = std::max(rep.declared_bound, max_ratio);
    rep.full_space_constant = 2.0 * L + std::abs(f.alpha()) * f.kappa_upper();
    int violations = 0;
    for (int i = 0; i < sample_count; ++i) {
        double rz = 0.1 * std::pow(100.0, rng.uniform());
        double rw = 0.1 * std::pow(100.0, rng.uniform());
        RVec z = rz * random_unit();
        RVec w = rw * random_unit();
        double lhs = std::abs(f.evaluate(z) - f.evaluate(w));
        double radial = std::max(std::pow(rz, f.alpha() - 1.0), std::pow(rw, f.alpha() - 1.0));
        double rhs = rep.full_space_constant * radial * norm2(z - w);
        if (lhs > rhs * (1.0 + 1e-9) + 1e-12) ++violations;
    }
    rep.full_space_violations = violations;
    rep.consistent = rep.declared_bound <= 0.0 ||
                     max_ratio <= rep.declared_bound * (1.0 + 1e-6) + 1e-12;
    return rep;
}

}  // namespace wfpp
