#include "wfpp/dmetric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "quadrature.hpp"
#include "wfpp/parallel.hpp"
#include "wfpp/shape_constants.hpp"
#include "wfpp/sphere_grid.hpp"

namespace wfpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroEps = 1e-14;

/// Stencil anisotropy: worst ratio of a hugging grid path to the straight
/// chord, from the support gap of the unit stencil directions.
double stencil_anisotropy(int dim) {
    switch (dim) {
        case 1:
            return 1.0;
        case 2:
            return 1.0275;  // 16 directions, max half-gap 13.28 degrees
        default:
            return 1.13;  // 26 directions, worst facet of the direction hull
    }
}

double mu_eval(const Norm& mu, const RVec& z) { return mu(z); }

/// One weighted segment, mu-length parametrized.  Radial pieces touching 0
/// integrate in closed form; segments passing close to 0 split at the
/// closest point so the quadrature never straddles the steep region.
double segment_cost(const RVec& a, const RVec& b, const AlphaWeight& f, const Norm& mu,
                    int quad_nodes, int depth) {
    double na = norm2(a), nb = norm2(b);
    if (na < kZeroEps && nb < kZeroEps) return 0.0;
    if (na < kZeroEps) return radial_d_length(b, f, mu);
    if (nb < kZeroEps) return radial_d_length(a, f, mu);

    RVec d = b - a;
    double dd = dot(d, d);
    if (dd == 0.0) return 0.0;
    double t_close = std::min(1.0, std::max(0.0, -dot(a, d) / dd));
    double d_close = norm2(lerp(a, b, t_close));
    if (d_close < kZeroEps) {
        // Interior hit: both halves are radial.
        return radial_d_length(a, f, mu) + radial_d_length(b, f, mu);
    }
    if (depth < 2 && t_close > 0.01 && t_close < 0.99 && d_close < 0.25 * std::max(na, nb)) {
        RVec m = lerp(a, b, t_close);
        return segment_cost(a, m, f, mu, quad_nodes, depth + 1) +
               segment_cost(m, b, f, mu, quad_nodes, depth + 1);
    }

    const detail::GLRule& rule = detail::gauss_legendre(quad_nodes);
    double acc = 0.0;
    for (int i = 0; i < quad_nodes; ++i) acc += rule.weights[i] * f.inverse(lerp(a, b, rule.nodes[i]));
    return mu_eval(mu, d) * acc;
}

void require_metric_inputs(const AlphaWeight& f, const Norm& mu) {
    if (!f.profile().valid()) throw std::invalid_argument("weight function required");
    if (!mu.valid()) throw std::invalid_argument("length norm required");
}

}  // namespace

double radial_d_length(const RVec& p, const AlphaWeight& f, const Norm& mu) {
    require_metric_inputs(f, mu);
    double a = f.alpha();
    if (a >= 1.0)
        throw std::domain_error("radial segment through 0 has divergent weighted length for alpha >= 1");
    if (norm2(p) < 1e-300) return 0.0;
    return mu_eval(mu, p) / ((1.0 - a) * f.evaluate(p));
}

double d_length(const PLPath& path, const AlphaWeight& f, const Norm& mu, int quad_nodes) {
    require_metric_inputs(f, mu);
    if (quad_nodes < 2) throw std::invalid_argument("d_length: need at least 2 quadrature nodes");
    if (path.points.size() < 2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
        total += segment_cost(path.points[i], path.points[i + 1], f, mu, quad_nodes, 0);
    return total;
}

bool GridRegion::contains(const RVec& z) const {
    double e = norm2(z);
    if (e < 0.5 * h) return false;  // origin guard, always on
    double r = norm.valid() ? norm(z) : e;
    return r >= r_in - 1e-12 && r <= r_out + 1e-12;
}

namespace {

constexpr std::int32_t kCoordOffset = 1 << 20;

std::uint64_t coord_key(const std::array<std::int32_t, 3>& c) {
    std::uint64_t k = 0;
    for (int i = 0; i < 3; ++i) {
        std::uint64_t u = static_cast<std::uint64_t>(c[i] + kCoordOffset);
        k = (k << 21) | (u & 0x1fffff);
    }
    return k;
}

}  // namespace

GeodesicGrid::GeodesicGrid(int dim, GridRegion region) : dim_(dim), region_(std::move(region)) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dimension must be 1..3");
    if (!(region_.h > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    if (!(region_.r_out > region_.r_in)) throw std::invalid_argument("grid: empty region");

    double rho = 1.0;
    if (region_.norm.valid()) rho = compute_shape_constants(region_.norm, 1024).rho_upper;
    double reach = region_.r_out * rho;
    std::int64_t imax64 = static_cast<std::int64_t>(std::ceil(reach / region_.h)) + 1;
    if (imax64 >= kCoordOffset) throw std::invalid_argument("grid: region too large for spacing");
    std::int32_t imax = static_cast<std::int32_t>(imax64);

    std::int32_t jmax = dim >= 2 ? imax : 0;
    std::int32_t kmax = dim >= 3 ? imax : 0;
    double slots = std::pow(2.0 * imax + 1.0, dim);
    if (slots > 4e8) throw std::invalid_argument("grid: too many candidate cells");
    for (std::int32_t i = -imax; i <= imax; ++i) {
        for (std::int32_t j = -jmax; j <= jmax; ++j) {
            for (std::int32_t k = -kmax; k <= kmax; ++k) {
                std::array<std::int32_t, 3> c{i, j, k};
                RVec p(dim);
                for (int t = 0; t < dim; ++t) p[t] = region_.h * c[t];
                if (!region_.contains(p)) continue;
                ids_.emplace(coord_key(c), static_cast<std::uint32_t>(coords_.size()));
                coords_.push_back(c);
            }
        }
    }
    if (coords_.size() > (std::size_t(1) << 31))
        throw std::invalid_argument("grid: node count exceeds solver limits");

    if (dim == 1) {
        stencil_ = {{1, 0, 0}, {-1, 0, 0}};
    } else if (dim == 2) {
        for (std::int32_t dx = -2; dx <= 2; ++dx) {
            for (std::int32_t dy = -2; dy <= 2; ++dy) {
                int ax = std::abs(dx), ay = std::abs(dy);
                int m = std::max(ax, ay);
                if (m == 0 || (m == 2 && ax + ay == 4) || (m == 2 && (ax == 0 || ay == 0)))
                    continue;  // keep axis, diagonal, knight moves only
                stencil_.push_back({dx, dy, 0});
            }
        }
    } else {
        for (std::int32_t dx = -1; dx <= 1; ++dx)
            for (std::int32_t dy = -1; dy <= 1; ++dy)
                for (std::int32_t dz = -1; dz <= 1; ++dz)
                    if (dx || dy || dz) stencil_.push_back({dx, dy, dz});
    }
}

RVec GeodesicGrid::node_point(std::uint32_t id) const {
    RVec p(dim_);
    for (int t = 0; t < dim_; ++t) p[t] = region_.h * coords_[id][t];
    return p;
}

std::optional<std::uint32_t> GeodesicGrid::node_at(const std::array<std::int32_t, 3>& c) const {
    auto it = ids_.find(coord_key(c));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> GeodesicGrid::nearest_node(const RVec& z) const {
    std::array<std::int32_t, 3> base{0, 0, 0};
    for (int t = 0; t < dim_; ++t) base[t] = static_cast<std::int32_t>(std::llround(z[t] / region_.h));
    std::optional<std::uint32_t> best;
    double best_d = kInf;
    std::int32_t r = 2;
    std::int32_t jr = dim_ >= 2 ? r : 0, kr = dim_ >= 3 ? r : 0;
    for (std::int32_t di = -r; di <= r; ++di) {
        for (std::int32_t dj = -jr; dj <= jr; ++dj) {
            for (std::int32_t dk = -kr; dk <= kr; ++dk) {
                std::array<std::int32_t, 3> c{base[0] + di, base[1] + dj, base[2] + dk};
                auto id = node_at(c);
                if (!id) continue;
                double d = norm2(node_point(*id) - z);
                if (d < best_d - 1e-15 || (d < best_d + 1e-15 && (!best || *id < *best))) {
                    best_d = d;
                    best = id;
                }
            }
        }
    }
    return best;
}

GridSolve grid_shortest_paths(const GeodesicGrid& grid, const AlphaWeight& f, const Norm& mu,
                              const std::vector<std::pair<std::uint32_t, double>>& sources,
                              std::optional<std::uint32_t> early_exit) {
    require_metric_inputs(f, mu);
    GridSolve out;
    out.dist.assign(grid.node_count(), kInf);
    out.parent.assign(grid.node_count(), UINT32_MAX);

    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (const auto& [id, v] : sources) {
        if (v < out.dist[id]) {
            out.dist[id] = v;
            pq.push({v, id});
        }
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > out.dist[u]) continue;
        if (early_exit && u == *early_exit) break;
        RVec pu = grid.node_point(u);
        const auto& cu = grid.node_coords(u);
        for (const auto& off : grid.stencil()) {
            std::array<std::int32_t, 3> cv{cu[0] + off[0], cu[1] + off[1], cu[2] + off[2]};
            auto vid = grid.node_at(cv);
            if (!vid) continue;
            double w = segment_cost(pu, grid.node_point(*vid), f, mu, 8, 0);
            double nd = d + w;
            if (nd < out.dist[*vid] - 1e-15 ||
                (nd < out.dist[*vid] + 1e-15 && u < out.parent[*vid])) {
                out.dist[*vid] = nd;
                out.parent[*vid] = u;
                pq.push({nd, *vid});
            }
        }
    }
    return out;
}

namespace {

/// Every point of [a, b] sampled at half-grid pitch stays inside the region.
bool segment_admissible(const RVec& a, const RVec& b, const GridRegion& region) {
    double len = norm2(b - a);
    int n = static_cast<int>(std::ceil(len / (0.5 * region.h))) + 1;
    for (int i = 1; i < n; ++i) {
        if (!region.contains(lerp(a, b, double(i) / n))) return false;
    }
    return true;
}

/// Greedy vertex removal: drop interior points whenever the bridging segment
/// stays in the region and does not lengthen the path.  Kills most of the
/// stencil zigzag, which otherwise costs up to the anisotropy factor.
void straighten_path(std::vector<RVec>& pts, const AlphaWeight& f, const Norm& mu,
                     const GridRegion& region) {
    if (pts.size() < 3) return;
    std::vector<double> seg(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        seg[i] = segment_cost(pts[i], pts[i + 1], f, mu, 8, 0);
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        std::size_t i = 1;
        while (i + 1 < pts.size()) {
            double bridged = segment_cost(pts[i - 1], pts[i + 1], f, mu, 8, 0);
            if (bridged <= seg[i - 1] + seg[i] + 1e-15 &&
                segment_admissible(pts[i - 1], pts[i + 1], region)) {
                pts.erase(pts.begin() + i);
                seg.erase(seg.begin() + i);
                seg[i - 1] = bridged;
                changed = true;
            } else {
                ++i;
            }
        }
        if (!changed) break;
    }
}

bool lex_less(const RVec& a, const RVec& b) {
    for (int i = 0; i < a.dim; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace

DistanceReport d_distance_report(const RVec& z_in, const RVec& w_in, const AlphaWeight& f,
                                 const Norm& mu, const GeodesicGrid& grid) {
    require_metric_inputs(f, mu);
    RVec z = z_in, w = w_in;
    if (lex_less(w, z)) std::swap(z, w);  // exact symmetry in the endpoints

    DistanceReport rep;
    rep.grid_h = grid.h();
    if (z == w) {
        rep.path.points = {z, w};
        return rep;
    }
    const GridRegion& region = grid.region();
    if (!region.contains(z) || !region.contains(w))
        throw std::domain_error("distance endpoints outside the grid region");

    auto nz = grid.nearest_node(z), nw = grid.nearest_node(w);
    if (!nz || !nw) throw std::domain_error("no grid node near an endpoint");

    double snap_z = segment_cost(z, grid.node_point(*nz), f, mu, 32, 0);
    double snap_w = segment_cost(grid.node_point(*nw), w, f, mu, 32, 0);

    std::vector<RVec> pts;
    if (*nz == *nw) {
        pts = {z, grid.node_point(*nz), w};
    } else {
        GridSolve solve = grid_shortest_paths(grid, f, mu, {{*nz, snap_z}}, *nw);
        if (!std::isfinite(solve.dist[*nw]))
            throw std::runtime_error("grid region disconnects the endpoints");
        std::vector<RVec> nodes;
        for (std::uint32_t v = *nw; v != UINT32_MAX; v = solve.parent[v]) {
            nodes.push_back(grid.node_point(v));
            if (v == *nz) break;
        }
        std::reverse(nodes.begin(), nodes.end());
        pts.push_back(z);
        for (const auto& p : nodes) pts.push_back(p);
        pts.push_back(w);
    }

    straighten_path(pts, f, mu, region);
    if (segment_admissible(z, w, region)) {
        double chord = segment_cost(z, w, f, mu, 32, 0);
        double current = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            current += segment_cost(pts[i], pts[i + 1], f, mu, 8, 0);
        if (chord <= current) pts = {z, w};
    }

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += segment_cost(pts[i], pts[i + 1], f, mu, 32, 0);

    rep.distance = total;
    rep.path.points = std::move(pts);
    rep.error_budget = (stencil_anisotropy(grid.dim()) - 1.0) * total + snap_z + snap_w;
    return rep;
}

double d_distance(const RVec& z, const RVec& w, const AlphaWeight& f, const Norm& mu,
                  const GeodesicGrid& grid) {
    return d_distance_report(z, w, f, mu, grid).distance;
}

double d_distance_restricted(const RVec& z, const RVec& w, const AlphaWeight& f, const Norm& mu,
                             const GridRegion& region) {
    GeodesicGrid grid(z.dim, region);
    return d_distance(z, w, f, mu, grid);
}

GridRegion default_region_for(const RVec& z, const RVec& w, double alpha, double h) {
    double rz = norm2(z), rw = norm2(w);
    double rmax = std::max(rz, rw), rmin = std::min(rz, rw);
    double sep = norm2(w - z);
    GridRegion region;
    region.h = h;
    region.r_out = rmax + 0.5 * sep + 8.0 * h;
    // Homogeneous in (points, h) jointly, so proportional rescaling of a
    // configuration rescales the region exactly.
    region.r_in = alpha >= 1.0 ? std::max(2.0 * h, 0.3 * rmin) : 0.0;
    return region;
}

ScalingReport scaling_check(const AlphaWeight& f, const Norm& mu, const RVec& z, const RVec& w,
                            double r, double h) {
    require_metric_inputs(f, mu);
    if (!(r > 0.0)) throw std::invalid_argument("scaling_check: r must be positive");
    double alpha = f.alpha();

    GeodesicGrid base_grid(z.dim, default_region_for(z, w, alpha, h));
    double base = d_distance(z, w, f, mu, base_grid);

    RVec rz = z * r, rw = w * r;
    GeodesicGrid scaled_grid(z.dim, default_region_for(rz, rw, alpha, r * h));
    double scaled = d_distance(rz, rw, f, mu, scaled_grid);

    ScalingReport rep;
    rep.r = r;
    rep.base_distance = base;
    rep.scaled_distance = scaled;
    rep.predicted_scaled = std::pow(r, 1.0 - alpha) * base;
    double denom = std::max(std::abs(rep.predicted_scaled), 1e-300);
    rep.relative_discrepancy = std::abs(scaled - rep.predicted_scaled) / denom;
    return rep;
}

double sandwich_phi(double z_euclid, double mu_wz, double alpha, double rho_upper,
                    double kappa_upper) {
    if (!(z_euclid > 0.0)) throw std::domain_error("phi: base point must be away from 0");
    double reach = z_euclid + rho_upper * mu_wz;
    if (alpha == 1.0) return std::log(reach / z_euclid) / (rho_upper * kappa_upper);
    if (alpha >= 0.0) {
        return (std::pow(z_euclid, 1.0 - alpha) - std::pow(reach, 1.0 - alpha)) /
               (rho_upper * kappa_upper * (alpha - 1.0));
    }
    // Negative exponents flip which endpoint dominates: the lower bound uses
    // how far inward the path could reach, clamped at 0.
    double inner = std::max(z_euclid - rho_upper * mu_wz, 0.0);
    return (std::pow(z_euclid, 1.0 - alpha) - std::pow(inner, 1.0 - alpha)) /
           (rho_upper * kappa_upper * (1.0 - alpha));
}

SandwichReport sandwich_check(const AlphaWeight& f, const Norm& mu, const RVec& z, const RVec& w,
                              double h) {
    require_metric_inputs(f, mu);
    SandwichReport rep;
    double alpha = f.alpha();
    double rho_upper = compute_shape_constants(mu, 2048).rho_upper;
    rep.phi = sandwich_phi(norm2(z), mu_eval(mu, w - z), alpha, rho_upper, f.kappa_upper());
    rep.chord_upper = segment_cost(z, w, f, mu, 64, 0);

    GeodesicGrid grid(z.dim, default_region_for(z, w, alpha, h));
    DistanceReport dist = d_distance_report(z, w, f, mu, grid);
    // The chord is a valid unrestricted path, so it caps the estimate even
    // when the grid region pinched the geodesic off.
    rep.numerical = std::min(dist.distance, rep.chord_upper);
    rep.tolerance = dist.error_budget + 1e-9 + 1e-6 * std::abs(rep.numerical);
    rep.ordered = rep.phi - rep.tolerance <= rep.numerical &&
                  rep.numerical <= rep.chord_upper + rep.tolerance;
    return rep;
}

namespace {

/// D(0, x) estimate from a solved field: best nearby node plus the closing
/// segment, capped by the exact radial ray value when alpha < 1.
double eval_from_field(const GeodesicGrid& grid, const GridSolve& solve, const RVec& x,
                       const AlphaWeight& f, const Norm& mu) {
    double best = kInf;
    if (f.alpha() < 1.0) best = radial_d_length(x, f, mu);
    std::array<std::int32_t, 3> base{0, 0, 0};
    for (int t = 0; t < grid.dim(); ++t)
        base[t] = static_cast<std::int32_t>(std::llround(x[t] / grid.h()));
    std::int32_t r = 2;
    std::int32_t jr = grid.dim() >= 2 ? r : 0, kr = grid.dim() >= 3 ? r : 0;
    for (std::int32_t di = -r; di <= r; ++di) {
        for (std::int32_t dj = -jr; dj <= jr; ++dj) {
            for (std::int32_t dk = -kr; dk <= kr; ++dk) {
                auto id = grid.node_at({base[0] + di, base[1] + dj, base[2] + dk});
                if (!id || !std::isfinite(solve.dist[*id])) continue;
                double v = solve.dist[*id] + segment_cost(grid.node_point(*id), x, f, mu, 16, 0);
                best = std::min(best, v);
            }
        }
    }
    return best;
}

}  // namespace

DBall trace_d_ball(const AlphaWeight& f, const Norm& mu, double radius, int angular_resolution) {
    require_metric_inputs(f, mu);
    double alpha = f.alpha();
    if (!(alpha < 1.0))
        throw std::invalid_argument("trace_d_ball: balls around 0 need alpha < 1");
    if (!(radius > 0.0)) throw std::invalid_argument("trace_d_ball: radius must be positive");
    int dim = f.dim();

    ShapeConstants sc = compute_shape_constants(mu, 2048);
    // Outer/inner ray radius bounds from the shell-crossing estimate.
    double r_hi = std::pow(radius * (1.0 - alpha) * f.kappa_upper() * sc.rho_upper,
                           1.0 / (1.0 - alpha));
    double r_lo = std::pow(radius * (1.0 - alpha) * f.kappa_lower() * sc.rho_lower,
                           1.0 / (1.0 - alpha));
    r_lo = std::min(r_lo, r_hi);

    GridRegion region;
    if (dim == 3) {
        region.h = std::max(std::min(r_hi / 26.0, r_lo / 10.0), r_hi / 48.0);
    } else {
        region.h = std::max(std::min(r_hi / 52.0, r_lo / 16.0), r_hi / 400.0);
    }
    std::string center_rule;
    std::vector<std::pair<std::uint32_t, double>> sources;
    region.r_out = r_hi * 1.08 + 6.0 * region.h;
    if (alpha > 0.0) {
        // Exact radial shell keeps the singular origin region out of the grid.
        double r0 = std::min(10.0 * region.h, 0.5 * r_lo);
        region.r_in = r0;
        center_rule = "exact ray integrals on the shell |z| = " + std::to_string(r0);
    } else {
        region.r_in = 0.0;
        center_rule = "exact ray integrals on the origin cells";
    }
    GeodesicGrid grid(dim, region);

    double seed_band = alpha > 0.0 ? region.r_in + 1.6 * region.h : 1.6 * region.h;
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        RVec p = grid.node_point(id);
        if (norm2(p) <= seed_band) sources.push_back({id, radial_d_length(p, f, mu)});
    }
    if (sources.empty()) throw std::runtime_error("trace_d_ball: seed shell holds no grid nodes");
    GridSolve solve = grid_shortest_paths(grid, f, mu, sources);

    DBall ball;
    ball.radius = radius;
    ball.grid_h = region.h;
    ball.bisection_tol = 1e-4;
    ball.center_rule = center_rule;
    if (dim == 1) {
        ball.directions = {RVec{1.0}, RVec{-1.0}};
    } else if (dim == 2) {
        if (angular_resolution < 3)
            throw std::invalid_argument("trace_d_ball: need at least 3 directions");
        ball.directions = circle_directions(angular_resolution);
    } else {
        ball.directions = icosphere_at_least(static_cast<std::size_t>(angular_resolution)).vertices;
    }
    ball.radii.assign(ball.directions.size(), 0.0);

    parallel_for(ball.directions.size(), [&](std::size_t k) {
        const RVec& u = ball.directions[k];
        double lo = 0.0, hi = r_hi * 1.02;
        for (int it = 0; it < 60 && hi - lo > ball.bisection_tol; ++it) {
            double mid = 0.5 * (lo + hi);
            double v = eval_from_field(grid, solve, u * mid, f, mu);
            (v < radius ? lo : hi) = mid;
        }
        ball.radii[k] = 0.5 * (lo + hi);
    });
    return ball;
}

void save_dball_csv(const std::string& path, const DBall& ball) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    int dim = ball.directions.empty() ? 2 : ball.directions.front().dim;
    static const char* cols[] = {"ux", "uy", "uz", "uw"};
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << cols[i];
    os << ",r\n";
    char buf[40];
    for (std::size_t k = 0; k < ball.directions.size(); ++k) {
        for (int i = 0; i < dim; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", ball.directions[k][i]);
            os << (i ? "," : "") << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g", ball.radii[k]);
        os << "," << buf << "\n";
    }
}

DBall load_dball_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("ux,", 0) != 0)
        throw std::runtime_error("ball csv: missing header");
    int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
    DBall ball;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string field;
        RVec u(dim);
        for (int i = 0; i < dim; ++i) {
            if (!std::getline(ls, field, ',')) throw std::runtime_error("ball csv: short row");
            u[i] = std::stod(field);
        }
        if (!std::getline(ls, field, ',')) throw std::runtime_error("ball csv: short row");
        ball.directions.push_back(u);
        ball.radii.push_back(std::stod(field));
    }
    return ball;
}

std::string dball_report_json(const DBall& ball) {
    char buf[256];
    std::string s = "{";
    std::snprintf(buf, sizeof buf, "\"bisection_tol\":%.17g,\"direction_count\":%zu,",
                  ball.bisection_tol, ball.directions.size());
    s += buf;
    s += "\"center_rule\":\"" + ball.center_rule + "\",";
    std::snprintf(buf, sizeof buf, "\"grid_h\":%.17g,\"radius\":%.17g}", ball.grid_h, ball.radius);
    s += buf;
    return s;
}

double cylinder_distance_closed_form(double q, double alpha, double kappa_upper_s) {
    if (!(q > 1.0)) throw std::invalid_argument("cylinder distance: q must exceed 1");
    if (!(alpha > 1.0)) throw std::invalid_argument("cylinder distance: alpha must exceed 1");
    if (!(kappa_upper_s > 0.0)) throw std::invalid_argument("cylinder distance: kappa must be positive");
    return (1.0 - std::pow(q, 1.0 - alpha)) / (kappa_upper_s * (alpha - 1.0));
}

TubeBounds tube_distance_bounds(double q, double alpha, double s, double zeta,
                                double kappa_upper_s, double kappa_lower_s) {
    if (!(q > 1.0) || !(alpha > 1.0) || !(s > 1.0) || zeta < 0.0 || !(kappa_upper_s > 0.0) ||
        !(kappa_lower_s > 0.0))
        throw std::invalid_argument("tube bounds: need q > 1, alpha > 1, s > 1, zeta >= 0");
    TubeBounds b;
    double ku = kappa_upper_s, kl = kappa_lower_s;
    b.upper = (1.0 - std::pow(q, 1.0 - alpha)) / (ku * (alpha - 1.0)) + 1.0 / kl;
    b.ball_lower = (1.0 - std::pow(q + zeta, 1.0 - alpha)) / (ku * (alpha - 1.0)) +
                   ((s - 1.0) * (q - 1.0) - zeta) / (ku * std::pow(q + zeta, alpha));
    b.global_lower = (1.0 + std::pow(q, 1.0 - alpha) -
                      std::pow(2.0, alpha) * std::pow(q + 1.0 + s * (q - 1.0), 1.0 - alpha)) /
                     (ku * (alpha - 1.0));
    return b;
}

}  // namespace wfpp
