#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wfpp/geom.hpp"
#include "wfpp/norms.hpp"
#include "wfpp/profiles.hpp"

namespace wfpp {

/// Piecewise linear path through d-space.
struct PLPath {
    std::vector<RVec> points;

    PLPath() = default;
    explicit PLPath(std::vector<RVec> pts) : points(std::move(pts)) {}
    bool empty() const { return points.size() < 2; }
};

/// Curve length weighted by 1/f, integrated against mu-arclength.  Each
/// segment is evaluated by Gauss-Legendre quadrature after substituting the
/// mu-length of the segment; no reparametrization is materialized.  A segment
/// with an endpoint at 0, or passing through 0, is radial there and is
/// integrated in closed form, which requires alpha < 1; otherwise a
/// domain_error reports the non-integrable singularity.  Segments passing
/// near (but not through) 0 are split at the closest point to keep the
/// quadrature conditioned.
double d_length(const PLPath& path, const AlphaWeight& f, const Norm& mu, int quad_nodes = 8);

/// Exact weighted length of the radial segment 0 -> p (alpha < 1).
double radial_d_length(const RVec& p, const AlphaWeight& f, const Norm& mu);

/// Shell domain {r_in <= norm(z) <= r_out} with grid spacing h.  r_in = 0
/// leaves only the origin guard |z| >= h/2, which every grid applies.
struct GridRegion {
    double h = 0.05;
    Norm norm;  // invalid => Euclidean
    double r_in = 0.0;
    double r_out = 2.0;

    bool contains(const RVec& z) const;
};

/// Nodes of h Z^d clipped to a region, with a fixed neighbor stencil:
/// +-1 steps in d=1, axis+diagonal+knight moves (16 neighbors) in d=2, the
/// full 26-neighbor cube in d=3.  Geometry only; edge costs are computed by
/// the shortest-path solver from the weight and norm at hand.
class GeodesicGrid {
  public:
    GeodesicGrid(int dim, GridRegion region);

    int dim() const { return dim_; }
    double h() const { return region_.h; }
    const GridRegion& region() const { return region_; }
    std::size_t node_count() const { return coords_.size(); }
    RVec node_point(std::uint32_t id) const;
    /// Nearest node to z among cells within Chebyshev distance 2; nullopt if
    /// that neighborhood holds no node.
    std::optional<std::uint32_t> nearest_node(const RVec& z) const;
    const std::vector<std::array<std::int32_t, 3>>& stencil() const { return stencil_; }
    std::optional<std::uint32_t> node_at(const std::array<std::int32_t, 3>& c) const;
    const std::array<std::int32_t, 3>& node_coords(std::uint32_t id) const { return coords_[id]; }

  private:
    int dim_;
    GridRegion region_;
    std::vector<std::array<std::int32_t, 3>> coords_;
    std::unordered_map<std::uint64_t, std::uint32_t> ids_;
    std::vector<std::array<std::int32_t, 3>> stencil_;
};

/// Multi-source Dijkstra over a grid; dist is +infinity where unreachable.
/// Ties pop the smallest node id, so results are deterministic.
struct GridSolve {
    std::vector<double> dist;
    std::vector<std::uint32_t> parent;  // UINT32_MAX at sources / unreached
};
GridSolve grid_shortest_paths(const GeodesicGrid& grid, const AlphaWeight& f, const Norm& mu,
                              const std::vector<std::pair<std::uint32_t, double>>& sources,
                              std::optional<std::uint32_t> early_exit = std::nullopt);

/// Shortest-path estimate of the weighted distance with endpoint snapping,
/// greedy straightening of the realized polyline (vertex removal against the
/// domain), and the direct chord as a candidate.  The result is always the
/// weighted length of an admissible path, hence an upper bound on D up to
/// quadrature error.  Symmetric in (z, w) exactly.  Throws domain_error if an
/// endpoint is outside the grid region and runtime_error if no path exists.
struct DistanceReport {
    double distance = 0.0;
    PLPath path;            // realized witness, endpoints included
    double grid_h = 0.0;
    double error_budget = 0.0;  // stencil anisotropy + snap slack, additive
};
DistanceReport d_distance_report(const RVec& z, const RVec& w, const AlphaWeight& f,
                                 const Norm& mu, const GeodesicGrid& grid);
double d_distance(const RVec& z, const RVec& w, const AlphaWeight& f, const Norm& mu,
                  const GeodesicGrid& grid);

/// d_distance on a grid freshly clipped to the region.
double d_distance_restricted(const RVec& z, const RVec& w, const AlphaWeight& f, const Norm& mu,
                             const GridRegion& region);

/// Region sized so that geodesics between z and w fit with margin; alpha
/// decides whether the origin neighborhood is kept (paths are drawn toward 0
/// when alpha <= 0, repelled when alpha >= 1).
GridRegion default_region_for(const RVec& z, const RVec& w, double alpha, double h);

/// Self-similarity of the metric: D(rz, rw) against r^{1-alpha} D(z, w),
/// both sides solved on proportionally scaled grids.
struct ScalingReport {
    double r = 1.0;
    double base_distance = 0.0;
    double scaled_distance = 0.0;
    double predicted_scaled = 0.0;  // r^{1-alpha} * base
    double relative_discrepancy = 0.0;
};
ScalingReport scaling_check(const AlphaWeight& f, const Norm& mu, const RVec& z, const RVec& w,
                            double r, double h = 0.02);

/// Comparison bounds around the numerical distance: the closed-form lower
/// bound phi (branching on alpha) and the straight-chord upper bound.
struct SandwichReport {
    double phi = 0.0;
    double numerical = 0.0;
    double chord_upper = 0.0;
    double tolerance = 0.0;
    bool ordered = false;  // phi - tol <= numerical <= chord_upper + tol
};
double sandwich_phi(double z_euclid, double mu_wz, double alpha, double rho_upper,
                    double kappa_upper);
SandwichReport sandwich_check(const AlphaWeight& f, const Norm& mu, const RVec& z, const RVec& w,
                              double h = 0.02);

/// Boundary of the ball {x : D(0,x) <= radius}, traced by bisection along
/// rays from 0.  Requires alpha < 1 so D(0, .) is finite.  The solve seeds an
/// exact radial shell near 0 (the closed-form ray integral) and relaxes it
/// through the grid, so the seed's radial-path bias is corrected.
struct DBall {
    double radius = 1.0;              // in D-units
    std::vector<RVec> directions;     // Euclidean unit vectors, angle-ordered in d=2
    std::vector<double> radii;        // r(u) with D(0, r(u) u) = radius
    double grid_h = 0.0;
    double bisection_tol = 1e-4;
    std::string center_rule;
};
DBall trace_d_ball(const AlphaWeight& f, const Norm& mu, double radius, int angular_resolution);

void save_dball_csv(const std::string& path, const DBall& ball);
DBall load_dball_csv(const std::string& path);
std::string dball_report_json(const DBall& ball);

/// Exact distance between the shells of a convex cylinder body and its
/// q-dilate under an admissible profile with axial maximum kappa_upper_s.
double cylinder_distance_closed_form(double q, double alpha, double kappa_upper_s);

/// Closed-form bounds on the distance from the shell to the q-dilate when
/// paths are confined to a tube, plus the unrestricted global lower bound.
struct TubeBounds {
    double upper = 0.0;
    double ball_lower = 0.0;
    double global_lower = 0.0;
};
TubeBounds tube_distance_bounds(double q, double alpha, double s, double zeta,
                                double kappa_upper_s, double kappa_lower_s);

}  // namespace wfpp
