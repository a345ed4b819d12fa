#include "wfpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wfpp/parallel.hpp"
#include "wfpp/rng.hpp"
#include "wfpp/shape_constants.hpp"
#include "wfpp/sphere_grid.hpp"

namespace wfpp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Deterministic orthonormal basis of the hyperplane orthogonal to axis.
std::vector<RVec> orthogonal_basis(const RVec& axis) {
    std::vector<RVec> basis;
    int d = axis.dim;
    for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
        RVec v(d);
        v[i] = 1.0;
        v -= axis * dot(v, axis);
        for (const RVec& b : basis) v -= b * dot(v, b);
        double n = norm2(v);
        if (n > 1e-10) basis.push_back(v * (1.0 / n));
    }
    return basis;
}

void check_cylinder(const CylinderSpec& spec) {
    if (spec.dim() < 1 || spec.dim() > kMaxDim)
        throw std::invalid_argument("cylinder: axis dimension out of range");
    if (std::abs(norm2(spec.axis) - 1.0) > 1e-9)
        throw std::invalid_argument("cylinder: axis must be a unit vector");
    if (!(spec.axis_halfheight > 0.0))
        throw std::invalid_argument("cylinder: halfheight must be positive");
    if (!(spec.aspect > 0.0)) throw std::invalid_argument("cylinder: aspect must be positive");
    if (spec.cross_section.valid() && spec.cross_section.dim() != spec.dim() - 1)
        throw std::invalid_argument("cylinder: cross-section norm has the wrong dimension");
}

}  // namespace

double axial_coordinate(const CylinderSpec& spec, const RVec& z) { return dot(z, spec.axis); }

double lateral_gauge(const CylinderSpec& spec, const RVec& z) {
    int d = spec.dim();
    if (d == 1) return 0.0;
    std::vector<RVec> basis = orthogonal_basis(spec.axis);
    RVec y(d - 1);
    for (int i = 0; i < d - 1; ++i) y[i] = dot(z, basis[i]);
    if (spec.cross_section.valid()) return spec.cross_section(y);
    return norm2(y);
}

namespace {

class CylinderNormImpl final : public Norm::Impl {
  public:
    explicit CylinderNormImpl(CylinderSpec spec) : spec_(std::move(spec)) {
        check_cylinder(spec_);
    }
    double eval(const RVec& z) const override {
        double ax = std::abs(axial_coordinate(spec_, z)) / spec_.axis_halfheight;
        double lat = lateral_gauge(spec_, z) / spec_.aspect;
        return std::max(ax, lat);
    }
    int dim() const override { return spec_.dim(); }
    std::string describe() const override {
        char buf[128];
        std::snprintf(buf, sizeof buf, "cylinder:a=%g:s=%g:cross=%s", spec_.axis_halfheight,
                      spec_.aspect,
                      spec_.cross_section.valid() ? spec_.cross_section.describe().c_str()
                                                  : "euclidean");
        return buf;
    }

  private:
    CylinderSpec spec_;
};

}  // namespace

Norm cylinder_norm(const CylinderSpec& spec) {
    return Norm(std::make_shared<CylinderNormImpl>(spec));
}

CylinderSpec default_cylinder(int dim, double aspect, double rho) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("cylinder: dimension out of range");
    if (!(rho > 0.0)) throw std::invalid_argument("cylinder: rho must be positive");
    CylinderSpec spec;
    spec.axis = RVec(dim);
    spec.axis[0] = 1.0;
    spec.axis_halfheight = rho;
    spec.aspect = aspect;
    if (dim > 1 && rho != 1.0)
        spec.cross_section = Norm::scaled(Norm::euclidean(dim - 1), 1.0 / rho);
    else if (dim > 1)
        spec.cross_section = Norm::euclidean(dim - 1);
    return spec;
}

double AdmissibleProfile::eval_on_shell(const CylinderSpec& spec, const RVec& u) const {
    if (!(kappa_upper_s >= kappa_lower_s) || !(kappa_lower_s > 0.0))
        throw std::invalid_argument("shell profile: need 0 < kappa_lower <= kappa_upper");
    double ax = std::abs(axial_coordinate(spec, u)) / spec.axis_halfheight;
    double lat = lateral_gauge(spec, u) / spec.aspect;
    double gauge = std::max(ax, lat);
    if (!(gauge > 0.0)) throw std::domain_error("shell profile: no direction at 0");
    if (ax >= lat) return kappa_upper_s;  // flat face
    double t = ax / gauge;  // relative axial height on the lateral shell, in [0, 1)
    return kappa_lower_s + (kappa_upper_s - kappa_lower_s) * std::pow(t, taper_power);
}

AlphaWeight cylinder_weight(const CylinderSpec& spec, const AdmissibleProfile& profile,
                            double alpha) {
    check_cylinder(spec);
    Norm gauge = cylinder_norm(spec);
    char buf[160];
    std::snprintf(buf, sizeof buf, "cylshell:ku=%g:kl=%g:p=%g:%s", profile.kappa_upper_s,
                  profile.kappa_lower_s, profile.taper_power, gauge.describe().c_str());
    CylinderSpec spec_copy = spec;
    AdmissibleProfile prof_copy = profile;
    // f(z) = nu_s(z)^alpha f0(z / nu_s(z)) with f0 the shell profile; sampled
    // here on Euclidean unit vectors u, where nu_s(u) = gauge(u).
    return AlphaWeight(alpha, SphereProfile::custom(
                                  spec.dim(), buf,
                                  [spec_copy, prof_copy, gauge, alpha](const RVec& u) {
                                      double g = gauge(u);
                                      return std::pow(g, alpha) *
                                             prof_copy.eval_on_shell(spec_copy, u);
                                  }));
}

bool ConeSpec::contains(const RVec& z) const {
    double ax = axial_coordinate(cylinder, z);
    if (!(ax > 0.0)) return false;
    double lat = lateral_gauge(cylinder, z);
    return ax / cylinder.axis_halfheight >= lat / cylinder.aspect;
}

double ConeSpec::euclidean_opening_angle() const {
    int d = cylinder.dim();
    if (d == 1) return 0.0;
    double cross_radius = 1.0;
    if (cylinder.cross_section.valid())
        cross_radius = compute_shape_constants(cylinder.cross_section, 1024).rho_upper;
    return 2.0 * std::atan2(cylinder.aspect * cross_radius, cylinder.axis_halfheight);
}

ConeConditionReport check_cone_conditions(double alpha, double s, double kappa_upper_s,
                                          double kappa_lower_s) {
    if (!(alpha > 1.0)) throw std::invalid_argument("cone conditions: alpha must exceed 1");
    if (!(s > 1.0)) throw std::invalid_argument("cone conditions: aspect must exceed 1");
    if (!(kappa_lower_s > 0.0) || !(kappa_upper_s >= kappa_lower_s))
        throw std::invalid_argument("cone conditions: need 0 < kappa_lower <= kappa_upper");
    ConeConditionReport rep;
    rep.t1 = std::pow(2.0, alpha / (alpha - 1.0)) - 1.0;
    rep.t2 = 1.0 + (kappa_upper_s / kappa_lower_s) * std::pow(alpha, alpha) /
                       std::pow(alpha - 1.0, alpha - 1.0);
    rep.pos_prob = s > rep.t1;
    rep.almost_sure = s > rep.t2;
    return rep;
}

double alpha_near_1_threshold(double rho_upper, double kappa_upper, double lambda) {
    if (!(rho_upper > 0.0) || !(kappa_upper > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("covering threshold: constants must be positive");
    return 1.0 + 1.0 / (rho_upper * kappa_upper * lambda);
}

bool check_alpha_near_1_condition(double alpha, double rho_upper, double kappa_upper,
                                  double lambda) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("covering condition: alpha must be >= 1");
    return alpha < alpha_near_1_threshold(rho_upper, kappa_upper, lambda);
}

ConeStats cone_membership_stats(const RunResult& result, const ConeSpec& cone,
                                double tail_fraction) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw std::invalid_argument("cone stats: tail fraction must be in (0, 1]");
    int dim = result.state.dim;

    std::vector<Vertex> order;
    order.reserve(result.state.vertex_times.size());
    order.push_back(result.state.root);
    std::unordered_map<Vertex, bool, VertexHash> seen;
    seen.emplace(result.state.root, true);
    for (const auto& ae : result.state.edges) {
        for (const Vertex& v : {ae.edge.a, ae.edge.b()}) {
            if (seen.emplace(v, true).second) order.push_back(v);
        }
    }

    std::uint64_t total = order.size();
    std::uint64_t tail = static_cast<std::uint64_t>(std::ceil(tail_fraction * double(total)));
    if (tail == 0) tail = 1;
    if (tail > total) tail = total;

    ConeStats st;
    st.tail_count = tail;
    std::uint64_t pos = 0, neg = 0;
    for (std::uint64_t i = total - tail; i < total; ++i) {
        RVec z = order[i].to_rvec(dim);
        bool in_pos = cone.contains(z);
        RVec zn = z * -1.0;
        bool in_neg = cone.contains(zn);
        if (in_pos) ++pos;
        if (in_neg) ++neg;
        if (!in_pos && !in_neg) ++st.outside_both;
    }
    st.in_k = double(pos) / double(tail);
    st.in_neg_k = double(neg) / double(tail);
    return st;
}

std::vector<RVec> sample_cylinder_shell(const CylinderSpec& spec, double scale, int count) {
    check_cylinder(spec);
    if (count < 2) throw std::invalid_argument("shell sampling: need at least 2 points");
    Norm gauge = cylinder_norm(spec);
    std::vector<RVec> dirs;
    if (spec.dim() == 1) {
        dirs = {RVec{1.0}, RVec{-1.0}};
    } else if (spec.dim() == 2) {
        dirs = circle_directions(count);
    } else {
        dirs = icosphere_at_least(static_cast<std::size_t>(count)).vertices;
    }
    std::vector<RVec> out;
    out.reserve(dirs.size());
    for (const RVec& u : dirs) out.push_back(u * (scale / gauge(u)));
    return out;
}

std::vector<RVec> sample_cylinder_lateral(const CylinderSpec& spec, double scale, int count) {
    std::vector<RVec> shell = sample_cylinder_shell(spec, scale, count);
    std::vector<RVec> out;
    for (const RVec& p : shell) {
        double ax = std::abs(axial_coordinate(spec, p)) / spec.axis_halfheight;
        double lat = lateral_gauge(spec, p) / spec.aspect;
        if (lat >= ax) out.push_back(p);
    }
    return out;
}

double euclid_set_distance(const std::vector<RVec>& a, const std::vector<RVec>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("set distance: empty sample");
    double best = std::numeric_limits<double>::infinity();
    for (const RVec& p : a) {
        for (const RVec& q : b) best = std::min(best, norm2(p - q));
    }
    return best;
}

Norm EmpiricalNorm::to_norm() const { return norm_from_shape(shape); }

namespace {

/// Gauge radius of the convex hull of pts along direction theta, assuming 0
/// is interior.
double hull_ray_radius(const std::vector<RVec>& hull, double theta) {
    double cx = std::cos(theta), sy = std::sin(theta);
    double best = 0.0;
    std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const RVec& A = hull[i];
        const RVec& B = hull[(i + 1) % n];
        // Solve A + u (B - A) = t (cx, sy).
        double ex = B[0] - A[0], ey = B[1] - A[1];
        double det = ex * sy - ey * cx;
        if (std::abs(det) < 1e-15) continue;
        double u = (A[1] * cx - A[0] * sy) / det;
        double t = (std::abs(cx) > std::abs(sy)) ? (A[0] + u * ex) / cx : (A[1] + u * ey) / sy;
        if (u >= -1e-12 && u <= 1.0 + 1e-12 && t > best) best = t;
    }
    return best;
}

std::vector<RVec> convex_hull_2d(std::vector<RVec> pts) {
    std::sort(pts.begin(), pts.end(), [](const RVec& a, const RVec& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const RVec& o, const RVec& a, const RVec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<RVec> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;  // CCW
}

}  // namespace

EmpiricalNorm estimate_mu(int replicates, double t, std::uint64_t seed, int direction_bins) {
    if (replicates < 1) throw std::invalid_argument("shape estimate: need replicates >= 1");
    if (!(t >= 50.0)) throw std::invalid_argument("shape estimate: need time >= 50");
    if (direction_bins < 8 || direction_bins % 4 != 0)
        throw std::invalid_argument("shape estimate: direction bins must be a multiple of 4, >= 8");

    const int n = direction_bins;
    const double bin_width = kTwoPi / n;
    AlphaWeight unit_weight(0.0, SphereProfile::constant(2, 1.0));

    std::vector<std::vector<double>> per_rep(replicates);
    std::vector<std::uint64_t> seeds(replicates);
    for (int r = 0; r < replicates; ++r) seeds[r] = derive_seed(seed, r);

    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
        RunConfig cfg;
        cfg.dim = 2;
        cfg.weight = unit_weight;
        cfg.seed = seeds[r];
        cfg.stop = StopRule::at_time(t);
        RunResult res = run_fpp(cfg);

        std::vector<double> bins(n, 0.0);
        for (const auto& [v, tv] : res.state.vertex_times) {
            for (int corner = 0; corner < 4; ++corner) {
                double cx = v[0] + (corner & 1 ? 0.5 : -0.5);
                double cy = v[1] + (corner & 2 ? 0.5 : -0.5);
                double radius = std::hypot(cx, cy) / t;
                double angle = std::atan2(cy, cx);
                if (angle < 0) angle += kTwoPi;
                int b = std::min(n - 1, static_cast<int>(angle / bin_width));
                bins[b] = std::max(bins[b], radius);
            }
        }
        per_rep[r] = std::move(bins);
    });

    std::vector<double> mean(n, 0.0);
    for (int r = 0; r < replicates; ++r) {
        for (int b = 0; b < n; ++b) {
            if (per_rep[r][b] <= 0.0)
                throw std::runtime_error("shape estimate: empty direction bin " +
                                         std::to_string(b) + "; increase time or bin width");
            mean[b] += per_rep[r][b];
        }
    }
    for (int b = 0; b < n; ++b) mean[b] /= replicates;

    // Average each bin over its orbit under the 8 lattice symmetries.
    std::vector<double> sym(n, 0.0);
    int quarter = n / 4;
    for (int b = 0; b < n; ++b) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            acc += mean[(b + k * quarter) % n];
            acc += mean[((n - 1 - b) + k * quarter + n) % n];
        }
        sym[b] = acc / 8.0;
    }

    std::vector<double> angles(n);
    std::vector<RVec> pts(n);
    for (int b = 0; b < n; ++b) {
        angles[b] = (b + 0.5) * bin_width;
        pts[b] = RVec{sym[b] * std::cos(angles[b]), sym[b] * std::sin(angles[b])};
    }
    std::vector<RVec> hull = convex_hull_2d(pts);
    std::vector<double> hulled(n);
    for (int b = 0; b < n; ++b) hulled[b] = hull_ray_radius(hull, angles[b]);

    EmpiricalNorm out;
    out.shape.angles = angles;
    out.shape.radii = hulled;
    out.time = t;
    out.replicates = replicates;
    out.seeds = std::move(seeds);
    return out;
}

bool shape_convexity_check(const TabulatedShape2D& shape, double tol) {
    std::size_t n = shape.angles.size();
    if (n < 3 || shape.radii.size() != n) return false;
    std::vector<RVec> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = RVec{shape.radii[i] * std::cos(shape.angles[i]),
                      shape.radii[i] * std::sin(shape.angles[i])};
    }
    for (std::size_t i = 0; i < n; ++i) {
        const RVec& a = pts[i];
        const RVec& b = pts[(i + 1) % n];
        const RVec& c = pts[(i + 2) % n];
        double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        double scale = norm2(b - a) * norm2(c - b);
        if (cross < -tol * std::max(scale, 1e-30)) return false;
    }
    return true;
}

}  // namespace wfpp
