#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfpp/engine.hpp"
#include "wfpp/geom.hpp"
#include "wfpp/norms.hpp"
#include "wfpp/profiles.hpp"

namespace wfpp {

/// Cylinder body: unit ball {t * axis * halfheight + z : |t| <= 1, cross(z) <= s},
/// the product of an axis segment and an s-dilated cross-section in the
/// orthogonal hyperplane.  The gauge is the max of the two coordinates'
/// gauges.
struct CylinderSpec {
    RVec axis;                    // unit Euclidean direction
    double axis_halfheight = 1.0;
    Norm cross_section;           // norm on R^{dim-1}; invalid => Euclidean
    double aspect = 2.0;          // s

    int dim() const { return axis.dim; }
};

/// Coordinates of z relative to the cylinder: signed axial component and the
/// cross-section gauge of the orthogonal part.
double axial_coordinate(const CylinderSpec& spec, const RVec& z);
double lateral_gauge(const CylinderSpec& spec, const RVec& z);

/// The cylinder gauge as a norm value:
/// max(|axial|/halfheight, lateral/aspect).
Norm cylinder_norm(const CylinderSpec& spec);

/// Axis along e1, halfheight rho, cross-section the Euclidean ball of radius
/// rho in the orthogonal hyperplane: the smallest admissible cross-section
/// when rho is the largest Euclidean radius of the reference shape.
CylinderSpec default_cylinder(int dim, double aspect, double rho = 1.0);

/// Weight profile on the cylinder shell: equal to kappa_upper_s on the two
/// flat faces, tapering to kappa_lower_s on the equator as
/// kappa_lower + (kappa_upper - kappa_lower) * t^taper_power in the relative
/// axial height t.  Continuous across the face edge, Lipschitz on the shell.
struct AdmissibleProfile {
    double kappa_upper_s = 1.0;
    double kappa_lower_s = 1.0;
    double taper_power = 2.0;

    double eval_on_shell(const CylinderSpec& spec, const RVec& u) const;
};

/// Weight function f(z) = gauge(z)^alpha * profile(z / gauge(z)) wrapped as
/// a weight over the Euclidean sphere.
AlphaWeight cylinder_weight(const CylinderSpec& spec, const AdmissibleProfile& profile,
                            double alpha);

/// Cone of positive dilations of the flat face in the axis direction.
struct ConeSpec {
    CylinderSpec cylinder;

    /// Strict membership: z != 0, positive axial side, and the axial gauge
    /// dominates the lateral one.
    bool contains(const RVec& z) const;
    /// Full opening angle of the smallest Euclidean cone containing it.
    double euclidean_opening_angle() const;
};

/// Growth-direction thresholds in the aspect s: crossing the first makes
/// one-sided escape possible, crossing the second makes it almost sure.
struct ConeConditionReport {
    double t1 = 0.0;
    double t2 = 0.0;
    bool pos_prob = false;    // s > t1
    bool almost_sure = false; // s > t2
};
ConeConditionReport check_cone_conditions(double alpha, double s, double kappa_upper_s,
                                          double kappa_lower_s);

/// Covering regime bound: alpha below 1 + 1/(rho_upper kappa_upper lambda).
double alpha_near_1_threshold(double rho_upper, double kappa_upper, double lambda);
bool check_alpha_near_1_condition(double alpha, double rho_upper, double kappa_upper,
                                  double lambda);

/// Cone membership of the most recently absorbed vertices of a run.
struct ConeStats {
    double in_k = 0.0;       // fraction of the tail inside the cone
    double in_neg_k = 0.0;   // fraction inside the reflected cone
    std::uint64_t outside_both = 0;
    std::uint64_t tail_count = 0;
};
ConeStats cone_membership_stats(const RunResult& result, const ConeSpec& cone,
                                double tail_fraction);

/// Boundary sampling utilities for cylinder shells (testing aids).
std::vector<RVec> sample_cylinder_shell(const CylinderSpec& spec, double scale, int count);
std::vector<RVec> sample_cylinder_lateral(const CylinderSpec& spec, double scale, int count);
double euclid_set_distance(const std::vector<RVec>& a, const std::vector<RVec>& b);

/// Direction-binned gauge of the time-rescaled fattened growth cluster under
/// unit weights, averaged over replicates, symmetrized under the lattice
/// symmetries, and convexified by hulling.  d=2.
struct EmpiricalNorm {
    TabulatedShape2D shape;
    double time = 0.0;
    int replicates = 0;
    std::vector<std::uint64_t> seeds;

    Norm to_norm() const;
};
EmpiricalNorm estimate_mu(int replicates, double t, std::uint64_t seed, int direction_bins);

/// True when consecutive boundary points of the tabulated shape always turn
/// the same way (the radial profile describes a convex set).
bool shape_convexity_check(const TabulatedShape2D& shape, double tol = 1e-9);

}  // namespace wfpp
