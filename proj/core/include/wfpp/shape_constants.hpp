#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wfpp/norms.hpp"
#include "wfpp/profiles.hpp"

namespace wfpp {

/// Extrema of a continuous function over the Euclidean unit sphere, located
/// by a dense direction grid with deterministic local refinement.
struct SphereExtrema {
    double max_value;
    double min_value;
    std::vector<RVec> max_directions;  // all grid directions within rel. 1e-6 of the max
    std::vector<RVec> min_directions;
};

SphereExtrema extremize_on_sphere(int dim, const std::function<double(const RVec&)>& g,
                                  int direction_count);

/// rho_upper = sup |u|/mu(u), rho_lower = inf |u|/mu(u) over unit directions,
/// with the extremal directions.
struct ShapeConstants {
    double rho_upper;
    double rho_lower;
    std::vector<RVec> upper_directions;
    std::vector<RVec> lower_directions;
};

ShapeConstants compute_shape_constants(const Norm& mu, int direction_count = 4096);

/// Half circumference of the unit sphere in the path metric with speed f and
/// length element mu: shortest inscribed-chord path cost between the farthest
/// node pair, extrapolated over three grid resolutions.
struct LambdaReport {
    double value;             // extrapolated
    double finest_value;      // raw value at the finest resolution
    double error_estimate;    // |extrapolated - finest|
    std::vector<int> resolutions;
    std::vector<double> values;
};

LambdaReport compute_lambda_report(const AlphaWeight& f, const Norm& mu, int sphere_resolution);
double compute_lambda(const AlphaWeight& f, const Norm& mu, int sphere_resolution);

/// Sampled Lipschitz diagnostics for f0 on the sphere and the induced
/// full-space bound |f(z)-f(w)| <= a (|z|^(a-1) v |w|^(a-1)) |z-w| with
/// a = 2 L + |alpha| kappa_upper.
struct LipschitzReport {
    double max_sphere_ratio;       // max |f0(u)-f0(v)| / |u-v| over samples
    double declared_bound;
    double full_space_constant;    // the a above
    int full_space_violations;     // sampled pairs breaking the bound
    bool consistent;               // sphere ratio <= declared bound (with slack)
};

LipschitzReport check_lipschitz(const AlphaWeight& f, int sample_count, std::uint64_t seed = 1);

}  // namespace wfpp
