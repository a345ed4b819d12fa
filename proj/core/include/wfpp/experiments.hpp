#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfpp/dmetric.hpp"
#include "wfpp/engine.hpp"
#include "wfpp/geometry.hpp"
#include "wfpp/stats.hpp"

namespace wfpp {

/// Parameters for the cylinder-shell weight used by the cone experiment.
struct ConeParams {
    double alpha = 3.0;
    double aspect = 8.0;  // s
    double kappa_upper = 1.0;
    double kappa_lower = 1.0;
    double taper_power = 2.0;
};

/// One experiment, fully determined by its fields plus engine_config.seed.
/// Each kind reads the subset of fields it needs and ignores the rest.
struct ExperimentSpec {
    std::string kind;  // limit_shape | covering | cone | urn_d1 | chi_estimate | mu_estimate
    RunConfig engine_config;
    int replicates = 20;

    std::vector<double> times;   // limit_shape, chi_estimate checkpoints
    std::vector<int> annuli;     // covering schedule of annulus indices n
    double covering_factor = 8.0;

    std::uint64_t edges_per_run = 100000;  // cone
    double tail_fraction = 0.10;
    double tail_threshold = 0.99;  // containment cutoff; a reporting choice, not a theorem constant
    ConeParams cone;

    int urn_steps = 20;

    int direction_bins = 256;   // boundary binning and traced-ball directions
    double shape_time = 100.0;  // mu_estimate run length

    Norm reference_mu;  // invalid => Euclidean
    std::string output_dir;
};

/// Throws std::invalid_argument on malformed generic fields (replicates,
/// schedules). Kind-specific preconditions are checked by the runners.
void validate_experiment_spec(const ExperimentSpec& spec);

/// Centers of the faces separating absorbed from unabsorbed sites, i.e. the
/// boundary of the fattened cluster sampled at one point per unit face.
std::vector<RVec> fattened_boundary_2d(const ClusterState& state);

/// Symmetric Hausdorff distance between two nonempty point sets.
double hausdorff_distance(const std::vector<RVec>& a, const std::vector<RVec>& b);

struct ShapeReport {
    std::vector<double> times;
    std::vector<std::vector<double>> distances;  // [time][replicate]
    std::vector<double> mean_distance;           // per time
    double exponent;                             // log-log slope of mean distance vs time
    bool has_exponent = false;                   // false for a single checkpoint
    BootstrapCI exponent_ci;                     // over replicates; empty unless has_exponent
    DBall reference;                             // traced comparison ball
    double rescale_exponent;                     // 1/(1-alpha)
    std::vector<std::uint64_t> seeds;
};

/// Rescales each checkpoint cluster by t^(-1/(1-alpha)) and measures the
/// Hausdorff distance of its fattened boundary to the traced unit ball of
/// the deterministic metric for the same (f, mu). Requires alpha < 1, d=2.
ShapeReport run_limit_shape(const ExperimentSpec& spec);

struct CoveringReport {
    std::vector<int> annuli;
    std::vector<double> swallow_fraction;        // per n
    std::vector<std::vector<bool>> swallowed;    // [n][replicate]
    double factor;                               // stop radius = factor * n
    int replicates;
    bool condition_checked = false;
    bool condition_ok = false;                   // alpha below the covering threshold
    double condition_threshold = 0.0;
    bool warned = false;                         // ran despite a failed condition
    std::vector<std::uint64_t> seeds;
};

/// For each n, runs to Euclidean exit radius factor*n and checks whether
/// every lattice site of the annulus B_n minus B_{n-1} was absorbed.
CoveringReport run_covering(const ExperimentSpec& spec);

struct ConeReport {
    ConeConditionReport conditions;
    ConeParams params;
    std::vector<ConeStats> per_run;
    double pass_fraction;   // runs whose tail is >= tail_threshold inside one of the two cones
    double tail_fraction;
    double tail_threshold;
    std::uint64_t edges_per_run;
    int replicates;
    std::vector<std::uint64_t> seeds;
};

/// Runs the growth chain under the cylinder-shell weight and classifies the
/// late tail of absorbed vertices against the two face cones.
ConeReport run_cone(const ExperimentSpec& spec);

struct UrnReport {
    int steps;
    std::vector<double> exact;        // DP law of the right count, index 0..steps
    std::vector<std::uint64_t> counts;
    std::vector<double> empirical;
    double tv_distance;
    int replicates;
    std::uint64_t seed;
};

/// Exact law of the right-edge count after the given number of steps of the
/// d=1 chain with f(z)=|z|: attachment odds (k_R+1/2) : (k_L+1/2).
std::vector<double> urn_exact_law(int steps);

/// Monte Carlo d=1 chain versus the exact law. Requires dim=1.
UrnReport run_urn_d1(const ExperimentSpec& spec);

/// Per-time, per-replicate outer radius of the rescaled cluster boundary in
/// binned directions; the raw material of the fluctuation-exponent fit.
struct RadialSamples {
    std::vector<double> times;
    std::vector<std::vector<std::vector<double>>> radial;  // [time][replicate][bin]
};

struct ChiReport {
    std::vector<double> times;
    std::vector<double> widths;  // mean over replicates of max radial deviation
    double chi_hat;
    BootstrapCI ci;
    int direction_bins;
    int replicates;
    std::vector<std::uint64_t> seeds;
};

/// Fits width(t) ~ c t^(-chi) with a percentile bootstrap over replicates.
/// Split out from the runner so synthetic radial data can exercise the fit.
ChiReport chi_from_radial_samples(const RadialSamples& samples, int bootstrap_resamples = 200,
                                  std::uint64_t seed = 1);

/// Requires alpha < 1, d=2, at least 4 times spanning at least 2 decades.
ChiReport estimate_chi(const ExperimentSpec& spec);

struct MuReport {
    EmpiricalNorm empirical;
    bool convex;
    double axis_radius;  // fitted shape radius along the first axis
};

/// Standard-growth shape estimate; wraps the d=2 boundary estimator.
MuReport run_mu_estimate(const ExperimentSpec& spec);

/// JSON summaries. Keys are emitted in sorted order, so equal reports give
/// byte-identical text.
std::string shape_report_json(const ShapeReport& rep);
std::string covering_report_json(const CoveringReport& rep);
std::string cone_report_json(const ConeReport& rep);
std::string urn_report_json(const UrnReport& rep);
std::string chi_report_json(const ChiReport& rep);
std::string mu_report_json(const MuReport& rep);

/// Column-oriented numeric table with a CSV round trip: save then load gives
/// back equal columns and bit-equal values.
struct NumericTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // each row has one value per column
};

void save_table_csv(const std::string& path, const NumericTable& table);
NumericTable load_table_csv(const std::string& path);
bool tables_equal(const NumericTable& a, const NumericTable& b);

NumericTable shape_distance_table(const ShapeReport& rep);
NumericTable covering_table(const CoveringReport& rep);
NumericTable urn_table(const UrnReport& rep);
NumericTable chi_table(const ChiReport& rep);

}  // namespace wfpp
