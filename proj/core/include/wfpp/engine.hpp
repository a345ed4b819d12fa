#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wfpp/lattice.hpp"
#include "wfpp/norms.hpp"
#include "wfpp/profiles.hpp"

namespace wfpp {

/// Halting condition for a growth run.
struct StopRule {
    enum class Kind { edge_count, time, euclid_radius, norm_radius, vertex_hit };

    Kind kind = Kind::edge_count;
    std::uint64_t edge_count = 0;
    double time = 0.0;
    double radius = 0.0;
    Norm norm;      // norm_radius only
    Vertex target;  // vertex_hit only

    static StopRule edges(std::uint64_t n);
    static StopRule at_time(double t);
    /// First time the cluster leaves the closed Euclidean ball of radius r.
    static StopRule euclid_radius(double r);
    /// Same with the ball of the supplied gauge.
    static StopRule norm_radius(double r, Norm nu);
    static StopRule vertex_hit(const Vertex& v);
};

struct SnapshotPlan {
    std::vector<std::uint64_t> at_steps;  // strictly increasing
    std::vector<double> at_times;         // strictly increasing
};

struct RunConfig {
    int dim = 2;
    AlphaWeight weight;
    std::uint64_t seed = 1;
    StopRule stop;
    SnapshotPlan snapshots;
    std::uint64_t vertex_cap = 50'000'000;
    Vertex root{};
};

struct AbsorbedEdge {
    Edge edge;
    double time;
};

///// Growth cluster: absorbed edges in absorption order plus first-passage
/// times of the vertices they touched.  The root is a vertex at time 0 even
/// before any edge is absorbed.
struct ClusterState {
    int dim = 2;
    Vertex root{};
    double clock = 0.0;
    std::vector<AbsorbedEdge> edges;
    std::unordered_map<Vertex, double, VertexHash> vertex_times;

    std::vector<Vertex> vertices() const;
    std::vector<Edge> edge_list() const;
    bool contains_vertex(const Vertex& v) const { return vertex_times.count(v) != 0; }
};

///// Reference to a moment of the run: the cluster then is the prefix
/// edges[0..step) of the final edge list.
struct Snapshot {
    double time;
    std::uint64_t step;
};

struct RunResult {
    ClusterState state;
    double stop_time = 0.0;
    std::optional<Vertex> exit_vertex;  // radius rules: the vertex that left the ball
    std::vector<Snapshot> snapshots;
    std::uint64_t steps = 0;
    std::uint64_t rng_draws = 0;
    bool vertex_cap_hit = false;
};

/// First-passage growth by a Dijkstra sweep with lazily sampled passage
/// times.
///
/// Every lattice edge e owns a single Exp(wt(e)) draw, generated by the
/// counter RNG from (seed, edge key) the moment the edge first becomes a
/// boundary edge.  Its tentative absorption time is the absorption time of
/// that first endpoint plus the draw; a second endpoint absorbed later never
/// improves the tentative time, so each edge is pushed exactly once and the
/// heap minimum is the next edge of the cluster.  This realizes passage
/// times T(eta) = sum of X_e exactly, and makes runs replayable: the draw an
/// edge receives does not depend on the order the frontier was explored.
class FppSimulation {
  public:
    explicit FppSimulation(const RunConfig& cfg);
    /// Restart from a stored cluster.  By the memoryless property the
    /// conditional law of the future given the cluster is a fresh Exp draw
    /// per boundary edge; `resume_epoch` salts those draws so repeated
    /// resumes of the same state stay independent.
    FppSimulation(const RunConfig& cfg, const ClusterState& resume, std::uint64_t resume_epoch = 1);
    ~FppSimulation();
    FppSimulation(FppSimulation&&) noexcept;
    FppSimulation& operator=(FppSimulation&&) noexcept;

    /// Absorbs one edge; false when the frontier is exhausted or the vertex
    /// cap was reached.
    bool step();
    double clock() const;
    std::uint64_t steps_taken() const;
    std::uint64_t rng_draws() const;
    bool vertex_cap_hit() const;
    /// The vertex absorbed by the most recent step, if that step added one.
    const std::optional<Vertex>& last_new_vertex() const;

    /// Boundary edges with their tentative absorption times, sorted by edge.
    std::vector<std::pair<Edge, double>> frontier() const;

    /// Materializes the current cluster (edge prefix plus vertex times).
    ClusterState state() const;

    /// Drives step() until the configured stop rule fires.
    RunResult run();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

RunResult run_fpp(const RunConfig& cfg);

///// The same growth law realized as a discrete chain: at each step a boundary
/// edge is absorbed with probability proportional to its weight.  With
/// `advance_clock` the chain also carries the continuous time, adding an
/// Exp(total boundary weight) holding time per step, which couples it to the
/// first-passage process at jump times.
class EdenChain {
  public:
    EdenChain(int dim, AlphaWeight weight, std::uint64_t seed);
    EdenChain(int dim, AlphaWeight weight, std::uint64_t seed, const ClusterState& resume);
    ~EdenChain();
    EdenChain(EdenChain&&) noexcept;
    EdenChain& operator=(EdenChain&&) noexcept;

    Edge step(bool advance_clock = true);
    /// Draws the next Exp(total boundary weight) holding time without
    /// applying it; pair with advance_clock() to split a step around a
    /// deadline check.
    double draw_holding();
    void advance_clock(double dt);
    double clock() const;
    double total_boundary_weight() const;
    std::vector<std::pair<Edge, double>> boundary() const;  // (edge, weight), sorted
    ClusterState state() const;
    std::uint64_t rng_draws() const;
    const std::optional<Vertex>& last_new_vertex() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

RunResult run_eden_chain(const RunConfig& cfg);

/// First-passage time of v in a finished run, when v was reached.
std::optional<double> passage_time(const ClusterState& state, const Vertex& v);

/// Monte Carlo profile of the explosion time for alpha > 1: mean first exit
/// times from Euclidean balls over a radius schedule, plus the analytic mean
/// bound on the time remaining past the largest radius (sum of minimal
/// radial weights along a coordinate ray).
struct TauInfinityReport {
    std::vector<double> radii;
    std::vector<double> sigma_means;
    std::vector<double> sigma_std_errors;
    double tail_mean_bound;
    int replicates;
};

TauInfinityReport tau_infinity_estimate(const AlphaWeight& f, int dim, std::uint64_t seed,
                                        const std::vector<double>& radii, int replicates);

}  // namespace wfpp
