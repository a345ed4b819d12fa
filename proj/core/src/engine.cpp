#include "wfpp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "wfpp/rng.hpp"
#include "wfpp/shape_constants.hpp"

namespace wfpp {

StopRule StopRule::edges(std::uint64_t n) {
    StopRule r;
    r.kind = Kind::edge_count;
    r.edge_count = n;
    return r;
}
StopRule StopRule::at_time(double t) {
    StopRule r;
    r.kind = Kind::time;
    r.time = t;
    return r;
}
StopRule StopRule::euclid_radius(double rad) {
    StopRule r;
    r.kind = Kind::euclid_radius;
    r.radius = rad;
    return r;
}
StopRule StopRule::norm_radius(double rad, Norm nu) {
    StopRule r;
    r.kind = Kind::norm_radius;
    r.radius = rad;
    r.norm = std::move(nu);
    return r;
}
StopRule StopRule::vertex_hit(const Vertex& v) {
    StopRule r;
    r.kind = Kind::vertex_hit;
    r.target = v;
    return r;
}

std::vector<Vertex> ClusterState::vertices() const {
    std::vector<Vertex> out;
    out.reserve(vertex_times.size());
    for (const auto& [v, t] : vertex_times) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> ClusterState::edge_list() const {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& ae : edges) out.push_back(ae.edge);
    return out;
}

std::optional<double> passage_time(const ClusterState& state, const Vertex& v) {
    auto it = state.vertex_times.find(v);
    if (it == state.vertex_times.end()) return std::nullopt;
    return it->second;
}

namespace {

constexpr std::size_t kDenseSlotCap = std::size_t(1) << 22;

/// Cube box [-w, w]^d -> linear slot, or -1 outside.
struct DenseBox {
    int dim = 0;
    std::int64_t w = 0;
    std::int64_t side = 0;
    std::size_t slots = 0;

    void init(int d, std::int64_t halfwidth) {
        dim = d;
        w = halfwidth;
        side = 2 * halfwidth + 1;
        slots = 1;
        for (int i = 0; i < d; ++i) slots *= static_cast<std::size_t>(side);
    }
    std::int64_t index(const Vertex& v) const {
        std::int64_t idx = 0;
        for (int i = 0; i < dim; ++i) {
            std::int64_t c = v.c[i];
            if (c < -w || c > w) return -1;
            idx = idx * side + (c + w);
        }
        return idx;
    }
};

/// First-passage times of vertices; dense flat array when the run has a known
/// radius bound, hash map otherwise.
class VertexClock {
  public:
    void init_hash() { dense_ = false; }
    void init_dense(int dim, std::int64_t halfwidth) {
        dense_ = true;
        box_.init(dim, halfwidth);
        times_.assign(box_.slots, std::numeric_limits<double>::quiet_NaN());
    }
    bool contains(const Vertex& v) const {
        if (dense_) {
            std::int64_t i = box_.index(v);
            return i >= 0 && !std::isnan(times_[static_cast<std::size_t>(i)]);
        }
        return map_.count(v) != 0;
    }
    void set(const Vertex& v, double t) {
        if (dense_) {
            std::int64_t i = box_.index(v);
            if (i < 0) throw std::runtime_error("growth left its dense bounding box");
            times_[static_cast<std::size_t>(i)] = t;
            ++count_;
        } else {
            map_.emplace(v, t);
            ++count_;
        }
    }
    double at(const Vertex& v) const {
        if (dense_) return times_[static_cast<std::size_t>(box_.index(v))];
        return map_.at(v);
    }
    std::size_t size() const { return count_; }

  private:
    bool dense_ = false;
    DenseBox box_;
    std::vector<double> times_;
    std::unordered_map<Vertex, double, VertexHash> map_;
    std::size_t count_ = 0;
};

/// Edge membership set with the same dense/hash split; dense slots are
/// (vertex slot, axis) pairs.
class EdgeMembership {
  public:
    void init_hash() { dense_ = false; }
    void init_dense(int dim, std::int64_t halfwidth) {
        dense_ = true;
        dim_ = dim;
        box_.init(dim, halfwidth);
        flags_.assign(box_.slots * dim, 0);
    }
    bool contains(const Edge& e) const {
        if (dense_) {
            std::int64_t i = box_.index(e.a);
            return i >= 0 && flags_[static_cast<std::size_t>(i) * dim_ + e.axis] != 0;
        }
        return set_.count(e) != 0;
    }
    void insert(const Edge& e) {
        if (dense_) {
            std::int64_t i = box_.index(e.a);
            if (i < 0) throw std::runtime_error("growth left its dense bounding box");
            flags_[static_cast<std::size_t>(i) * dim_ + e.axis] = 1;
        } else {
            set_.insert(e);
        }
    }
    void erase(const Edge& e) {
        if (dense_) {
            std::int64_t i = box_.index(e.a);
            if (i >= 0) flags_[static_cast<std::size_t>(i) * dim_ + e.axis] = 0;
        } else {
            set_.erase(e);
        }
    }

  private:
    bool dense_ = false;
    int dim_ = 1;
    DenseBox box_;
    std::vector<std::uint8_t> flags_;
    std::unordered_set<Edge, EdgeHash> set_;
};

/// Radius bound implied by the stop rule, or -1 when growth is unbounded.
/// Dense tables are sized from it when they fit in memory.
std::int64_t dense_halfwidth(const RunConfig& cfg) {
    double r = -1.0;
    if (cfg.stop.kind == StopRule::Kind::euclid_radius) {
        r = cfg.stop.radius;
    } else if (cfg.stop.kind == StopRule::Kind::norm_radius) {
        ShapeConstants sc = compute_shape_constants(cfg.stop.norm, 1024);
        r = cfg.stop.radius * sc.rho_upper;
    }
    if (r < 0.0) return -1;
    double root_offset = cfg.root.euclid_norm();
    std::int64_t w = static_cast<std::int64_t>(std::ceil(r + root_offset)) + 3;
    double slots = std::pow(2.0 * w + 1.0, cfg.dim);
    if (slots > static_cast<double>(kDenseSlotCap)) return -1;
    return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// First-passage simulation

struct FppSimulation::Impl {
    RunConfig cfg;
    std::uint64_t resume_epoch = 0;

    struct HeapItem {
        double t;
        Edge e;
        bool operator>(const HeapItem& o) const {
            if (t != o.t) return t > o.t;
            return o.e < e;  // lexicographic tie-break keeps pops deterministic
        }
    };
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;

    VertexClock vertex_clock;
    EdgeMembership absorbed;
    EdgeMembership frontier;
    std::vector<AbsorbedEdge> edges;  // absorption order
    double clock = 0.0;
    std::uint64_t draws = 0;
    std::optional<Vertex> last_vertex;
    bool cap_hit = false;

    void init_tables() {
        std::int64_t w = dense_halfwidth(cfg);
        if (w >= 0) {
            vertex_clock.init_dense(cfg.dim, w);
            absorbed.init_dense(cfg.dim, w + 1);
            frontier.init_dense(cfg.dim, w + 1);
        } else {
            vertex_clock.init_hash();
            absorbed.init_hash();
            frontier.init_hash();
        }
    }

    void push_boundary(const Edge& e, double t_first) {
        frontier.insert(e);
        double w = edge_weight(cfg.weight, e, cfg.dim);
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::domain_error("edge weight must be positive and finite");
        double x = counter_exponential(cfg.seed, edge_rng_key(e), resume_epoch, w);
        ++draws;
        heap.push({t_first + x, e});
    }

    void absorb_vertex(const Vertex& v, double t) {
        vertex_clock.set(v, t);
        // New boundary edges of v, axis ascending, negative side first.
        for (int ax = 0; ax < cfg.dim; ++ax) {
            Vertex lo = v;
            lo[ax] -= 1;
            Edge down(lo, ax);
            if (!absorbed.contains(down) && !frontier.contains(down)) push_boundary(down, t);
            Edge up(v, ax);
            if (!absorbed.contains(up) && !frontier.contains(up)) push_boundary(up, t);
        }
    }

    bool step() {
        if (heap.empty() || cap_hit) return false;
        if (cfg.vertex_cap > 0 && vertex_clock.size() >= cfg.vertex_cap) {
            cap_hit = true;
            return false;
        }
        HeapItem item = heap.top();
        heap.pop();
        frontier.erase(item.e);
        absorbed.insert(item.e);
        clock = item.t;
        edges.push_back({item.e, item.t});
        last_vertex.reset();
        Vertex a = item.e.a, b = item.e.b();
        if (!vertex_clock.contains(a)) {
            last_vertex = a;
            absorb_vertex(a, item.t);
        }
        if (!vertex_clock.contains(b)) {
            // At most one endpoint can be new: the edge was pushed when the
            // other one was absorbed.
            last_vertex = b;
            absorb_vertex(b, item.t);
        }
        return true;
    }

    double peek_time() const { return heap.empty() ? std::numeric_limits<double>::infinity() : heap.top().t; }
};

FppSimulation::FppSimulation(const RunConfig& cfg) : impl_(new Impl) {
    validate_dimension(cfg.dim);
    if (!cfg.weight.profile().valid()) throw std::invalid_argument("run config: weight required");
    impl_->cfg = cfg;
    impl_->init_tables();
    impl_->vertex_clock.set(cfg.root, 0.0);
    impl_->last_vertex = cfg.root;
    for (int ax = 0; ax < cfg.dim; ++ax) {
        Vertex lo = cfg.root;
        lo[ax] -= 1;
        impl_->push_boundary(Edge(lo, ax), 0.0);
        impl_->push_boundary(Edge(cfg.root, ax), 0.0);
    }
}

FppSimulation::FppSimulation(const RunConfig& cfg, const ClusterState& resume,
                             std::uint64_t resume_epoch)
    : impl_(new Impl) {
    validate_dimension(cfg.dim);
    if (resume.dim != cfg.dim) throw std::invalid_argument("resume: dimension mismatch");
    impl_->cfg = cfg;
    impl_->resume_epoch = resume_epoch;
    impl_->init_tables();
    impl_->clock = resume.clock;
    impl_->edges = resume.edges;
    for (const auto& [v, t] : resume.vertex_times) impl_->vertex_clock.set(v, t);
    if (!impl_->vertex_clock.contains(resume.root))
        throw std::invalid_argument("resume: root missing from vertex set");
    for (const auto& ae : resume.edges) impl_->absorbed.insert(ae.edge);
    // Boundary edges all restart their draws at the resume clock; the
    // conditional law given the cluster is exactly this by lack of memory.
    std::vector<Edge> bd = boundary_edges(resume.edge_list(), resume.vertices(), cfg.dim);
    for (const Edge& e : bd) impl_->push_boundary(e, resume.clock);
}

FppSimulation::~FppSimulation() = default;
FppSimulation::FppSimulation(FppSimulation&&) noexcept = default;
FppSimulation& FppSimulation::operator=(FppSimulation&&) noexcept = default;

bool FppSimulation::step() { return impl_->step(); }
double FppSimulation::clock() const { return impl_->clock; }
std::uint64_t FppSimulation::steps_taken() const { return impl_->edges.size(); }
std::uint64_t FppSimulation::rng_draws() const { return impl_->draws; }
bool FppSimulation::vertex_cap_hit() const { return impl_->cap_hit; }
const std::optional<Vertex>& FppSimulation::last_new_vertex() const { return impl_->last_vertex; }

std::vector<std::pair<Edge, double>> FppSimulation::frontier() const {
    // The heap holds exactly one entry per boundary edge.
    std::vector<std::pair<Edge, double>> out;
    auto copy = impl_->heap;
    while (!copy.empty()) {
        out.emplace_back(copy.top().e, copy.top().t);
        copy.pop();
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

ClusterState FppSimulation::state() const {
    ClusterState st;
    st.dim = impl_->cfg.dim;
    st.root = impl_->cfg.root;
    st.clock = impl_->clock;
    st.edges = impl_->edges;
    st.vertex_times.reserve(impl_->vertex_clock.size());
    st.vertex_times.emplace(st.root, impl_->vertex_clock.at(st.root));
    for (const auto& ae : impl_->edges) {
        for (const Vertex& v : {ae.edge.a, ae.edge.b()}) {
            if (!st.vertex_times.count(v)) st.vertex_times.emplace(v, impl_->vertex_clock.at(v));
        }
    }
    return st;
}

namespace {

/// Applies the non-time stop rules after an absorption.
struct StopTracker {
    const RunConfig& cfg;
    std::optional<Vertex> exit_vertex;

    bool stop_after(std::uint64_t steps, const std::optional<Vertex>& new_vertex) {
        switch (cfg.stop.kind) {
            case StopRule::Kind::edge_count:
                return steps >= cfg.stop.edge_count;
            case StopRule::Kind::euclid_radius:
                if (new_vertex && new_vertex->euclid_norm() > cfg.stop.radius) {
                    exit_vertex = new_vertex;
                    return true;
                }
                return false;
            case StopRule::Kind::norm_radius:
                if (new_vertex &&
                    cfg.stop.norm(new_vertex->to_rvec(cfg.dim)) > cfg.stop.radius) {
                    exit_vertex = new_vertex;
                    return true;
                }
                return false;
            case StopRule::Kind::vertex_hit:
                return new_vertex && *new_vertex == cfg.stop.target;
            case StopRule::Kind::time:
                return false;  // handled before the absorption
        }
        return false;
    }
};

struct SnapshotTracker {
    const SnapshotPlan& plan;
    std::size_t time_idx = 0;
    std::size_t step_idx = 0;
    std::vector<Snapshot> out;

    explicit SnapshotTracker(const SnapshotPlan& p) : plan(p) {}

    /// Emit every scheduled time strictly before the next absorption; the
    /// cluster at those times is the current prefix.
    void flush_times_before(double t_next, std::uint64_t step) {
        while (time_idx < plan.at_times.size() && plan.at_times[time_idx] < t_next) {
            out.push_back({plan.at_times[time_idx], step});
            ++time_idx;
        }
    }
    void flush_steps(std::uint64_t step, double clock) {
        while (step_idx < plan.at_steps.size() && plan.at_steps[step_idx] <= step) {
            if (plan.at_steps[step_idx] == step) out.push_back({clock, step});
            ++step_idx;
        }
    }
    void finish(double stop_time, std::uint64_t step) {
        while (time_idx < plan.at_times.size() && plan.at_times[time_idx] <= stop_time) {
            out.push_back({plan.at_times[time_idx], step});
            ++time_idx;
        }
    }
};

}  // namespace

RunResult FppSimulation::run() {
    const RunConfig& cfg = impl_->cfg;
    StopTracker stop{cfg};
    SnapshotTracker snaps(cfg.snapshots);
    double stop_time = impl_->clock;
    for (;;) {
        double t_next = impl_->peek_time();
        if (cfg.stop.kind == StopRule::Kind::time && t_next > cfg.stop.time) {
            stop_time = cfg.stop.time;
            break;
        }
        if (!std::isfinite(t_next)) {
            stop_time = impl_->clock;
            break;
        }
        snaps.flush_times_before(t_next, impl_->edges.size());
        if (!impl_->step()) {
            stop_time = impl_->clock;
            break;
        }
        snaps.flush_steps(impl_->edges.size(), impl_->clock);
        if (stop.stop_after(impl_->edges.size(), impl_->last_vertex)) {
            stop_time = impl_->clock;
            break;
        }
    }
    snaps.finish(stop_time, impl_->edges.size());

    RunResult res;
    res.state = state();
    res.state.clock = stop_time;  // a time stop freezes the clock at the deadline
    res.stop_time = stop_time;
    res.exit_vertex = stop.exit_vertex;
    res.snapshots = std::move(snaps.out);
    res.steps = impl_->edges.size();
    res.rng_draws = impl_->draws;
    res.vertex_cap_hit = impl_->cap_hit;
    return res;
}

RunResult run_fpp(const RunConfig& cfg) {
    FppSimulation sim(cfg);
    return sim.run();
}

// ---------------------------------------------------------------------------
// Weighted growth chain

namespace {

/// Dynamic weighted sampling over edges: Fenwick tree over reusable slots.
/// Exact prefix sums are rebuilt periodically so removal round-off cannot
/// accumulate over long runs.
class WeightedEdgeSampler {
  public:
    void insert(const Edge& e, double w) {
        std::uint32_t slot;
        if (!free_.empty()) {
            slot = free_.back();
            free_.pop_back();
            slot_edge_[slot] = e;
        } else {
            slot = static_cast<std::uint32_t>(weight_.size());
            // Placeholder zero: grow() rebuilds from weight_, and the new
            // entry must not be counted before the add() below.
            weight_.push_back(0.0);
            slot_edge_.push_back(e);
            if (weight_.size() > capacity_) grow();
        }
        weight_[slot] = w;
        slot_of_.emplace(e, slot);
        add(slot, w);
        total_ += w;
        ++active_;
        maybe_rebuild();
    }

    void remove(const Edge& e) {
        auto it = slot_of_.find(e);
        if (it == slot_of_.end()) return;
        std::uint32_t slot = it->second;
        add(slot, -weight_[slot]);
        total_ -= weight_[slot];
        weight_[slot] = 0.0;
        slot_of_.erase(it);
        free_.push_back(slot);
        --active_;
        maybe_rebuild();
    }

    double weight_of(const Edge& e) const {
        auto it = slot_of_.find(e);
        return it == slot_of_.end() ? 0.0 : weight_[it->second];
    }

    double total() const { return total_; }
    std::size_t active_count() const { return active_; }

    Edge sample(double u) const {
        if (active_ == 0) throw std::runtime_error("sampler: empty boundary");
        double target = u * total_;
        std::size_t pos = 0;
        std::size_t step = msb_;
        while (step > 0) {
            std::size_t next = pos + step;
            if (next <= weight_.size() && tree_[next] < target) {
                pos = next;
                target -= tree_[next];
            }
            step >>= 1;
        }
        // pos is the largest index with prefix < target; slot pos is hit.
        while (pos < weight_.size() && weight_[pos] <= 0.0) ++pos;
        if (pos >= weight_.size()) {
            for (pos = weight_.size(); pos-- > 0;)
                if (weight_[pos] > 0.0) break;
        }
        return slot_edge_[pos];
    }

    std::vector<std::pair<Edge, double>> items() const {
        std::vector<std::pair<Edge, double>> out;
        out.reserve(active_);
        for (const auto& [e, slot] : slot_of_) out.emplace_back(e, weight_[slot]);
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        return out;
    }

  private:
    void grow() {
        while (capacity_ < weight_.size()) capacity_ = capacity_ ? capacity_ * 2 : 64;
        rebuild();
    }
    void rebuild() {
        msb_ = 1;
        while (msb_ * 2 <= capacity_) msb_ *= 2;
        tree_.assign(capacity_ + 1, 0.0);
        total_ = 0.0;
        for (std::size_t i = 0; i < weight_.size(); ++i) {
            if (weight_[i] != 0.0) {
                add(i, weight_[i]);
                total_ += weight_[i];
            }
        }
        ops_since_rebuild_ = 0;
    }
    void maybe_rebuild() {
        if (++ops_since_rebuild_ >= (1u << 18)) rebuild();
    }
    void add(std::size_t slot, double delta) {
        for (std::size_t i = slot + 1; i <= capacity_; i += i & (~i + 1)) tree_[i] += delta;
    }

    std::vector<double> tree_;
    std::vector<double> weight_;
    std::vector<Edge> slot_edge_;
    std::vector<std::uint32_t> free_;
    std::unordered_map<Edge, std::uint32_t, EdgeHash> slot_of_;
    std::size_t capacity_ = 0;
    std::size_t msb_ = 1;
    std::size_t active_ = 0;
    double total_ = 0.0;
    std::uint32_t ops_since_rebuild_ = 0;
};

}  // namespace

struct EdenChain::Impl {
    int dim;
    AlphaWeight weight;
    CounterStream rng;
    WeightedEdgeSampler sampler;
    ClusterState st;
    std::unordered_set<Edge, EdgeHash> absorbed;
    std::optional<Vertex> last_vertex;

    Impl(int d, AlphaWeight w, std::uint64_t seed) : dim(d), weight(std::move(w)), rng(seed, 0x636861696eULL) {}

    void add_boundary_of(const Vertex& v) {
        for (int ax = 0; ax < dim; ++ax) {
            Vertex lo = v;
            lo[ax] -= 1;
            for (Edge e : {Edge(lo, ax), Edge(v, ax)}) {
                if (!absorbed.count(e) && sampler.weight_of(e) == 0.0)
                    sampler.insert(e, edge_weight(weight, e, dim));
            }
        }
    }

    Edge select_and_absorb() {
        Edge e = sampler.sample(rng.uniform());
        sampler.remove(e);
        absorbed.insert(e);
        st.edges.push_back({e, st.clock});
        last_vertex.reset();
        for (const Vertex& v : {e.a, e.b()}) {
            if (!st.vertex_times.count(v)) {
                st.vertex_times.emplace(v, st.clock);
                last_vertex = v;
                add_boundary_of(v);
            }
        }
        return e;
    }
};

EdenChain::EdenChain(int dim, AlphaWeight weight, std::uint64_t seed)
    : impl_(new Impl(dim, std::move(weight), seed)) {
    validate_dimension(dim);
    impl_->st.dim = dim;
    impl_->st.root = Vertex{};
    impl_->st.vertex_times.emplace(impl_->st.root, 0.0);
    impl_->last_vertex = impl_->st.root;
    impl_->add_boundary_of(impl_->st.root);
}

EdenChain::EdenChain(int dim, AlphaWeight weight, std::uint64_t seed, const ClusterState& resume)
    : impl_(new Impl(dim, std::move(weight), seed)) {
    validate_dimension(dim);
    if (resume.dim != dim) throw std::invalid_argument("resume: dimension mismatch");
    impl_->st = resume;
    for (const auto& ae : resume.edges) impl_->absorbed.insert(ae.edge);
    for (const Edge& e : boundary_edges(resume.edge_list(), resume.vertices(), dim))
        impl_->sampler.insert(e, edge_weight(impl_->weight, e, dim));
}

EdenChain::~EdenChain() = default;
EdenChain::EdenChain(EdenChain&&) noexcept = default;
EdenChain& EdenChain::operator=(EdenChain&&) noexcept = default;

Edge EdenChain::step(bool advance_clock) {
    if (advance_clock) this->advance_clock(draw_holding());
    return impl_->select_and_absorb();
}

double EdenChain::draw_holding() { return impl_->rng.exponential(impl_->sampler.total()); }

void EdenChain::advance_clock(double dt) { impl_->st.clock += dt; }

double EdenChain::clock() const { return impl_->st.clock; }
double EdenChain::total_boundary_weight() const { return impl_->sampler.total(); }
std::vector<std::pair<Edge, double>> EdenChain::boundary() const { return impl_->sampler.items(); }
ClusterState EdenChain::state() const { return impl_->st; }
std::uint64_t EdenChain::rng_draws() const { return impl_->rng.draws(); }
const std::optional<Vertex>& EdenChain::last_new_vertex() const { return impl_->last_vertex; }

RunResult run_eden_chain(const RunConfig& cfg) {
    EdenChain chain(cfg.dim, cfg.weight, cfg.seed);
    StopTracker stop{cfg};
    SnapshotTracker snaps(cfg.snapshots);
    double stop_time = 0.0;
    std::uint64_t steps = 0;
    bool cap_hit = false;
    std::size_t vertex_count = 1;
    for (;;) {
        if (cfg.vertex_cap > 0 && vertex_count >= cfg.vertex_cap) {
            cap_hit = true;
            stop_time = chain.clock();
            break;
        }
        double dt = chain.draw_holding();
        double t_next = chain.clock() + dt;
        if (cfg.stop.kind == StopRule::Kind::time && t_next > cfg.stop.time) {
            stop_time = cfg.stop.time;
            break;
        }
        snaps.flush_times_before(t_next, steps);
        chain.advance_clock(dt);
        chain.step(false);
        ++steps;
        if (chain.last_new_vertex()) ++vertex_count;
        snaps.flush_steps(steps, chain.clock());
        stop_time = chain.clock();
        if (stop.stop_after(steps, chain.last_new_vertex())) break;
    }
    snaps.finish(stop_time, steps);
    RunResult res;
    res.state = chain.state();
    res.state.clock = stop_time;
    res.stop_time = stop_time;
    res.exit_vertex = stop.exit_vertex;
    res.snapshots = std::move(snaps.out);
    res.steps = steps;
    res.rng_draws = chain.rng_draws();
    res.vertex_cap_hit = cap_hit;
    return res;
}

TauInfinityReport tau_infinity_estimate(const AlphaWeight& f, int dim, std::uint64_t seed,
                                        const std::vector<double>& radii, int replicates) {
    if (!(f.alpha() > 1.0))
        throw std::invalid_argument("tau_infinity_estimate: requires alpha > 1");
    if (radii.empty() || replicates < 1)
        throw std::invalid_argument("tau_infinity_estimate: need radii and replicates");
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::vector<double>> sigma(sorted.size());
    for (int rep = 0; rep < replicates; ++rep) {
        RunConfig cfg;
        cfg.dim = dim;
        cfg.weight = f;
        cfg.seed = derive_seed(seed, rep);
        cfg.stop = StopRule::euclid_radius(sorted.back());
        FppSimulation sim(cfg);
        std::size_t next = 0;
        while (next < sorted.size()) {
            if (!sim.step()) break;
            const auto& nv = sim.last_new_vertex();
            if (nv) {
                double r = nv->euclid_norm();
                while (next < sorted.size() && r > sorted[next]) {
                    sigma[next].push_back(sim.clock());
                    ++next;
                }
            }
        }
    }

    TauInfinityReport rep;
    rep.radii = sorted;
    rep.replicates = replicates;
    for (auto& xs : sigma) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean = xs.empty() ? std::numeric_limits<double>::quiet_NaN() : mean / xs.size();
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        double se = xs.size() > 1 ? std::sqrt(var / (xs.size() - 1.0) / xs.size()) : 0.0;
        rep.sigma_means.push_back(mean);
        rep.sigma_std_errors.push_back(se);
    }

    // Mean time to keep walking outward along a coordinate ray past the last
    // radius: sum of 1 / (kappa_lower (k+1/2)^alpha), summed explicitly with
    // an integral bound on the remainder.
    double a = f.alpha();
    std::int64_t k0 = static_cast<std::int64_t>(std::floor(sorted.back()));
    double tail = 0.0;
    const std::int64_t terms = 20000;
    for (std::int64_t k = k0; k < k0 + terms; ++k) tail += std::pow(k + 0.5, -a);
    tail += std::pow(static_cast<double>(k0 + terms), 1.0 - a) / (a - 1.0);
    rep.tail_mean_bound = tail / f.kappa_lower();
    return rep;
}

}  // namespace wfpp
