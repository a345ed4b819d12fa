#include "wfpp/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace wfpp {

void validate_dimension(int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension must be in 1..4");
}

Edge Edge::between(const Vertex& u, const Vertex& v) {
    int axis = -1;
    int delta = 0;
    for (int i = 0; i < kMaxDim; ++i) {
        std::int64_t d = std::int64_t(v.c[i]) - std::int64_t(u.c[i]);
        if (d != 0) {
            if (axis >= 0 || (d != 1 && d != -1))
                throw std::invalid_argument("Edge::between: endpoints are not lattice neighbors");
            axis = i;
            delta = static_cast<int>(d);
        }
    }
    if (axis < 0) throw std::invalid_argument("Edge::between: endpoints coincide");
    return delta > 0 ? Edge(u, axis) : Edge(v, axis);
}

Vertex Edge::other(const Vertex& v) const {
    if (v == a) return b();
    if (v == b()) return a;
    throw std::invalid_argument("Edge::other: vertex is not an endpoint");
}

RVec edge_midpoint(const Edge& e, int dim) {
    validate_dimension(dim);
    if (e.axis < 0 || e.axis >= dim) throw std::invalid_argument("edge_midpoint: axis outside dimension");
    RVec m(dim);
    for (int i = 0; i < dim; ++i) m[i] = e.a.c[i];
    m[e.axis] += 0.5;
    return m;
}

std::vector<Edge> incident_edges(const Vertex& v, int dim) {
    validate_dimension(dim);
    std::vector<Edge> out;
    out.reserve(2 * dim);
    for (int ax = 0; ax < dim; ++ax) {
        Vertex lo = v;
        lo[ax] -= 1;
        out.emplace_back(lo, ax);  // negative direction: v is the upper endpoint
        out.emplace_back(v, ax);
    }
    return out;
}

std::vector<Edge> boundary_edges(const std::vector<Edge>& cluster_edges,
                                 const std::vector<Vertex>& vertices, int dim) {
    validate_dimension(dim);
    std::unordered_set<Edge, EdgeHash> in_cluster(cluster_edges.begin(), cluster_edges.end());
    std::unordered_set<Vertex, VertexHash> vset(vertices.begin(), vertices.end());
    for (const Edge& e : cluster_edges) {
        if (!vset.count(e.a) || !vset.count(e.b()))
            throw std::invalid_argument("boundary_edges: cluster edge endpoint missing from vertex set");
    }
    std::vector<Edge> out;
    for (const Vertex& v : vertices) {
        for (const Edge& e : incident_edges(v, dim)) {
            if (!in_cluster.count(e)) out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace wfpp
