#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "wfpp/geom.hpp"

namespace wfpp {

/// Lattice site of Z^d, d <= 4.  Unused coordinates are zero, so comparison
/// and hashing never need the dimension.
struct Vertex {
    std::array<std::int32_t, kMaxDim> c{0, 0, 0, 0};

    Vertex() = default;
    Vertex(std::initializer_list<std::int32_t> xs) {
        int i = 0;
        for (std::int32_t x : xs) c[i++] = x;
    }

    std::int32_t operator[](int i) const { return c[i]; }
    std::int32_t& operator[](int i) { return c[i]; }

    friend bool operator==(const Vertex& a, const Vertex& b) { return a.c == b.c; }
    friend bool operator!=(const Vertex& a, const Vertex& b) { return a.c != b.c; }
    /// Lexicographic order; used for canonical edge orientation and tie-breaks.
    friend bool operator<(const Vertex& a, const Vertex& b) { return a.c < b.c; }

    RVec to_rvec(int dim) const {
        RVec r(dim);
        for (int i = 0; i < dim; ++i) r[i] = c[i];
        return r;
    }
    double euclid_norm() const {
        double s = 0;
        for (int i = 0; i < kMaxDim; ++i) s += double(c[i]) * double(c[i]);
        return std::sqrt(s);
    }
};

inline Vertex origin_vertex() { return Vertex{}; }

/// splitmix64 finalizer; the standard 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Vertex hash: fold each coordinate through mix64 so nearby sites scatter.
inline std::uint64_t vertex_hash(const Vertex& v) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
    for (int i = 0; i < kMaxDim; ++i) h = mix64(h ^ static_cast<std::uint32_t>(v.c[i]));
    return h;
}

struct VertexHash {
    std::size_t operator()(const Vertex& v) const { return static_cast<std::size_t>(vertex_hash(v)); }
};

/// Nearest-neighbor edge stored in canonical orientation: the lexicographically
/// smaller endpoint plus the axis along which the other endpoint is +1.
struct Edge {
    Vertex a;
    std::int8_t axis = 0;

    Edge() = default;
    Edge(const Vertex& lo, int ax) : a(lo), axis(static_cast<std::int8_t>(ax)) {}

    /// Builds the canonical edge between two sites; throws if they are not
    /// lattice neighbors.
    static Edge between(const Vertex& u, const Vertex& v);

    Vertex b() const {
        Vertex v = a;
        v[axis] += 1;
        return v;
    }
    bool has_endpoint(const Vertex& v) const { return v == a || v == b(); }
    Vertex other(const Vertex& v) const;

    friend bool operator==(const Edge& x, const Edge& y) { return x.axis == y.axis && x.a == y.a; }
    friend bool operator!=(const Edge& x, const Edge& y) { return !(x == y); }
    friend bool operator<(const Edge& x, const Edge& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.axis < y.axis;
    }
};

inline std::uint64_t edge_hash(const Edge& e) {
    return mix64(vertex_hash(e.a) ^ (0x61c8864680b583ebULL * (std::uint64_t(e.axis) + 1)));
}

struct EdgeHash {
    std::size_t operator()(const Edge& e) const { return static_cast<std::size_t>(edge_hash(e)); }
};

/// Edge midpoint; exactly one coordinate is a half-integer.
RVec edge_midpoint(const Edge& e, int dim);

/// The 2d edges incident to v, ordered by axis ascending, negative direction
/// first within an axis.  The order is part of the contract.
std::vector<Edge> incident_edges(const Vertex& v, int dim);

/// Edges not in `cluster_edges` with at least one endpoint in `vertices`,
/// sorted and deduplicated.  This is the attachment set of the growth chain.
std::vector<Edge> boundary_edges(const std::vector<Edge>& cluster_edges,
                                 const std::vector<Vertex>& vertices, int dim);

void validate_dimension(int dim);

}  // namespace wfpp
