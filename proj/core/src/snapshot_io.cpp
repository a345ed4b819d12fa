#include "wfpp/snapshot_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wfpp {

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Replays the edge list to recover vertex first-passage times: the root is
/// absorbed at time 0, every other vertex at the time of the first edge that
/// touches it.
void rebuild_vertex_times(ClusterState& st) {
    st.vertex_times.clear();
    st.vertex_times.emplace(st.root, 0.0);
    for (const auto& ae : st.edges) {
        for (const Vertex& v : {ae.edge.a, ae.edge.b()}) {
            if (!st.vertex_times.count(v)) st.vertex_times.emplace(v, ae.time);
        }
    }
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return is;
}

void put_varint(std::ostream& os, std::uint64_t v) {
    while (v >= 0x80) {
        os.put(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    os.put(static_cast<char>(v));
}

std::uint64_t get_varint(std::istream& is) {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
        int c = is.get();
        if (c == EOF) throw std::runtime_error("cluster binary: truncated varint");
        v |= static_cast<std::uint64_t>(c & 0x7f) << shift;
        if (!(c & 0x80)) return v;
        shift += 7;
        if (shift > 63) throw std::runtime_error("cluster binary: varint overflow");
    }
}

std::uint64_t zigzag(std::int64_t x) {
    return (static_cast<std::uint64_t>(x) << 1) ^ static_cast<std::uint64_t>(x >> 63);
}

std::int64_t unzigzag(std::uint64_t v) {
    return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
}

template <typename T>
void put_raw(std::ostream& os, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    os.write(buf, sizeof(T));
}

template <typename T>
T get_raw(std::istream& is) {
    char buf[sizeof(T)];
    is.read(buf, sizeof(T));
    if (is.gcount() != sizeof(T)) throw std::runtime_error("cluster binary: truncated field");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void write_cluster_csv(std::ostream& os, const ClusterState& state) {
    os << "# dim=" << state.dim << " root=";
    for (int i = 0; i < state.dim; ++i) os << (i ? "," : "") << state.root[i];
    os << " clock=" << fmt_double(state.clock) << "\n";
    static const char* cols[] = {"x", "y", "z", "w"};
    os << "step,time";
    for (int i = 0; i < state.dim; ++i) os << ",a" << cols[i];
    for (int i = 0; i < state.dim; ++i) os << ",b" << cols[i];
    os << "\n";
    std::uint64_t step = 0;
    for (const auto& ae : state.edges) {
        os << ++step << "," << fmt_double(ae.time);
        Vertex b = ae.edge.b();
        for (int i = 0; i < state.dim; ++i) os << "," << ae.edge.a[i];
        for (int i = 0; i < state.dim; ++i) os << "," << b[i];
        os << "\n";
    }
}

void write_cluster_csv(const std::string& path, const ClusterState& state) {
    auto os = open_out(path, false);
    write_cluster_csv(os, state);
}

ClusterState read_cluster_csv(std::istream& is) {
    ClusterState st;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# dim=", 0) != 0)
        throw std::runtime_error("cluster csv: missing metadata line");
    {
        int dim = 0;
        char rootbuf[64] = {0};
        double clock = 0.0;
        if (std::sscanf(line.c_str(), "# dim=%d root=%63s clock=%lf", &dim, rootbuf, &clock) != 3)
            throw std::runtime_error("cluster csv: malformed metadata line");
        validate_dimension(dim);
        st.dim = dim;
        st.clock = clock;
        std::stringstream rs(rootbuf);
        for (int i = 0; i < dim; ++i) {
            int c;
            char comma;
            if (!(rs >> c)) throw std::runtime_error("cluster csv: malformed root");
            st.root[i] = c;
            if (i + 1 < dim) rs >> comma;
        }
    }
    if (!std::getline(is, line) || line.rfind("step,time", 0) != 0)
        throw std::runtime_error("cluster csv: missing header line");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(ls, field, ','))
                throw std::runtime_error("cluster csv: short row: " + line);
            return field;
        };
        next();  // step, implied by row order
        double t = std::stod(next());
        Vertex a, b;
        for (int i = 0; i < st.dim; ++i) a[i] = std::stoi(next());
        for (int i = 0; i < st.dim; ++i) b[i] = std::stoi(next());
        st.edges.push_back({Edge::between(a, b), t});
    }
    rebuild_vertex_times(st);
    return st;
}

ClusterState read_cluster_csv(const std::string& path) {
    auto is = open_in(path, false);
    return read_cluster_csv(is);
}

void write_cluster_binary(std::ostream& os, const ClusterState& state) {
    os.write("EDN1", 4);
    put_raw<std::uint8_t>(os, 1);
    put_raw<std::uint8_t>(os, static_cast<std::uint8_t>(state.dim));
    put_raw<std::uint16_t>(os, 0);
    for (int i = 0; i < state.dim; ++i) put_raw<std::int32_t>(os, state.root[i]);
    put_raw<double>(os, state.clock);
    put_raw<std::uint64_t>(os, state.edges.size());
    Vertex prev = state.root;
    for (const auto& ae : state.edges) {
        for (int i = 0; i < state.dim; ++i)
            put_varint(os, zigzag(static_cast<std::int64_t>(ae.edge.a[i]) - prev[i]));
        put_varint(os, static_cast<std::uint64_t>(ae.edge.axis));
        put_raw<double>(os, ae.time);
        prev = ae.edge.a;
    }
}

void write_cluster_binary(const std::string& path, const ClusterState& state) {
    auto os = open_out(path, true);
    write_cluster_binary(os, state);
}

ClusterState read_cluster_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::memcmp(magic, "EDN1", 4) != 0)
        throw std::runtime_error("cluster binary: bad magic");
    if (get_raw<std::uint8_t>(is) != 1) throw std::runtime_error("cluster binary: bad version");
    int dim = get_raw<std::uint8_t>(is);
    validate_dimension(dim);
    if (get_raw<std::uint16_t>(is) != 0)
        throw std::runtime_error("cluster binary: nonzero reserved field");
    ClusterState st;
    st.dim = dim;
    for (int i = 0; i < dim; ++i) st.root[i] = get_raw<std::int32_t>(is);
    st.clock = get_raw<double>(is);
    std::uint64_t count = get_raw<std::uint64_t>(is);
    st.edges.reserve(count);
    Vertex prev = st.root;
    for (std::uint64_t k = 0; k < count; ++k) {
        Vertex a = prev;
        for (int i = 0; i < dim; ++i) {
            std::int64_t c = prev[i] + unzigzag(get_varint(is));
            if (c < INT32_MIN || c > INT32_MAX)
                throw std::runtime_error("cluster binary: coordinate overflow");
            a[i] = static_cast<std::int32_t>(c);
        }
        std::uint64_t axis = get_varint(is);
        if (axis >= static_cast<std::uint64_t>(dim))
            throw std::runtime_error("cluster binary: axis out of range");
        double t = get_raw<double>(is);
        st.edges.push_back({Edge(a, static_cast<int>(axis)), t});
        prev = a;
    }
    rebuild_vertex_times(st);
    return st;
}

ClusterState read_cluster_binary(const std::string& path) {
    auto is = open_in(path, true);
    return read_cluster_binary(is);
}

ClusterState cluster_at_snapshot(const ClusterState& final_state, const Snapshot& snap) {
    if (snap.step > final_state.edges.size())
        throw std::invalid_argument("snapshot step beyond recorded edges");
    ClusterState st;
    st.dim = final_state.dim;
    st.root = final_state.root;
    st.clock = snap.time;
    st.edges.assign(final_state.edges.begin(), final_state.edges.begin() + snap.step);
    rebuild_vertex_times(st);
    return st;
}

}  // namespace wfpp
