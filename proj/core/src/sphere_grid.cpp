#include "wfpp/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace wfpp {

std::vector<RVec> circle_directions(int n) {
    if (n < 3) throw std::invalid_argument("circle_directions: need n >= 3");
    std::vector<RVec> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * std::numbers::pi * k / n;
        out.push_back(RVec{std::cos(t), std::sin(t)});
    }
    return out;
}

AngularTable::AngularTable(const std::vector<double>& angles, const std::vector<double>& values) {
    if (angles.size() != values.size() || angles.size() < 3)
        throw std::invalid_argument("AngularTable: need >= 3 matching angle/value pairs");
    std::map<double, double> by_angle;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double a = std::fmod(angles[i], two_pi);
        if (a < 0) a += two_pi;
        by_angle[a] = values[i];
    }
    for (auto& [a, v] : by_angle) {
        angles_.push_back(a);
        values_.push_back(v);
    }
}

double AngularTable::at(double theta) const {
    const double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0) theta += two_pi;
    auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
    std::size_t hi = it - angles_.begin();
    std::size_t lo;
    double a_lo, a_hi;
    if (hi == 0 || hi == angles_.size()) {
        // Wrap segment between the last and first sample.
        lo = angles_.size() - 1;
        hi = 0;
        a_lo = angles_[lo];
        a_hi = angles_[0] + two_pi;
        if (theta < angles_[0]) theta += two_pi;
    } else {
        lo = hi - 1;
        a_lo = angles_[lo];
        a_hi = angles_[hi];
    }
    double span = a_hi - a_lo;
    double t = span > 0 ? (theta - a_lo) / span : 0.0;
    return values_[lo] + t * (values_[hi] - values_[lo]);
}

namespace {

RVec unit3(double x, double y, double z) {
    RVec v{x, y, z};
    return normalized(v);
}

}  // namespace

Icosphere make_icosphere(int level) {
    if (level < 0 || level > 6) throw std::invalid_argument("make_icosphere: level must be in 0..6");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    Icosphere s;
    s.vertices = {unit3(-1, phi, 0), unit3(1, phi, 0),   unit3(-1, -phi, 0), unit3(1, -phi, 0),
                  unit3(0, -1, phi), unit3(0, 1, phi),   unit3(0, -1, -phi), unit3(0, 1, -phi),
                  unit3(phi, 0, -1), unit3(phi, 0, 1),   unit3(-phi, 0, -1), unit3(-phi, 0, 1)};
    s.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
               {3, 8, 9},   {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int lv = 0; lv < level; ++lv) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::minmax(i, j);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            RVec m = normalized(s.vertices[i] + s.vertices[j]);
            int idx = static_cast<int>(s.vertices.size());
            s.vertices.push_back(m);
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(s.faces.size() * 4);
        for (auto [a, b, c] : s.faces) {
            int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        s.faces = std::move(next);
    }

    s.adjacency.assign(s.vertices.size(), {});
    for (auto [a, b, c] : s.faces) {
        s.adjacency[a].push_back(b);
        s.adjacency[a].push_back(c);
        s.adjacency[b].push_back(a);
        s.adjacency[b].push_back(c);
        s.adjacency[c].push_back(a);
        s.adjacency[c].push_back(b);
    }
    for (auto& nb : s.adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return s;
}

std::pair<int, std::array<double, 3>> Icosphere::locate(const RVec& u) const {
    // Gnomonic barycentric weights: solve u = b0 v0 + b1 v1 + b2 v2 and keep
    // the face where the smallest weight is largest.
    int best_face = -1;
    std::array<double, 3> best{-1e300, 0, 0};
    double best_min = -1e300;
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const RVec& v0 = vertices[faces[fi][0]];
        const RVec& v1 = vertices[faces[fi][1]];
        const RVec& v2 = vertices[faces[fi][2]];
        double m[3][3] = {{v0[0], v1[0], v2[0]}, {v0[1], v1[1], v2[1]}, {v0[2], v1[2], v2[2]}};
        double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (std::abs(det) < 1e-14) continue;
        auto solve = [&](int col) {
            double a[3][3];
            for (int r = 0; r < 3; ++r)
                for (int c2 = 0; c2 < 3; ++c2) a[r][c2] = m[r][c2];
            for (int r = 0; r < 3; ++r) a[r][col] = u[r];
            return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                    a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                    a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])) /
                   det;
        };
        double b0 = solve(0), b1 = solve(1), b2 = solve(2);
        double sum = b0 + b1 + b2;
        if (sum <= 0) continue;
        b0 /= sum;
        b1 /= sum;
        b2 /= sum;
        double mn = std::min({b0, b1, b2});
        if (mn > best_min) {
            best_min = mn;
            best_face = static_cast<int>(fi);
            best = {b0, b1, b2};
        }
    }
    if (best_face < 0) throw std::runtime_error("Icosphere::locate: no containing face");
    for (double& b : best) b = std::max(b, 0.0);
    double sum = best[0] + best[1] + best[2];
    for (double& b : best) b /= sum;
    return {best_face, best};
}

Icosphere icosphere_for_nodes(std::size_t n) {
    for (int lv = 0; lv <= 6; ++lv) {
        std::size_t count = 10 * (std::size_t(1) << (2 * lv)) + 2;
        if (count == n) return make_icosphere(lv);
        if (count > n) break;
    }
    throw std::invalid_argument("icosphere_for_nodes: count matches no subdivision level");
}

Icosphere icosphere_at_least(std::size_t n) {
    for (int lv = 0; lv <= 6; ++lv) {
        std::size_t count = 10 * (std::size_t(1) << (2 * lv)) + 2;
        if (count >= n) return make_icosphere(lv);
    }
    return make_icosphere(6);
}

}  // namespace wfpp
