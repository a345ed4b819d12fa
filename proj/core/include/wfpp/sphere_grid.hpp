#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "wfpp/geom.hpp"

namespace wfpp {

/// n evenly spaced unit directions on the circle, angle 2*pi*k/n.
std::vector<RVec> circle_directions(int n);

/// Piecewise linear interpolation of samples on the circle, periodic in the
/// angle.  Input angles are reduced mod 2*pi and sorted; duplicates collapse.
class AngularTable {
  public:
    AngularTable(const std::vector<double>& angles, const std::vector<double>& values);
    double at(double theta) const;
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> angles_;
    std::vector<double> values_;
};

/// Geodesic triangulation of S^2 by repeated 4-way subdivision of the
/// icosahedron.  Vertex order is a pure function of the level, so tabulated
/// data keyed to the vertices round-trips through files.
struct Icosphere {
    std::vector<RVec> vertices;               // unit directions
    std::vector<std::array<int, 3>> faces;    // CCW seen from outside
    std::vector<std::vector<int>> adjacency;  // vertex -> neighbor vertices, sorted

    /// Face containing direction u plus normalized barycentric weights.
    std::pair<int, std::array<double, 3>> locate(const RVec& u) const;
};

Icosphere make_icosphere(int level);

/// Icosphere whose vertex count is exactly n; throws if n matches no level.
Icosphere icosphere_for_nodes(std::size_t n);

/// Smallest icosphere with at least n vertices (capped at level 6).
Icosphere icosphere_at_least(std::size_t n);

}  // namespace wfpp
