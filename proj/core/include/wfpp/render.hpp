#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfpp/engine.hpp"

namespace wfpp {

struct RenderOptions {
    std::string colormap = "viridis";  // viridis | grayscale | heat
    int scale = 1;                     // square pixels per lattice site
};

struct Pixmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

/// Rasterizes a d=2 cluster: one cell per lattice site of the bounding box,
/// absorbed sites colored by absorption-order quantile, the rest white.
Pixmap render_cluster(const ClusterState& state, const RenderOptions& options = {});

/// Binary P6 with max value 255.
void write_pixmap(const std::string& path, const Pixmap& image);

}  // namespace wfpp
