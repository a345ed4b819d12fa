#include "wfpp/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wfpp {

namespace {

struct Rgb {
    double r, g, b;
};

// Anchor colors sampled evenly along each map; linear interpolation between.
constexpr Rgb kViridis[] = {{68, 1, 84},    {72, 40, 120},  {62, 74, 137},
                            {49, 104, 142}, {38, 130, 142}, {31, 158, 137},
                            {53, 183, 121}, {109, 205, 89}, {180, 222, 44},
                            {253, 231, 37}};
constexpr Rgb kHeat[] = {{0, 0, 0},     {128, 0, 0},   {255, 64, 0},
                         {255, 160, 0}, {255, 224, 96}, {255, 255, 224}};
constexpr Rgb kGray[] = {{16, 16, 16}, {224, 224, 224}};

template <std::size_t N>
Rgb sample_map(const Rgb (&anchors)[N], double q) {
    q = std::clamp(q, 0.0, 1.0);
    double pos = q * double(N - 1);
    std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(pos), N - 2);
    double frac = pos - double(lo);
    const Rgb& a = anchors[lo];
    const Rgb& b = anchors[lo + 1];
    return {a.r + frac * (b.r - a.r), a.g + frac * (b.g - a.g), a.b + frac * (b.b - a.b)};
}

Rgb colormap_sample(const std::string& name, double q) {
    if (name == "viridis") return sample_map(kViridis, q);
    if (name == "heat") return sample_map(kHeat, q);
    if (name == "grayscale") return sample_map(kGray, q);
    throw std::invalid_argument("render: unknown colormap '" + name + "'");
}

}  // namespace

Pixmap render_cluster(const ClusterState& state, const RenderOptions& options) {
    if (state.dim != 2) throw std::invalid_argument("render: needs a dimension-2 cluster");
    if (options.scale < 1) throw std::invalid_argument("render: scale must be >= 1");
    if (state.vertex_times.empty()) throw std::invalid_argument("render: empty cluster");
    colormap_sample(options.colormap, 0.0);  // validate the name up front

    std::vector<std::pair<Vertex, double>> order(state.vertex_times.begin(),
                                                 state.vertex_times.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });

    int xmin = order[0].first[0], xmax = xmin, ymin = order[0].first[1], ymax = ymin;
    for (const auto& [v, t] : order) {
        (void)t;
        xmin = std::min(xmin, int(v[0]));
        xmax = std::max(xmax, int(v[0]));
        ymin = std::min(ymin, int(v[1]));
        ymax = std::max(ymax, int(v[1]));
    }

    int cols = xmax - xmin + 1;
    int rows = ymax - ymin + 1;
    if (double(cols) * double(rows) * options.scale * options.scale > 4e9)
        throw std::invalid_argument("render: image would exceed 4e9 pixels");

    Pixmap img;
    img.width = cols * options.scale;
    img.height = rows * options.scale;
    img.rgb.assign(std::size_t(img.width) * img.height * 3, 255);

    double denom = order.size() > 1 ? double(order.size() - 1) : 1.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Rgb c = colormap_sample(options.colormap, double(i) / denom);
        auto cr = std::uint8_t(std::lround(c.r));
        auto cg = std::uint8_t(std::lround(c.g));
        auto cb = std::uint8_t(std::lround(c.b));
        int col = (int(order[i].first[0]) - xmin) * options.scale;
        // Image rows run top to bottom; lattice y runs upward.
        int row = (ymax - int(order[i].first[1])) * options.scale;
        for (int dy = 0; dy < options.scale; ++dy) {
            std::size_t base = (std::size_t(row + dy) * img.width + col) * 3;
            for (int dx = 0; dx < options.scale; ++dx) {
                img.rgb[base + 3 * dx] = cr;
                img.rgb[base + 3 * dx + 1] = cg;
                img.rgb[base + 3 * dx + 2] = cb;
            }
        }
    }
    return img;
}

void write_pixmap(const std::string& path, const Pixmap& image) {
    if (image.width < 1 || image.height < 1 ||
        image.rgb.size() != std::size_t(image.width) * image.height * 3)
        throw std::invalid_argument("pixmap: inconsistent dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pixmap: cannot open '" + path + "' for writing");
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              std::streamsize(image.rgb.size()));
    if (!out) throw std::runtime_error("pixmap: write failed for '" + path + "'");
}

}  // namespace wfpp
