#include "wfpp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "wfpp/rng.hpp"
#include "wfpp/sphere_grid.hpp"

namespace wfpp {

namespace {

class EuclideanNorm final : public Norm::Impl {
  public:
    explicit EuclideanNorm(int d) : d_(d) {}
    double eval(const RVec& z) const override { return norm2(z); }
    int dim() const override { return d_; }
    std::string describe() const override { return "euclidean"; }

  private:
    int d_;
};

class L1Norm final : public Norm::Impl {
  public:
    explicit L1Norm(int d) : d_(d) {}
    double eval(const RVec& z) const override {
        double s = 0;
        for (int i = 0; i < z.dim; ++i) s += std::abs(z[i]);
        return s;
    }
    int dim() const override { return d_; }
    std::string describe() const override { return "l1"; }

  private:
    int d_;
};

class LinfNorm final : public Norm::Impl {
  public:
    explicit LinfNorm(int d) : d_(d) {}
    double eval(const RVec& z) const override {
        double s = 0;
        for (int i = 0; i < z.dim; ++i) s = std::max(s, std::abs(z[i]));
        return s;
    }
    int dim() const override { return d_; }
    std::string describe() const override { return "linf"; }

  private:
    int d_;
};

class ScaledNorm final : public Norm::Impl {
  public:
    ScaledNorm(Norm base, double factor) : base_(std::move(base)), factor_(factor) {}
    double eval(const RVec& z) const override { return factor_ * base_(z); }
    int dim() const override { return base_.dim(); }
    std::string describe() const override {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g*", factor_);
        return std::string(buf) + base_.describe();
    }

  private:
    Norm base_;
    double factor_;
};

// Boundary radius piecewise linear in angle; gauge nu(z) = |z| / r(theta(z)).
class Tabulated2DNorm final : public Norm::Impl {
  public:
    Tabulated2DNorm(const std::vector<double>& angles, const std::vector<double>& radii)
        : table_(angles, radii) {}

    double eval(const RVec& z) const override {
        double n = std::hypot(z[0], z[1]);
        if (n == 0.0) return 0.0;
        return n / table_.at(std::atan2(z[1], z[0]));
    }
    int dim() const override { return 2; }
    std::string describe() const override { return "tabulated2d"; }

  private:
    AngularTable table_;
};

class Tabulated3DNorm final : public Norm::Impl {
  public:
    Tabulated3DNorm(std::vector<RVec> dirs, std::vector<double> radii)
        : sphere_(icosphere_for_nodes(dirs.size())), radii_(std::move(radii)) {
        if (sphere_.vertices.size() != dirs.size())
            throw std::invalid_argument("tabulated3d: direction count must match an icosphere level");
        // Verify the supplied directions are the canonical icosphere nodes.
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            RVec d = normalized(dirs[i]);
            if (norm2(d - sphere_.vertices[i]) > 1e-9)
                throw std::invalid_argument("tabulated3d: directions must be icosphere nodes in order");
        }
    }

    double eval(const RVec& z) const override {
        double n = norm2(z);
        if (n == 0.0) return 0.0;
        RVec u = z;
        u *= 1.0 / n;
        auto [face, bary] = sphere_.locate(u);
        double r = bary[0] * radii_[sphere_.faces[face][0]] + bary[1] * radii_[sphere_.faces[face][1]] +
                   bary[2] * radii_[sphere_.faces[face][2]];
        return n / r;
    }
    int dim() const override { return 3; }
    std::string describe() const override { return "tabulated3d"; }

  private:
    Icosphere sphere_;
    std::vector<double> radii_;
};

}  // namespace

Norm Norm::euclidean(int dim) { return Norm(std::make_shared<EuclideanNorm>(dim)); }
Norm Norm::l1(int dim) { return Norm(std::make_shared<L1Norm>(dim)); }
Norm Norm::linf(int dim) { return Norm(std::make_shared<LinfNorm>(dim)); }

Norm Norm::scaled(const Norm& base, double factor) {
    if (factor <= 0.0) throw std::invalid_argument("Norm::scaled: factor must be positive");
    return Norm(std::make_shared<ScaledNorm>(base, factor));
}

Norm Norm::tabulated2d(const std::vector<double>& angles, const std::vector<double>& radii) {
    if (angles.size() != radii.size() || angles.size() < 3)
        throw std::invalid_argument("tabulated2d: need >= 3 matching angle/radius rows");
    for (double r : radii)
        if (!(r > 0.0)) throw std::invalid_argument("tabulated2d: radii must be positive");
    return Norm(std::make_shared<Tabulated2DNorm>(angles, radii));
}

Norm Norm::tabulated3d(const std::vector<RVec>& directions, const std::vector<double>& radii) {
    if (directions.size() != radii.size())
        throw std::invalid_argument("tabulated3d: direction/radius count mismatch");
    for (double r : radii)
        if (!(r > 0.0)) throw std::invalid_argument("tabulated3d: radii must be positive");
    return Norm(std::make_shared<Tabulated3DNorm>(directions, radii));
}

double check_triangle_inequality(const Norm& nu, int n_samples, std::uint64_t seed) {
    CounterStream rng(seed, /*stream=*/0x72616e74ULL);
    int d = nu.dim();
    double worst = -1e300;
    for (int i = 0; i < n_samples; ++i) {
        RVec x(d), y(d);
        for (int k = 0; k < d; ++k) {
            x[k] = 2.0 * rng.uniform() - 1.0;
            y[k] = 2.0 * rng.uniform() - 1.0;
        }
        worst = std::max(worst, nu(x + y) - nu(x) - nu(y));
    }
    return worst;
}

TabulatedShape2D load_shape_csv_2d(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("shape csv: cannot open " + path);
    TabulatedShape2D shape;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("angle") != std::string::npos) continue;  // header
        }
        std::istringstream row(line);
        double a, r;
        char comma;
        if (!(row >> a >> comma >> r) || comma != ',')
            throw std::runtime_error("shape csv: bad row '" + line + "' in " + path);
        shape.angles.push_back(a);
        shape.radii.push_back(r);
    }
    if (shape.angles.size() < 3) throw std::runtime_error("shape csv: fewer than 3 rows in " + path);
    return shape;
}

void save_shape_csv_2d(const std::string& path, const TabulatedShape2D& shape) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("shape csv: cannot write " + path);
    out << "angle,radius\n";
    char buf[96];
    for (std::size_t i = 0; i < shape.angles.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", shape.angles[i], shape.radii[i]);
        out << buf;
    }
}

Norm norm_from_shape(const TabulatedShape2D& shape) { return Norm::tabulated2d(shape.angles, shape.radii); }

}  // namespace wfpp
