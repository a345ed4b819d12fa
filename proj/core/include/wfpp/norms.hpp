#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wfpp/geom.hpp"

namespace wfpp {

/// A positively homogeneous gauge on R^d, symmetric under z -> -z for the
/// built-in kinds.  Immutable and cheaply copyable; implementations share
/// state behind a const pointer.
class Norm {
  public:
    class Impl {
      public:
        virtual ~Impl() = default;
        virtual double eval(const RVec& z) const = 0;
        virtual int dim() const = 0;
        virtual std::string describe() const = 0;
    };

    Norm() = default;
    explicit Norm(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    bool valid() const { return impl_ != nullptr; }
    int dim() const { return impl_->dim(); }
    std::string describe() const { return impl_->describe(); }

    double operator()(const RVec& z) const { return impl_->eval(z); }

    /// Radius of the unit ball along Euclidean unit direction u, i.e. the r
    /// with nu(r u) = 1.
    double unit_ball_radius(const RVec& u) const {
        double v = impl_->eval(u);
        if (v <= 0.0) throw std::domain_error("unit_ball_radius: gauge not positive on direction");
        return 1.0 / v;
    }

    static Norm euclidean(int dim);
    static Norm l1(int dim);
    static Norm linf(int dim);
    /// factor * base(z); factor > 0.
    static Norm scaled(const Norm& base, double factor);
    /// d=2 shape from boundary radii at angles (radians); piecewise linear in
    /// angle.  Angles need not be sorted; duplicates collapse.
    static Norm tabulated2d(const std::vector<double>& angles, const std::vector<double>& radii);
    /// d=3 shape from boundary radii at unit directions; values interpolate
    /// barycentrically on the geodesic (icosphere) triangulation the
    /// directions came from.
    static Norm tabulated3d(const std::vector<RVec>& directions, const std::vector<double>& radii);

  private:
    std::shared_ptr<const Impl> impl_;
};

/// Monte Carlo spot-check of subadditivity: max over sampled pairs of
/// nu(x+y) - nu(x) - nu(y).  Nonpositive (up to rounding) for true norms.
double check_triangle_inequality(const Norm& nu, int n_samples, std::uint64_t seed);

struct TabulatedShape2D {
    std::vector<double> angles;  // sorted, in [0, 2*pi)
    std::vector<double> radii;
};

/// CSV schema shared by tabulated norms and empirical shape estimates:
/// one documented header line, then rows "angle,radius" (d=2, radians) or
/// "ux,uy,uz,radius" (d=3).
TabulatedShape2D load_shape_csv_2d(const std::string& path);
void save_shape_csv_2d(const std::string& path, const TabulatedShape2D& shape);
Norm norm_from_shape(const TabulatedShape2D& shape);

}  // namespace wfpp
