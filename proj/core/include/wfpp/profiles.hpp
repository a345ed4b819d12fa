#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wfpp/lattice.hpp"
#include "wfpp/norms.hpp"

namespace wfpp {

/// Positive Lipschitz function f0 on the Euclidean unit sphere.  Immutable
/// value type, same sharing scheme as Norm.
class SphereProfile {
  public:
    class Impl {
      public:
        virtual ~Impl() = default;
        /// u must be a Euclidean unit vector.
        virtual double eval(const RVec& u) const = 0;
        virtual int dim() const = 0;
        virtual std::string describe() const = 0;
    };

    SphereProfile() = default;
    explicit SphereProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    bool valid() const { return impl_ != nullptr; }
    int dim() const { return impl_->dim(); }
    std::string describe() const { return impl_->describe(); }
    double operator()(const RVec& u) const { return impl_->eval(u); }

    static SphereProfile constant(int dim, double value);
    /// f0(u) = scale * nu(u)^power for a gauge nu.  With power = alpha this
    /// makes the full weight an alpha-th power of the gauge.
    static SphereProfile norm_power(const Norm& nu, double power, double scale = 1.0);
    /// d=2: piecewise linear in angle (radians).
    static SphereProfile tabulated2d(const std::vector<double>& angles,
                                     const std::vector<double>& values);
    /// d=3: barycentric on the icosphere triangulation the directions came from.
    static SphereProfile tabulated3d(const std::vector<RVec>& directions,
                                     const std::vector<double>& values);
    /// Escape hatch for profiles defined elsewhere (cylinder-adapted weights).
    static SphereProfile custom(int dim, std::string description,
                                std::function<double(const RVec&)> fn);

  private:
    std::shared_ptr<const Impl> impl_;
};

/// CSV rows "angle,value" (d=2, radians) with one header line; same framing
/// as the tabulated norm files.
SphereProfile load_profile_csv_2d(const std::string& path);
void save_profile_csv_2d(const std::string& path, const std::vector<double>& angles,
                         const std::vector<double>& values);

/// Weight function f(z) = |z|^alpha * f0(z/|z|).  kappa_upper / kappa_lower
/// are sup and inf of f0 over the sphere, found numerically at construction
/// unless declared.
class AlphaWeight {
  public:
    AlphaWeight() = default;
    AlphaWeight(double alpha, SphereProfile profile);
    /// Trusts the caller's bounds instead of extremizing numerically.
    AlphaWeight(double alpha, SphereProfile profile, double kappa_lower, double kappa_upper,
                double lipschitz_bound);

    double alpha() const { return alpha_; }
    const SphereProfile& profile() const { return profile_; }
    int dim() const { return profile_.dim(); }
    double kappa_upper() const { return kappa_upper_; }
    double kappa_lower() const { return kappa_lower_; }
    double lipschitz_bound() const { return lipschitz_bound_; }

    /// f(z); domain error at z = 0 (no direction there).
    double evaluate(const RVec& z) const;
    /// 1/f(z), with the removable cases at 0 folded in: 0 for alpha < 0, and a
    /// domain error for alpha >= 0.
    double inverse(const RVec& z) const;

  private:
    double alpha_ = 0.0;
    SphereProfile profile_;
    double kappa_upper_ = 1.0;
    double kappa_lower_ = 1.0;
    double lipschitz_bound_ = 0.0;
};

double evaluate_f(const AlphaWeight& f, const RVec& z);

/// Weight of a lattice edge: f at the edge midpoint.
double edge_weight(const AlphaWeight& f, const Edge& e, int dim);

}  // namespace wfpp
