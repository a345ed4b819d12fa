#include "wfpp/profiles.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wfpp/shape_constants.hpp"
#include "wfpp/sphere_grid.hpp"

namespace wfpp {

namespace {

class ConstantProfile final : public SphereProfile::Impl {
  public:
    ConstantProfile(int d, double v) : d_(d), v_(v) {}
    double eval(const RVec&) const override { return v_; }
    int dim() const override { return d_; }
    std::string describe() const override {
        char buf[48];
        std::snprintf(buf, sizeof buf, "const:%.17g", v_);
        return buf;
    }

  private:
    int d_;
    double v_;
};

class NormPowerProfile final : public SphereProfile::Impl {
  public:
    NormPowerProfile(Norm nu, double power, double scale)
        : nu_(std::move(nu)), power_(power), scale_(scale) {}
    double eval(const RVec& u) const override { return scale_ * std::pow(nu_(u), power_); }
    int dim() const override { return nu_.dim(); }
    std::string describe() const override {
        char buf[64];
        std::snprintf(buf, sizeof buf, "normpow:%g:", power_);
        return std::string(buf) + nu_.describe();
    }

  private:
    Norm nu_;
    double power_;
    double scale_;
};

class Tabulated2DProfile final : public SphereProfile::Impl {
  public:
    Tabulated2DProfile(const std::vector<double>& angles, const std::vector<double>& values)
        : table_(angles, values) {
        for (double v : table_.values())
            if (!(v > 0.0)) throw std::invalid_argument("tabulated profile: values must be positive");
    }
    double eval(const RVec& u) const override { return table_.at(std::atan2(u[1], u[0])); }
    int dim() const override { return 2; }
    std::string describe() const override { return "tabulated2d-profile"; }
    const AngularTable& table() const { return table_; }

  private:
    AngularTable table_;
};

class Tabulated3DProfile final : public SphereProfile::Impl {
  public:
    Tabulated3DProfile(const std::vector<RVec>& dirs, std::vector<double> values)
        : sphere_(icosphere_for_nodes(dirs.size())), values_(std::move(values)) {
        for (double v : values_)
            if (!(v > 0.0)) throw std::invalid_argument("tabulated profile: values must be positive");
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            if (norm2(normalized(dirs[i]) - sphere_.vertices[i]) > 1e-9)
                throw std::invalid_argument(
                    "tabulated3d profile: directions must be icosphere nodes in order");
        }
    }
    double eval(const RVec& u) const override {
        auto [face, bary] = sphere_.locate(u);
        return bary[0] * values_[sphere_.faces[face][0]] + bary[1] * values_[sphere_.faces[face][1]] +
               bary[2] * values_[sphere_.faces[face][2]];
    }
    int dim() const override { return 3; }
    std::string describe() const override { return "tabulated3d-profile"; }

  private:
    Icosphere sphere_;
    std::vector<double> values_;
};

class CustomProfile final : public SphereProfile::Impl {
  public:
    CustomProfile(int d, std::string desc, std::function<double(const RVec&)> fn)
        : d_(d), desc_(std::move(desc)), fn_(std::move(fn)) {}
    double eval(const RVec& u) const override { return fn_(u); }
    int dim() const override { return d_; }
    std::string describe() const override { return desc_; }

  private:
    int d_;
    std::string desc_;
    std::function<double(const RVec&)> fn_;
};

}  // namespace

SphereProfile SphereProfile::constant(int dim, double value) {
    if (!(value > 0.0)) throw std::invalid_argument("constant profile: value must be positive");
    return SphereProfile(std::make_shared<ConstantProfile>(dim, value));
}

SphereProfile SphereProfile::norm_power(const Norm& nu, double power, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("norm_power profile: scale must be positive");
    return SphereProfile(std::make_shared<NormPowerProfile>(nu, power, scale));
}

SphereProfile SphereProfile::tabulated2d(const std::vector<double>& angles,
                                         const std::vector<double>& values) {
    return SphereProfile(std::make_shared<Tabulated2DProfile>(angles, values));
}

SphereProfile SphereProfile::tabulated3d(const std::vector<RVec>& directions,
                                         const std::vector<double>& values) {
    return SphereProfile(std::make_shared<Tabulated3DProfile>(directions, values));
}

SphereProfile SphereProfile::custom(int dim, std::string description,
                                    std::function<double(const RVec&)> fn) {
    return SphereProfile(std::make_shared<CustomProfile>(dim, std::move(description), std::move(fn)));
}

SphereProfile load_profile_csv_2d(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("profile csv: cannot open " + path);
    std::vector<double> angles, values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("angle") != std::string::npos) continue;
        }
        std::istringstream row(line);
        double a, v;
        char comma;
        if (!(row >> a >> comma >> v) || comma != ',')
            throw std::runtime_error("profile csv: bad row '" + line + "' in " + path);
        angles.push_back(a);
        values.push_back(v);
    }
    return SphereProfile::tabulated2d(angles, values);
}

void save_profile_csv_2d(const std::string& path, const std::vector<double>& angles,
                         const std::vector<double>& values) {
    if (angles.size() != values.size())
        throw std::invalid_argument("profile csv: angle/value count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("profile csv: cannot write " + path);
    out << "angle,value\n";
    char buf[96];
    for (std::size_t i = 0; i < angles.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", angles[i], values[i]);
        out << buf;
    }
}

AlphaWeight::AlphaWeight(double alpha, SphereProfile profile)
    : alpha_(alpha), profile_(std::move(profile)) {
    if (!profile_.valid()) throw std::invalid_argument("AlphaWeight: profile required");
    SphereExtrema ex = extremize_on_sphere(
        profile_.dim(), [this](const RVec& u) { return profile_(u); }, 4096);
    kappa_upper_ = ex.max_value;
    kappa_lower_ = ex.min_value;
    if (!(kappa_lower_ > 0.0))
        throw std::invalid_argument("AlphaWeight: profile must be positive on the sphere");
}

AlphaWeight::AlphaWeight(double alpha, SphereProfile profile, double kappa_lower,
                         double kappa_upper, double lipschitz_bound)
    : alpha_(alpha),
      profile_(std::move(profile)),
      kappa_upper_(kappa_upper),
      kappa_lower_(kappa_lower),
      lipschitz_bound_(lipschitz_bound) {
    if (!profile_.valid()) throw std::invalid_argument("AlphaWeight: profile required");
    if (!(kappa_lower > 0.0) || kappa_upper < kappa_lower)
        throw std::invalid_argument("AlphaWeight: need 0 < kappa_lower <= kappa_upper");
}

double AlphaWeight::evaluate(const RVec& z) const {
    double r = norm2(z);
    if (r == 0.0) throw std::domain_error("evaluate_f: f has no direction at 0");
    RVec u = z;
    u *= 1.0 / r;
    return std::pow(r, alpha_) * profile_(u);
}

double AlphaWeight::inverse(const RVec& z) const {
    double r = norm2(z);
    if (r == 0.0) {
        if (alpha_ < 0.0) return 0.0;  // f blows up at 0, its reciprocal vanishes
        throw std::domain_error("f.inverse: singular at 0 for alpha >= 0");
    }
    RVec u = z;
    u *= 1.0 / r;
    return std::pow(r, -alpha_) / profile_(u);
}

double evaluate_f(const AlphaWeight& f, const RVec& z) { return f.evaluate(z); }

double edge_weight(const AlphaWeight& f, const Edge& e, int dim) {
    return f.evaluate(edge_midpoint(e, dim));
}

}  // namespace wfpp
