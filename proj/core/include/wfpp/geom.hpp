#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wfpp {

inline constexpr int kMaxDim = 4;

/// Small real vector with runtime dimension 1..4.  Unused slots stay zero so
/// equality and hashing can ignore the dimension.
struct RVec {
    std::array<double, kMaxDim> c{0.0, 0.0, 0.0, 0.0};
    int dim = 0;

    RVec() = default;
    explicit RVec(int d) : dim(d) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("RVec: dimension must be in 1..4");
    }
    RVec(std::initializer_list<double> xs) {
        if (xs.size() < 1 || xs.size() > kMaxDim)
            throw std::invalid_argument("RVec: dimension must be in 1..4");
        dim = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) c[i++] = x;
    }

    double operator[](int i) const { return c[i]; }
    double& operator[](int i) { return c[i]; }

    RVec& operator+=(const RVec& o) {
        for (int i = 0; i < dim; ++i) c[i] += o.c[i];
        return *this;
    }
    RVec& operator-=(const RVec& o) {
        for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
        return *this;
    }
    RVec& operator*=(double s) {
        for (int i = 0; i < dim; ++i) c[i] *= s;
        return *this;
    }

    friend RVec operator+(RVec a, const RVec& b) { return a += b; }
    friend RVec operator-(RVec a, const RVec& b) { return a -= b; }
    friend RVec operator*(RVec a, double s) { return a *= s; }
    friend RVec operator*(double s, RVec a) { return a *= s; }
    friend bool operator==(const RVec& a, const RVec& b) { return a.dim == b.dim && a.c == b.c; }
};

inline double dot(const RVec& a, const RVec& b) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double norm2(const RVec& a) { return std::sqrt(dot(a, a)); }

/// Euclidean unit vector in the direction of a.  Undefined at 0.
inline RVec normalized(const RVec& a) {
    double n = norm2(a);
    if (n == 0.0) throw std::domain_error("normalized: zero vector has no direction");
    RVec r = a;
    r *= 1.0 / n;
    return r;
}

inline RVec lerp(const RVec& a, const RVec& b, double t) {
    RVec r(a.dim);
    for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] + t * (b.c[i] - a.c[i]);
    return r;
}

/// Distance from the origin to the closed segment [a, b].
inline double segment_distance_to_origin(const RVec& a, const RVec& b) {
    RVec d = b - a;
    double dd = dot(d, d);
    if (dd == 0.0) return norm2(a);
    double t = -dot(a, d) / dd;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return norm2(lerp(a, b, t));
}

}  // namespace wfpp
