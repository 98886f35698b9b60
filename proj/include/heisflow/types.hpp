#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace heis {

/// Inline-capacity coordinate storage; allocation-free for n <= 3.
using Coords = boost::container::small_vector<double, 8>;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A point of H^n in real coordinates (x_1..x_n, y_1..y_n, z).
struct HPoint {
    int n = 1;
    Coords c;  // size 2n+1

    HPoint() : c(3, 0.0) {}
    explicit HPoint(int n_) : n(n_), c(static_cast<size_t>(2 * n_ + 1), 0.0) {}
    HPoint(int n_, Coords coords) : n(n_), c(std::move(coords)) {
        if (c.size() != static_cast<size_t>(2 * n + 1))
            throw DimensionMismatch("HPoint: coords length must be 2n+1");
    }

    double x(int i) const { return c[static_cast<size_t>(i)]; }
    double y(int i) const { return c[static_cast<size_t>(n + i)]; }
    double z() const { return c[static_cast<size_t>(2 * n)]; }
    double& x(int i) { return c[static_cast<size_t>(i)]; }
    double& y(int i) { return c[static_cast<size_t>(n + i)]; }
    double& z() { return c[static_cast<size_t>(2 * n)]; }

    bool finite() const {
        for (double v : c)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Coefficient vector in R^{2n} w.r.t. the left-invariant frame (X_1..X_n, Y_1..Y_n).
struct HVector {
    int n = 1;
    Coords c;  // size 2n

    HVector() : c(2, 0.0) {}
    explicit HVector(int n_) : n(n_), c(static_cast<size_t>(2 * n_), 0.0) {}
    HVector(int n_, Coords coeffs) : n(n_), c(std::move(coeffs)) {
        if (c.size() != static_cast<size_t>(2 * n))
            throw DimensionMismatch("HVector: coeffs length must be 2n");
    }

    double norm2() const {
        double s = 0;
        for (double v : c) s += v * v;
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    HVector& operator+=(const HVector& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    HVector& operator*=(double s) {
        for (double& v : c) v *= s;
        return *this;
    }
};

inline double dot(const HVector& a, const HVector& b) {
    if (a.n != b.n) throw DimensionMismatch("dot: mixed n");
    double s = 0;
    for (size_t i = 0; i < a.c.size(); ++i) s += a.c[i] * b.c[i];
    return s;
}

inline void check_same_n(int a, int b, const char* what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": mixed group index n");
}

/// Axis-aligned coordinate box, used to place test-field dictionaries.
struct Box {
    Coords lo, hi;

    static Box of_dim(size_t d) {
        Box b;
        b.lo.assign(d, 0.0);
        b.hi.assign(d, 0.0);
        return b;
    }
    size_t dim() const { return lo.size(); }
    void expand(const Coords& p) {
        for (size_t i = 0; i < p.size(); ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    Box padded(double m) const {
        Box b = *this;
        for (size_t i = 0; i < b.lo.size(); ++i) {
            b.lo[i] -= m;
            b.hi[i] += m;
        }
        return b;
    }
};

}  // namespace heis
