#pragma once

#include <functional>
#include <optional>

#include "heisflow/types.hpp"

namespace heis {

/// Scalar test function; analytic euclidean gradient optional (frame
/// derivatives are assembled from it when present, finite-differenced else).
struct ScalarField {
    int n = 1;
    std::function<double(const HPoint&)> eval;
    std::function<Coords(const HPoint&)> grad_euclid;  // optional, length 2n+1
    double sup = 0;  // sup |f| when known, else 0
    std::string name;
};

/// Horizontal vector field by frame coefficients.
struct HVectorField {
    int n = 1;
    std::function<HVector(const HPoint&)> eval;
    std::optional<double> growth_bound;  // |field(x)| <= c (1 + ||x||)
    double sup = 0;
    std::string name;
};

/// exp(-1/(1-s)) bump on s = sum ((p_i-c_i)/r_i)^2 < 1, with analytic gradient.
struct EuclideanBump {
    Coords center;
    Coords radius;

    double value(const Coords& p) const;
    /// d(bump)/dp_i into out (same length as center); returns value.
    double value_grad(const Coords& p, Coords& out) const;
};

/// C-infinity plateau: 1 on |t|<=inner, 0 on |t|>=outer.
double plateau1d(double t, double inner, double outer);
double plateau1d_deriv(double t, double inner, double outer);

/// Product plateau over a coordinate box; identically 1 on the box, supported
/// on the box padded by `margin`.
ScalarField plateau_field(int n, const Box& box, double margin);

/// Checks a declared growth bound |field| <= c(1+||x||) on a deterministic
/// norm-ball sample; returns the worst ratio |field|/(c(1+||x||)).
double growth_bound_check(const HVectorField& field, double ball_radius, int samples_per_dim);

}  // namespace heis
