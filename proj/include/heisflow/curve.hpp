#pragma once

#include <functional>
#include <optional>

#include "heisflow/fields.hpp"
#include "heisflow/types.hpp"

namespace heis {

/// Uniformly sampled horizontal curve on [0, l] with frame velocities at the
/// samples.  Consecutive samples are joined by straight group segments: the
/// group z-component of p_k^{-1} p_{k+1} vanishes (exact discrete
/// horizontality), which is the trapezoidal contact identity.
struct HorizontalCurve {
    int n = 1;
    double l = 0;
    double dt = 0;
    std::vector<HPoint> samples;
    std::vector<HVector> velocities;

    size_t steps() const { return samples.empty() ? 0 : samples.size() - 1; }
    const HPoint& front() const { return samples.front(); }
    const HPoint& back() const { return samples.back(); }
};

struct CurveValidation {
    double max_contact_defect = 0;  // |zeta(p_k^{-1} p_{k+1})|
    double max_speed = 0;
    double max_step_excess = 0;     // certified step-length upper bound minus dt
    bool ok(double contact_tol = 1e-10, double speed_tol = 1e-9, double step_tol = 1e-6) const;
};
CurveValidation validate_curve(const HorizontalCurve& c);

/// L(gamma) = integral of |gamma'| (composite trapezoid).
double length(const HorizontalCurve& c);

/// <[gamma], Phi> = integral of <Phi(gamma), gamma'> (trapezoid).
double act(const HorizontalCurve& c, const HVectorField& field);

/// Riemann sum S_m = sum <Phi(gamma(t_k)), Delta gamma_k> with coordinate
/// increments of the horizontal part; exact subsampling when m divides the
/// grid, linear interpolation otherwise.
double riemann_sum(const HorizontalCurve& c, const HVectorField& field, int m);

/// Time-in-region variation; whole-curve (no region) matches the length
/// quadrature, a region predicate uses the left-endpoint rule.
double variation(const HorizontalCurve& c,
                 const std::function<bool(const HPoint&)>* region = nullptr);

/// -act(gamma, grad_H psi); equals psi(gamma(0)) - psi(gamma(l)) up to O(dt^2).
double boundary_pairing(const HorizontalCurve& c, const ScalarField& psi);

/// d_infty = sup_t ||gamma1(t)^{-1} gamma2(t)|| (homogeneous norm), or the
/// chordal distance of the Cayley images when compactified.
double d_infinity(const HorizontalCurve& a, const HorizontalCurve& b, bool compactified = false);

/// Compactified distance to the constant curve at infinity.
double d_infinity_to_infinity(const HorizontalCurve& a);

}  // namespace heis
