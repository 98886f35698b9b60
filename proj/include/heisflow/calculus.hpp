#pragma once

#include "heisflow/charge.hpp"
#include "heisflow/fields.hpp"

namespace heis {

/// Central difference of f along t -> p·exp(t·frame_i); O(h^2) for smooth f.
double frame_derivative(const ScalarField& f, int direction, const HPoint& p, double h = 1e-5);

/// (X_1 f, ..., Y_n f); analytic euclidean gradient used when present.
HVector horizontal_gradient(const ScalarField& f, const HPoint& p, double h = 1e-5);

/// <div_H mu, f> = - sum_i <grad_H f(x_i), v_i>.
double weak_divergence(const DiscreteCharge& mu, const ScalarField& f);

/// Pointwise div_H V = sum_i X_i V_i + Y_i V_{n+i} by frame differences
/// of the coefficient functions (test oracle against weak_divergence).
double smooth_divergence(const HVectorField& V, const HPoint& p, double h = 1e-5);

}  // namespace heis
