#pragma once

#include "heisflow/types.hpp"

namespace heis {

HPoint identity(int n);

/// Group product p·q; z-component z_p + z_q + (1/2)(<x_p,y_q> - <y_p,x_q>).
HPoint group_mul(const HPoint& p, const HPoint& q);

/// Group inverse (-x, -y, -z).
HPoint group_inv(const HPoint& p);

/// Anisotropic dilation: horizontal coordinates scale by lambda, center by lambda^2.
HPoint dilate(double lambda, const HPoint& p);

/// Koranyi-type homogeneous norm ((|h|^2)^2 + z^2)^{1/4}.
double homogeneous_norm(const HPoint& p);

/// ||p||^4, polynomial in the coordinates (smooth everywhere).
double homogeneous_norm4(const HPoint& p);

/// Contact form theta = dz - (1/2) sum(x_j dy_j - y_j dx_j) paired with a full
/// coordinate tangent vector of length 2n+1.
double contact_form(const HPoint& p, const Coords& tangent);

/// Embed frame coefficients as a coordinate tangent vector at p (kernel of theta).
Coords frame_embed(const HPoint& p, const HVector& v);

/// p · exp(t * frame_i): the straight coordinate flow of X_i (i < n) or Y_{i-n}.
HPoint frame_exp_step(const HPoint& p, int direction, double t);

/// Differential of left translation L_p applied to a coordinate tangent vector at q.
Coords dleft_translate(const HPoint& p, const Coords& v);

/// Differential of left translation by p^{-1} at p itself (pulls tangents at p
/// to the identity); linear, unimodular.
Coords dleft_inv_at(const HPoint& p, const Coords& v);

/// Group increment q relative to p split into the frame displacement (dx, dy)
/// and the group z-component zeta of p^{-1}q.  zeta == 0 iff the straight
/// group segment from p to q is horizontal.
struct StepIncrement {
    HVector h;     // coordinate displacement of the horizontal part
    double zeta;   // z-component of p^{-1}·q
};
StepIncrement step_increment(const HPoint& p, const HPoint& q);

/// Trapezoidal symplectic-area z-increment between consecutive samples:
/// (1/2) sum_j (xbar_j dy_j - ybar_j dx_j).
double area_rule_increment(const HPoint& a, const HPoint& b);

}  // namespace heis
