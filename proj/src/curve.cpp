#include "heisflow/curve.hpp"

#include <cmath>

#include "heisflow/calculus.hpp"
#include "heisflow/cayley.hpp"
#include "heisflow/cc_distance.hpp"
#include "heisflow/group.hpp"

namespace heis {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
}  // namespace

bool CurveValidation::ok(double contact_tol, double speed_tol, double step_tol) const {
    return max_contact_defect <= contact_tol && max_speed <= 1.0 + speed_tol &&
           max_step_excess <= step_tol;
}

CurveValidation validate_curve(const HorizontalCurve& c) {
    CurveValidation v;
    for (const auto& vel : c.velocities) v.max_speed = std::max(v.max_speed, vel.norm());
    for (size_t k = 0; k + 1 < c.samples.size(); ++k) {
        const StepIncrement s = step_increment(c.samples[k], c.samples[k + 1]);
        v.max_contact_defect = std::max(v.max_contact_defect, std::abs(s.zeta));
        // Certified upper bound for the step d_CC via the connecting arc lift.
        const double ub = arc_connect_upper(s.h.norm(), s.zeta);
        v.max_step_excess = std::max(v.max_step_excess, (ub - c.dt) / std::max(c.dt, 1e-300));
    }
    return v;
}

double length(const HorizontalCurve& c) {
    if (c.samples.size() < 2) return 0.0;
    double s = 0.5 * (c.velocities.front().norm() + c.velocities.back().norm());
    for (size_t k = 1; k + 1 < c.velocities.size(); ++k) s += c.velocities[k].norm();
    return s * c.dt;
}

double act(const HorizontalCurve& c, const HVectorField& field) {
    check_same_n(c.n, field.n, "act");
    if (c.samples.size() < 2) return 0.0;
    double s = 0;
    for (size_t k = 0; k < c.samples.size(); ++k) {
        const double term = dot(field.eval(c.samples[k]), c.velocities[k]);
        s += (k == 0 || k + 1 == c.samples.size()) ? 0.5 * term : term;
    }
    return s * c.dt;
}

double riemann_sum(const HorizontalCurve& c, const HVectorField& field, int m) {
    check_same_n(c.n, field.n, "riemann_sum");
    if (m < 1) throw std::invalid_argument("riemann_sum: m >= 1 required");
    if (c.samples.size() < 2) return 0.0;
    const size_t M = c.steps();
    const int n = c.n;
    double s = 0;
    HPoint prev = c.samples.front();
    for (int k = 1; k <= m; ++k) {
        const double pos = static_cast<double>(k) * static_cast<double>(M) / m;
        const size_t lo = std::min(static_cast<size_t>(pos), M);
        const double frac = pos - static_cast<double>(lo);
        HPoint cur = c.samples[lo];
        if (frac > 1e-12 && lo + 1 <= M) {
            for (size_t i = 0; i < cur.c.size(); ++i)
                cur.c[i] += frac * (c.samples[lo + 1].c[i] - c.samples[lo].c[i]);
        }
        const HVector phi = field.eval(cur);
        double term = 0;
        for (int i = 0; i < 2 * n; ++i)
            term += phi.c[static_cast<size_t>(i)] * (cur.c[static_cast<size_t>(i)] - prev.c[static_cast<size_t>(i)]);
        s += term;
        prev = cur;
    }
    return s;
}

double variation(const HorizontalCurve& c, const std::function<bool(const HPoint&)>* region) {
    if (c.samples.size() < 2) return 0.0;
    if (!region) return length(c);
    double s = 0;
    for (size_t k = 0; k + 1 < c.samples.size(); ++k)
        if ((*region)(c.samples[k])) s += c.velocities[k].norm();
    return s * c.dt;
}

double boundary_pairing(const HorizontalCurve& c, const ScalarField& psi) {
    check_same_n(c.n, psi.n, "boundary_pairing");
    if (c.samples.size() < 2) return 0.0;
    double s = 0;
    for (size_t k = 0; k < c.samples.size(); ++k) {
        const double term = dot(horizontal_gradient(psi, c.samples[k]), c.velocities[k]);
        s += (k == 0 || k + 1 == c.samples.size()) ? 0.5 * term : term;
    }
    return -s * c.dt;
}

double d_infinity(const HorizontalCurve& a, const HorizontalCurve& b, bool compactified) {
    check_same_n(a.n, b.n, "d_infinity");
    if (a.samples.size() != b.samples.size() || std::abs(a.l - b.l) > 1e-12)
        throw std::invalid_argument("d_infinity: sample grids must match");
    double worst = 0;
    for (size_t k = 0; k < a.samples.size(); ++k) {
        double d;
        if (compactified) {
            d = chordal_distance(cayley_of_point(a.samples[k]), cayley_of_point(b.samples[k]));
        } else {
            d = homogeneous_norm(group_mul(group_inv(a.samples[k]), b.samples[k]));
        }
        worst = std::max(worst, d);
    }
    return worst;
}

double d_infinity_to_infinity(const HorizontalCurve& a) {
    const SpherePoint pole = cayley_forward_infinity(a.n);
    double worst = 0;
    for (const auto& p : a.samples)
        worst = std::max(worst, chordal_distance(cayley_of_point(p), pole));
    return worst;
}

}  // namespace heis
