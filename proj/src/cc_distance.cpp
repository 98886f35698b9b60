#include "heisflow/cc_distance.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

#include "heisflow/group.hpp"

namespace heis {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Unit-length arc of sweep angle k from the identity: chord length, vertical
// gain and Koranyi norm of the endpoint.
double arc_chord(double k) {
    if (std::abs(k) < 1e-6) return 1.0 - k * k / 24.0;
    return 2.0 * std::sin(0.5 * k) / k;
}
double arc_gain(double k) {
    if (std::abs(k) < 1e-4) return k / 12.0;
    return (k - std::sin(k)) / (2.0 * k * k);
}
double arc_ratio(double k) {  // ||endpoint|| for the unit-length arc
    const double rho = arc_chord(k);
    const double zg = arc_gain(k);
    const double r2 = rho * rho;
    return std::pow(r2 * r2 + zg * zg, 0.25);
}

// Shape u = z/||d||^2 vs ratio lambda = ||d||/d_CC along the arc family.
struct RatioTable {
    std::vector<double> u;       // increasing in [0, 1]
    std::vector<double> lambda;  // decreasing
    double min_ratio, max_ratio;
};

RatioTable build_table(int size) {
    RatioTable t;
    t.u.reserve(static_cast<size_t>(size) + 1);
    t.lambda.reserve(static_cast<size_t>(size) + 1);
    for (int i = 0; i <= size; ++i) {
        const double k = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(size);
        const double lam = arc_ratio(k);
        const double shape = arc_gain(k) / (lam * lam);
        t.u.push_back(shape);
        t.lambda.push_back(lam);
    }
    // Monotonicity is a property of the family; enforce it against roundoff so
    // lookups stay conservative.
    for (size_t i = 1; i < t.u.size(); ++i) {
        assert(t.u[i] >= t.u[i - 1] - 1e-12);
        assert(t.lambda[i] <= t.lambda[i - 1] + 1e-12);
        t.u[i] = std::max(t.u[i], t.u[i - 1]);
        t.lambda[i] = std::min(t.lambda[i], t.lambda[i - 1]);
    }
    t.u.front() = 0.0;
    t.u.back() = 1.0;
    t.lambda.front() = 1.0;
    t.lambda.back() = 0.5 / std::sqrt(kPi);
    t.max_ratio = 1.0;
    t.min_ratio = t.lambda.back();
    return t;
}

const RatioTable& ratio_table() {
    static const RatioTable t = build_table(1 << 14);
    return t;
}

// Largest family ratio over the shape bin containing u; a valid upper bound on
// ||d||/d_CC for shape u because lambda is decreasing in u.
double conservative_ratio(double u) {
    const RatioTable& t = ratio_table();
    u = std::clamp(u, 0.0, 1.0);
    const auto it = std::upper_bound(t.u.begin(), t.u.end(), u);
    size_t idx = static_cast<size_t>(it - t.u.begin());
    idx = (idx == 0) ? 0 : idx - 1;
    return t.lambda[idx] * (1.0 + 1e-12);
}

// Sweep-angle -> (length multiplier, vertical gain) for an arc with chord rho.
double chord_multiplier(double alpha) {
    const double a = std::abs(alpha);
    if (a < 1e-6) return 1.0 + alpha * alpha / 24.0;
    return 0.5 * a / std::sin(0.5 * a);
}
double segment_area(double rho, double alpha) {
    if (std::abs(alpha) < 1e-5) return rho * rho * alpha / 12.0;
    const double s = std::sin(0.5 * alpha);
    return rho * rho * (alpha - std::sin(alpha)) / (8.0 * s * s);
}

// Connecting arc + area-closing circle: a genuine horizontal curve from the
// identity to (rho, 0, zeta).
double composite_length(double rho, double zeta, double alpha) {
    const double gap = zeta - segment_area(rho, alpha);
    return rho * chord_multiplier(alpha) + 2.0 * std::sqrt(kPi * std::abs(gap));
}

}  // namespace

const BilipschitzConstants& certified_bilipschitz_constants() {
    static const BilipschitzConstants c{ratio_table().min_ratio, ratio_table().max_ratio};
    return c;
}

double arc_connect_upper(double rho, double zeta) {
    const double target = std::abs(zeta);
    if (rho < 1e-300) return 2.0 * std::sqrt(kPi * target);
    if (target == 0.0) return rho;
    const double amax = 2.0 * kPi - 1e-12;
    if (segment_area(rho, amax) < target) return rho + 2.0 * std::sqrt(kPi * target);
    double lo = 0.0, hi = amax;
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        (segment_area(rho, mid) < target ? lo : hi) = mid;
    }
    return rho * chord_multiplier(0.5 * (lo + hi));
}

CcBracket cc_distance_estimate(const HPoint& p, const HPoint& q, const CcBudget& budget) {
    check_same_n(p.n, q.n, "cc_distance_estimate");
    const HPoint d = group_mul(group_inv(p), q);
    const double norm4 = homogeneous_norm4(d);
    if (norm4 == 0.0) return CcBracket{0.0, 0.0, true};
    const double norm = std::pow(norm4, 0.25);
    const BilipschitzConstants& bc = certified_bilipschitz_constants();

    if (p.n != 1) {
        return CcBracket{norm / bc.max_ratio, norm / bc.min_ratio, true};
    }

    const double rho = std::hypot(d.x(0), d.y(0));
    const double zeta = d.z();
    const double shape = std::abs(zeta) / (norm * norm);
    const double lower = norm / conservative_ratio(shape);

    if (rho < 1e-300) {
        const double v = 2.0 * std::sqrt(kPi * std::abs(zeta));
        return CcBracket{std::min(lower, v), v, true};
    }

    // Root of segment_area(rho, a) = zeta; the area is monotone on (-2pi, 2pi).
    const double target = std::abs(zeta);
    const double amax = 2.0 * kPi - 1e-12;
    double upper;
    bool converged = true;
    if (target == 0.0) {
        upper = rho;
    } else {
        double loa = 0.0, hia = amax;
        if (segment_area(rho, hia) < target) {
            converged = false;  // numerically pinched near the full circle
            upper = rho + 2.0 * std::sqrt(kPi * target);
        } else {
            for (int i = 0; i < budget.bisect_iters; ++i) {
                const double mid = 0.5 * (loa + hia);
                (segment_area(rho, mid) < target ? loa : hia) = mid;
                if (hia - loa < 1e-15) break;
            }
            const double root = 0.5 * (loa + hia);
            upper = rho * chord_multiplier(root);

            // Golden-section polish of the composite family around the root.
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = std::max(0.0, root - 1.0), b = std::min(amax, root + 1.0);
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = composite_length(rho, target, x1);
            double f2 = composite_length(rho, target, x2);
            while (b - a > budget.param_tol) {
                if (f1 < f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = composite_length(rho, target, x1);
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = composite_length(rho, target, x2);
                }
            }
            upper = std::min({upper, f1, f2, rho + 2.0 * std::sqrt(kPi * target)});
        }
    }
    if (!converged) {
        // Wide but valid: norm-based bracket.
        return CcBracket{norm / bc.max_ratio, upper, false};
    }
    return CcBracket{std::min(lower, upper), upper, true};
}

}  // namespace heis
