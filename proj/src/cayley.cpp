#include "heisflow/cayley.hpp"

#include <cassert>

#include "heisflow/group.hpp"

namespace heis {

using cd = std::complex<double>;

double SpherePoint::sphere_defect() const {
    double s = std::norm(w0);
    for (const auto& wi : w) s += std::norm(wi);
    return std::abs(s - 1.0);
}

namespace {

ComplexPoint raw_to_complex(const HPoint& p, double scale) {
    ComplexPoint c;
    c.n = p.n;
    c.zc.resize(static_cast<size_t>(p.n));
    for (int i = 0; i < p.n; ++i) c.zc[static_cast<size_t>(i)] = cd(p.x(i), p.y(i));
    c.t = scale * p.z();
    return c;
}

double derive_scale() {
    // Probe pair: z-component of (1,0,0)·(0,1,0) is 1/2 in the half-convention,
    // while the complex-model t-component is 2 Im(1·conj(i)) = -2.
    HPoint a(1), b(1);
    a.x(0) = 1.0;
    b.y(0) = 1.0;
    const HPoint ab = group_mul(a, b);
    const cd za(1.0, 0.0), zb(0.0, 1.0);
    const double t_ab = 2.0 * std::imag(za * std::conj(zb));
    const double c = t_ab / ab.z();

    // Homomorphism check on a fixed grid of pairs before accepting the scale.
    const double probes[4][3] = {{0.3, -1.2, 0.7}, {1.5, 0.25, -0.6}, {-0.8, 0.9, 2.0}, {0.0, 2.0, -1.3}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            HPoint p(1), q(1);
            p.x(0) = probes[i][0];
            p.y(0) = probes[i][1];
            p.z() = probes[i][2];
            q.x(0) = probes[j][0] + 0.11;
            q.y(0) = probes[j][2];
            q.z() = probes[j][1];
            const ComplexPoint cp = raw_to_complex(p, c);
            const ComplexPoint cq = raw_to_complex(q, c);
            const ComplexPoint prod = complex_mul(cp, cq);
            const ComplexPoint expect = raw_to_complex(group_mul(p, q), c);
            double err = std::abs(prod.t - expect.t);
            for (int k = 0; k < 1; ++k) err += std::abs(prod.zc[0] - expect.zc[0]);
            assert(err < 1e-9 && "convention isomorphism probe failed");
            (void)err;
        }
    }
    return c;
}

}  // namespace

double complex_model_scale() {
    static const double c = derive_scale();
    return c;
}

ComplexPoint to_complex_model(const HPoint& p) { return raw_to_complex(p, complex_model_scale()); }

HPoint from_complex_model(const ComplexPoint& p) {
    HPoint r(p.n);
    for (int i = 0; i < p.n; ++i) {
        r.x(i) = p.zc[static_cast<size_t>(i)].real();
        r.y(i) = p.zc[static_cast<size_t>(i)].imag();
    }
    r.z() = p.t / complex_model_scale();
    return r;
}

ComplexPoint complex_mul(const ComplexPoint& a, const ComplexPoint& b) {
    check_same_n(a.n, b.n, "complex_mul");
    ComplexPoint r;
    r.n = a.n;
    r.zc.resize(a.zc.size());
    cd twist(0, 0);
    for (size_t i = 0; i < a.zc.size(); ++i) {
        r.zc[i] = a.zc[i] + b.zc[i];
        twist += a.zc[i] * std::conj(b.zc[i]);
    }
    r.t = a.t + b.t + 2.0 * std::imag(twist);
    return r;
}

SpherePoint cayley_forward(const ComplexPoint& p) {
    double z2 = 0;
    for (const auto& zi : p.zc) z2 += std::norm(zi);
    const cd denom(p.t, 1.0 + z2);
    SpherePoint s;
    s.n = p.n;
    s.w.resize(p.zc.size());
    for (size_t i = 0; i < p.zc.size(); ++i) s.w[i] = 2.0 * p.zc[i] / denom;
    s.w0 = cd(-p.t, 1.0 - z2) / denom;
    return s;
}

SpherePoint cayley_forward_infinity(int n) {
    SpherePoint s;
    s.n = n;
    s.w.assign(static_cast<size_t>(n), cd(0, 0));
    s.w0 = cd(-1.0, 0.0);
    return s;
}

std::optional<ComplexPoint> cayley_inverse(const SpherePoint& s) {
    const cd one_plus = 1.0 + s.w0;
    if (std::abs(one_plus) < 1e-15) return std::nullopt;
    // C(w, w0) = (i w / (1+w0), i (1-w0)/(1+w0)) lands on the Siegel boundary;
    // the boundary identification iota(z,t) = (z, t + i|z|^2) inverts by Re.
    ComplexPoint p;
    p.n = s.n;
    p.zc.resize(s.w.size());
    const cd I(0, 1);
    for (size_t i = 0; i < s.w.size(); ++i) p.zc[i] = I * s.w[i] / one_plus;
    const cd zeta0 = I * (1.0 - s.w0) / one_plus;
    p.t = zeta0.real();
    return p;
}

SpherePoint cayley_of_point(const HPoint& p) { return cayley_forward(to_complex_model(p)); }

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
    check_same_n(a.n, b.n, "chordal_distance");
    double s = std::norm(a.w0 - b.w0);
    for (size_t i = 0; i < a.w.size(); ++i) s += std::norm(a.w[i] - b.w[i]);
    return std::sqrt(s);
}

}  // namespace heis
