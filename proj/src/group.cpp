#include "heisflow/group.hpp"

namespace heis {

HPoint identity(int n) { return HPoint(n); }

HPoint group_mul(const HPoint& p, const HPoint& q) {
    check_same_n(p.n, q.n, "group_mul");
    const int n = p.n;
    HPoint r(n);
    double cross = 0;
    for (int i = 0; i < n; ++i) {
        r.x(i) = p.x(i) + q.x(i);
        r.y(i) = p.y(i) + q.y(i);
        cross += p.x(i) * q.y(i) - p.y(i) * q.x(i);
    }
    r.z() = p.z() + q.z() + 0.5 * cross;
    return r;
}

HPoint group_inv(const HPoint& p) {
    HPoint r(p.n);
    for (size_t i = 0; i < p.c.size(); ++i) r.c[i] = -p.c[i];
    return r;
}

HPoint dilate(double lambda, const HPoint& p) {
    if (!(lambda > 0)) throw std::invalid_argument("dilate: lambda must be positive");
    HPoint r(p.n);
    for (int i = 0; i < 2 * p.n; ++i) r.c[static_cast<size_t>(i)] = lambda * p.c[static_cast<size_t>(i)];
    r.z() = lambda * lambda * p.z();
    return r;
}

double homogeneous_norm4(const HPoint& p) {
    double h2 = 0;
    for (int i = 0; i < 2 * p.n; ++i) {
        const double v = p.c[static_cast<size_t>(i)];
        h2 += v * v;
    }
    const double zz = p.z();
    return h2 * h2 + zz * zz;
}

double homogeneous_norm(const HPoint& p) { return std::pow(homogeneous_norm4(p), 0.25); }

double contact_form(const HPoint& p, const Coords& tangent) {
    if (tangent.size() != p.c.size())
        throw DimensionMismatch("contact_form: tangent length must be 2n+1");
    const int n = p.n;
    double s = tangent[static_cast<size_t>(2 * n)];
    for (int i = 0; i < n; ++i)
        s -= 0.5 * (p.x(i) * tangent[static_cast<size_t>(n + i)] - p.y(i) * tangent[static_cast<size_t>(i)]);
    return s;
}

Coords frame_embed(const HPoint& p, const HVector& v) {
    check_same_n(p.n, v.n, "frame_embed");
    const int n = p.n;
    Coords t(static_cast<size_t>(2 * n + 1), 0.0);
    double zc = 0;
    for (int i = 0; i < n; ++i) {
        t[static_cast<size_t>(i)] = v.c[static_cast<size_t>(i)];
        t[static_cast<size_t>(n + i)] = v.c[static_cast<size_t>(n + i)];
        zc += 0.5 * (p.x(i) * v.c[static_cast<size_t>(n + i)] - p.y(i) * v.c[static_cast<size_t>(i)]);
    }
    t[static_cast<size_t>(2 * n)] = zc;
    return t;
}

HPoint frame_exp_step(const HPoint& p, int direction, double t) {
    const int n = p.n;
    if (direction < 0 || direction >= 2 * n)
        throw std::invalid_argument("frame_exp_step: direction out of range");
    HPoint step(n);
    step.c[static_cast<size_t>(direction)] = t;
    return group_mul(p, step);
}

Coords dleft_translate(const HPoint& p, const Coords& v) {
    if (v.size() != p.c.size()) throw DimensionMismatch("dleft_translate");
    const int n = p.n;
    Coords r = v;
    double zc = v[static_cast<size_t>(2 * n)];
    for (int i = 0; i < n; ++i)
        zc += 0.5 * (p.x(i) * v[static_cast<size_t>(n + i)] - p.y(i) * v[static_cast<size_t>(i)]);
    r[static_cast<size_t>(2 * n)] = zc;
    return r;
}

Coords dleft_inv_at(const HPoint& p, const Coords& v) {
    if (v.size() != p.c.size()) throw DimensionMismatch("dleft_inv_at");
    const int n = p.n;
    Coords r = v;
    double zc = v[static_cast<size_t>(2 * n)];
    for (int i = 0; i < n; ++i)
        zc -= 0.5 * (p.x(i) * v[static_cast<size_t>(n + i)] - p.y(i) * v[static_cast<size_t>(i)]);
    r[static_cast<size_t>(2 * n)] = zc;
    return r;
}

StepIncrement step_increment(const HPoint& p, const HPoint& q) {
    check_same_n(p.n, q.n, "step_increment");
    const int n = p.n;
    StepIncrement s{HVector(n), 0.0};
    double cross = 0;
    for (int i = 0; i < n; ++i) {
        s.h.c[static_cast<size_t>(i)] = q.x(i) - p.x(i);
        s.h.c[static_cast<size_t>(n + i)] = q.y(i) - p.y(i);
        cross += p.x(i) * q.y(i) - p.y(i) * q.x(i);
    }
    s.zeta = q.z() - p.z() - 0.5 * cross;
    return s;
}

double area_rule_increment(const HPoint& a, const HPoint& b) {
    const int n = a.n;
    double s = 0;
    for (int i = 0; i < n; ++i) {
        const double xb = 0.5 * (a.x(i) + b.x(i));
        const double yb = 0.5 * (a.y(i) + b.y(i));
        s += xb * (b.y(i) - a.y(i)) - yb * (b.x(i) - a.x(i));
    }
    return 0.5 * s;
}

}  // namespace heis
