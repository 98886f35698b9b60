#include "heisflow/fields.hpp"

#include "heisflow/group.hpp"

namespace heis {

double EuclideanBump::value(const Coords& p) const {
    double s = 0;
    for (size_t i = 0; i < center.size(); ++i) {
        const double u = (p[i] - center[i]) / radius[i];
        s += u * u;
    }
    if (s >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s));
}

double EuclideanBump::value_grad(const Coords& p, Coords& out) const {
    out.assign(center.size(), 0.0);
    double s = 0;
    for (size_t i = 0; i < center.size(); ++i) {
        const double u = (p[i] - center[i]) / radius[i];
        s += u * u;
    }
    if (s >= 1.0) return 0.0;
    const double om = 1.0 - s;
    const double v = std::exp(-1.0 / om);
    const double dv_ds = -v / (om * om);
    for (size_t i = 0; i < center.size(); ++i)
        out[i] = dv_ds * 2.0 * (p[i] - center[i]) / (radius[i] * radius[i]);
    return v;
}

namespace {
double bexp(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }
double bexp_deriv(double x) { return x > 0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }
}  // namespace

double plateau1d(double t, double inner, double outer) {
    const double u = (outer - std::abs(t)) / (outer - inner);
    if (u >= 1.0) return 1.0;
    if (u <= 0.0) return 0.0;
    const double a = bexp(u), b = bexp(1.0 - u);
    return a / (a + b);
}

double plateau1d_deriv(double t, double inner, double outer) {
    const double w = outer - inner;
    const double u = (outer - std::abs(t)) / w;
    if (u >= 1.0 || u <= 0.0) return 0.0;
    const double a = bexp(u), b = bexp(1.0 - u);
    const double da = bexp_deriv(u), db = bexp_deriv(1.0 - u);
    const double step_d = (da * b + a * db) / ((a + b) * (a + b));
    const double sign = (t >= 0) ? 1.0 : -1.0;
    return step_d * (-sign / w);
}

ScalarField plateau_field(int n, const Box& box, double margin) {
    const size_t d = box.dim();
    Coords mid(d, 0.0), half(d, 0.0);
    for (size_t i = 0; i < d; ++i) {
        mid[i] = 0.5 * (box.lo[i] + box.hi[i]);
        half[i] = 0.5 * (box.hi[i] - box.lo[i]);
    }
    ScalarField f;
    f.n = n;
    f.sup = 1.0;
    f.name = "plateau";
    f.eval = [mid, half, margin](const HPoint& p) {
        double v = 1.0;
        for (size_t i = 0; i < mid.size(); ++i)
            v *= plateau1d(p.c[i] - mid[i], half[i], half[i] + margin);
        return v;
    };
    f.grad_euclid = [mid, half, margin](const HPoint& p) {
        const size_t d2 = mid.size();
        Coords vals(d2, 0.0), ders(d2, 0.0), g(d2, 0.0);
        for (size_t i = 0; i < d2; ++i) {
            vals[i] = plateau1d(p.c[i] - mid[i], half[i], half[i] + margin);
            ders[i] = plateau1d_deriv(p.c[i] - mid[i], half[i], half[i] + margin);
        }
        for (size_t i = 0; i < d2; ++i) {
            double prod = ders[i];
            for (size_t j = 0; j < d2; ++j)
                if (j != i) prod *= vals[j];
            g[i] = prod;
        }
        return g;
    };
    return f;
}

double growth_bound_check(const HVectorField& field, double ball_radius, int samples_per_dim) {
    if (!field.growth_bound) return 0.0;
    const double c = *field.growth_bound;
    const int n = field.n;
    const int d = 2 * n + 1;
    double worst = 0.0;
    // Deterministic lattice over the coordinate box of the ball.
    std::vector<int> idx(static_cast<size_t>(d), 0);
    const int m = samples_per_dim;
    const long total = static_cast<long>(std::pow(m, d));
    for (long t = 0; t < total; ++t) {
        long rem = t;
        HPoint p(n);
        for (int i = 0; i < d; ++i) {
            const int k = static_cast<int>(rem % m);
            rem /= m;
            const double lim = (i == 2 * n) ? ball_radius * ball_radius : ball_radius;
            p.c[static_cast<size_t>(i)] = -lim + (2.0 * lim) * (k + 0.5) / m;
        }
        if (homogeneous_norm(p) > ball_radius) continue;
        const double ratio = field.eval(p).norm() / (c * (1.0 + homogeneous_norm(p)));
        worst = std::max(worst, ratio);
    }
    return worst;
}

}  // namespace heis
