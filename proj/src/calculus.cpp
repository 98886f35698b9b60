#include "heisflow/calculus.hpp"

#include "heisflow/group.hpp"

namespace heis {

double frame_derivative(const ScalarField& f, int direction, const HPoint& p, double h) {
    if (!(h > 0)) throw std::invalid_argument("frame_derivative: step must be positive");
    const double fp = f.eval(frame_exp_step(p, direction, h));
    const double fm = f.eval(frame_exp_step(p, direction, -h));
    return (fp - fm) / (2.0 * h);
}

HVector horizontal_gradient(const ScalarField& f, const HPoint& p, double h) {
    check_same_n(f.n, p.n, "horizontal_gradient");
    const int n = p.n;
    HVector g(n);
    if (f.grad_euclid) {
        const Coords ge = f.grad_euclid(p);
        for (int i = 0; i < n; ++i) {
            g.c[static_cast<size_t>(i)] = ge[static_cast<size_t>(i)] - 0.5 * p.y(i) * ge[static_cast<size_t>(2 * n)];
            g.c[static_cast<size_t>(n + i)] = ge[static_cast<size_t>(n + i)] + 0.5 * p.x(i) * ge[static_cast<size_t>(2 * n)];
        }
        return g;
    }
    for (int i = 0; i < 2 * n; ++i) g.c[static_cast<size_t>(i)] = frame_derivative(f, i, p, h);
    return g;
}

double weak_divergence(const DiscreteCharge& mu, const ScalarField& f) {
    check_same_n(mu.n, f.n, "weak_divergence");
    double s = 0;
    for (const auto& a : mu.atoms) s += dot(horizontal_gradient(f, a.p), a.v);
    return -s;
}

double smooth_divergence(const HVectorField& V, const HPoint& p, double h) {
    check_same_n(V.n, p.n, "smooth_divergence");
    const int n = p.n;
    double s = 0;
    for (int i = 0; i < 2 * n; ++i) {
        const HVector vp = V.eval(frame_exp_step(p, i, h));
        const HVector vm = V.eval(frame_exp_step(p, i, -h));
        s += (vp.c[static_cast<size_t>(i)] - vm.c[static_cast<size_t>(i)]) / (2.0 * h);
    }
    return s;
}

}  // namespace heis
