#include "heisflow/presets.hpp"

#include <cmath>

namespace heis {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

// Default polar grid 2 x 200: angular spacing 0.04-0.055 keeps the mollified
// tube smooth along the flow at eps = 0.1 (coarser rings scallop the support
// fringe and strand the fringe curves).
DiscreteCharge annulus_charge(int rings, int per_ring, double r_min, double r_max) {
    const int n = 2;
    std::vector<ChargeAtom> atoms;
    atoms.reserve(static_cast<size_t>(rings) * static_cast<size_t>(per_ring));
    const double dr = (r_max - r_min) / rings;
    const double dth = 2.0 * kPi / per_ring;
    for (int k = 0; k < rings; ++k) {
        const double r = r_min + (k + 0.5) * dr;
        const double mass = r * dr * dth;  // polar cell mass
        for (int j = 0; j < per_ring; ++j) {
            const double th = j * dth;
            HPoint p(n);
            p.x(0) = r * std::cos(th);
            p.x(1) = r * std::sin(th);
            HVector v(n);
            v.c[0] = -std::sin(th) * mass;
            v.c[1] = std::cos(th) * mass;
            atoms.push_back({p, v});
        }
    }
    return DiscreteCharge::make(n, std::move(atoms));
}

DiscreteCharge dipole_charge(int count, double ax, double bx) {
    const int n = 1;
    std::vector<ChargeAtom> atoms;
    const double step = (bx - ax) / count;
    for (int j = 0; j < count; ++j) {
        HPoint p(n);
        p.x(0) = ax + (j + 0.5) * step;
        HVector v(n);
        v.c[0] = step;
        atoms.push_back({p, v});
    }
    return DiscreteCharge::make(n, std::move(atoms));
}

std::vector<DivergenceAtom> dipole_divergence(double ax, double bx) {
    HPoint a(1), b(1);
    a.x(0) = ax;
    b.x(0) = bx;
    return {{a, 1.0}, {b, -1.0}};
}

DiscreteCharge source_charge(int n) {
    HPoint p(n);
    p.x(0) = 1.5;
    HVector v(n);
    v.c[0] = 1.0;
    return DiscreteCharge::make(n, {{p, v}});
}

HVectorField rotational_field(int n) {
    HVectorField f;
    f.n = n;
    f.name = "rotational";
    f.growth_bound = 1.0;
    f.eval = [n](const HPoint& p) {
        HVector v(n);
        v.c[0] = -p.y(0);
        v.c[static_cast<size_t>(n)] = p.x(0);
        return v;
    };
    return f;
}

HVectorField lagrangian_rotational_field() {
    HVectorField f;
    f.n = 2;
    f.name = "lagrangian_rotational";
    f.growth_bound = 1.0;
    f.eval = [](const HPoint& p) {
        HVector v(2);
        v.c[0] = -p.x(1);
        v.c[1] = p.x(0);
        return v;
    };
    return f;
}

HVectorField constant_field(int n, const Coords& coeffs) {
    if (coeffs.size() != static_cast<size_t>(2 * n))
        throw DimensionMismatch("constant_field: need 2n coefficients");
    HVectorField f;
    f.n = n;
    f.name = "constant";
    double nm = 0;
    for (double c : coeffs) nm += c * c;
    f.sup = std::sqrt(nm);
    f.eval = [n, coeffs](const HPoint&) { return HVector(n, coeffs); };
    return f;
}

}  // namespace heis
