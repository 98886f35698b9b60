#include "heisflow/dictionary.hpp"

#include <cmath>

namespace heis {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// Sampled sup over the support box, padded a little.
double sampled_sup(const HVectorField& f, const Coords& lo, const Coords& hi) {
    const size_t d = lo.size();
    const int m = 6;
    std::vector<size_t> idx(d, 0);
    double best = 0;
    while (true) {
        HPoint p(f.n);
        for (size_t i = 0; i < d; ++i)
            p.c[i] = lo[i] + (hi[i] - lo[i]) * (static_cast<double>(idx[i]) + 0.5) / m;
        best = std::max(best, f.eval(p).norm());
        size_t carry = 0;
        while (carry < d && ++idx[carry] == m) {
            idx[carry] = 0;
            ++carry;
        }
        if (carry == d) break;
    }
    return best * 1.05;
}

}  // namespace

std::vector<HVectorField> reconstruction_dictionary(int n, const Box& box) {
    const size_t d = static_cast<size_t>(2 * n + 1);
    Coords mid(d, 0.0), half(d, 0.0);
    for (size_t i = 0; i < d; ++i) {
        mid[i] = 0.5 * (box.lo[i] + box.hi[i]);
        half[i] = std::max(0.5 * (box.hi[i] - box.lo[i]), 0.4);
    }
    // The two widest horizontal coordinates carry the center pattern.
    size_t wa = 0, wb = 1;
    for (size_t i = 0; i < static_cast<size_t>(2 * n); ++i) {
        if (half[i] > half[wa]) {
            wb = wa;
            wa = i;
        } else if (half[i] > half[wb] && i != wa) {
            wb = i;
        }
    }

    std::vector<HVectorField> out;
    for (int k = 0; k < 9; ++k) {
        EuclideanBump bump;
        bump.center = mid;
        bump.radius = Coords(d, 0.0);
        for (size_t i = 0; i < d; ++i) bump.radius[i] = 0.8 * half[i];
        const double ang = 2.0 * kPi * k / 9.0 + 0.37;
        bump.center[wa] += 0.55 * half[wa] * std::cos(ang);
        bump.center[wb] += 0.55 * half[wb] * std::sin(ang);
        const int dir = k % (2 * n);
        HVectorField f;
        f.n = n;
        f.name = "bump_frame_" + std::to_string(k);
        f.sup = std::exp(-1.0);
        f.eval = [bump, dir, n](const HPoint& p) {
            HVector v(n);
            v.c[static_cast<size_t>(dir)] = bump.value(p.c);
            return v;
        };
        out.push_back(std::move(f));
    }
    {
        // Rotational field in the (x1, x2) plane for n >= 2, (x1, y1) for n = 1.
        EuclideanBump bump;
        bump.center = mid;
        bump.radius = Coords(d, 0.0);
        for (size_t i = 0; i < d; ++i) bump.radius[i] = 1.1 * half[i];
        const size_t ca = 0;
        const size_t cb = (n >= 2) ? 1 : static_cast<size_t>(n);
        const double scale = 1.0 / std::max(half[ca], half[cb]);
        HVectorField f;
        f.n = n;
        f.name = "bump_rotational";
        f.eval = [bump, ca, cb, scale, mid, n](const HPoint& p) {
            HVector v(n);
            const double b = bump.value(p.c) * scale;
            v.c[ca] = -(p.c[cb] - mid[cb]) * b;
            v.c[cb] = (p.c[ca] - mid[ca]) * b;
            return v;
        };
        Coords lo(d, 0.0), hi(d, 0.0);
        for (size_t i = 0; i < d; ++i) {
            lo[i] = bump.center[i] - bump.radius[i];
            hi[i] = bump.center[i] + bump.radius[i];
        }
        f.sup = sampled_sup(f, lo, hi);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<ScalarField> divergence_dictionary(int n, const Box& box) {
    const double margin = 0.75;
    std::vector<ScalarField> out;
    const ScalarField w = plateau_field(n, box, margin);
    out.push_back(w);
    out.back().name = "plateau";

    auto product_field = [n, w](std::function<double(const HPoint&)> g,
                                std::function<Coords(const HPoint&)> gg, double sup,
                                std::string name) {
        ScalarField f;
        f.n = n;
        f.sup = sup;
        f.name = std::move(name);
        auto we = w.eval;
        auto wg = w.grad_euclid;
        f.eval = [we, g](const HPoint& p) { return we(p) * g(p); };
        f.grad_euclid = [we, wg, g, gg](const HPoint& p) {
            const double wv = we(p);
            const double gv = g(p);
            Coords r = wg(p);
            const Coords gr = gg(p);
            for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] * gv + wv * gr[i];
            return r;
        };
        return f;
    };

    const size_t d = static_cast<size_t>(2 * n + 1);
    double cscale = 1.0;
    for (size_t i = 0; i < d; ++i)
        cscale = std::max({cscale, std::abs(box.lo[i]) + margin, std::abs(box.hi[i]) + margin});
    for (size_t i = 0; i < d; ++i) {
        out.push_back(product_field(
            [i](const HPoint& p) { return p.c[i]; },
            [i, d](const HPoint&) {
                Coords g(d, 0.0);
                g[i] = 1.0;
                return g;
            },
            cscale, "coord_" + std::to_string(i)));
    }
    // A few quadratics; x1^2, y1^2, x1*y1.
    const size_t ix = 0, iy = static_cast<size_t>(n);
    out.push_back(product_field([ix](const HPoint& p) { return p.c[ix] * p.c[ix]; },
                                [ix, d](const HPoint& p) {
                                    Coords g(d, 0.0);
                                    g[ix] = 2.0 * p.c[ix];
                                    return g;
                                },
                                cscale * cscale, "x1_sq"));
    out.push_back(product_field([iy](const HPoint& p) { return p.c[iy] * p.c[iy]; },
                                [iy, d](const HPoint& p) {
                                    Coords g(d, 0.0);
                                    g[iy] = 2.0 * p.c[iy];
                                    return g;
                                },
                                cscale * cscale, "y1_sq"));
    out.push_back(product_field([ix, iy](const HPoint& p) { return p.c[ix] * p.c[iy]; },
                                [ix, iy, d](const HPoint& p) {
                                    Coords g(d, 0.0);
                                    g[ix] = p.c[iy];
                                    g[iy] = p.c[ix];
                                    return g;
                                },
                                cscale * cscale, "x1_y1"));
    return out;
}

}  // namespace heis
