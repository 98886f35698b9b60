#include "heisflow/lift.hpp"

#include <cmath>

#include "heisflow/calculus.hpp"
#include "heisflow/group.hpp"

namespace heis {

HPoint embed_at_height(const HPoint& p, double t) {
    const int n = p.n;
    HPoint q(n + 1);
    for (int i = 0; i < n; ++i) {
        q.x(i) = p.x(i);
        q.y(i) = p.y(i);
    }
    q.x(n) = t;
    q.y(n) = 0.0;
    q.z() = p.z();
    return q;
}

HPoint project_point(const HPoint& lp) {
    const int n = lp.n - 1;
    HPoint q(n);
    for (int i = 0; i < n; ++i) {
        q.x(i) = lp.x(i);
        q.y(i) = lp.y(i);
    }
    q.z() = lp.z();
    return q;
}

HVector project_vector(const HVector& lv) {
    const int n = lv.n - 1;
    HVector v(n);
    for (int i = 0; i < n; ++i) {
        v.c[static_cast<size_t>(i)] = lv.c[static_cast<size_t>(i)];
        v.c[static_cast<size_t>(n + i)] = lv.c[static_cast<size_t>(lv.n + i)];
    }
    return v;
}

namespace {
HVector embed_vector(const HVector& v, double x_extra) {
    const int n = v.n;
    HVector w(n + 1);
    for (int i = 0; i < n; ++i) {
        w.c[static_cast<size_t>(i)] = v.c[static_cast<size_t>(i)];
        w.c[static_cast<size_t>(n + 1 + i)] = v.c[static_cast<size_t>(n + i)];
    }
    w.c[static_cast<size_t>(n)] = x_extra;  // X_{n+1} channel
    return w;
}
}  // namespace

LiftedCharge lift_charge(const DiscreteCharge& mu, const std::vector<DivergenceAtom>& divergence,
                         double l, double segment_dx) {
    if (!(l > 0)) throw std::invalid_argument("lift_charge: l must be positive");
    LiftedCharge out;
    out.base_n = mu.n;
    out.l = l;
    std::vector<ChargeAtom> atoms;
    // mu ⊗ (delta_0 - delta_l): two height copies with opposite signs.
    for (const auto& a : mu.atoms) {
        atoms.push_back({embed_at_height(a.p, 0.0), embed_vector(a.v, 0.0)});
        HVector neg = a.v;
        neg *= -1.0;
        atoms.push_back({embed_at_height(a.p, l), embed_vector(neg, 0.0)});
    }
    out.copy_atoms = atoms.size();
    // -div_H(mu) ⊗ H^1|[0,l]: X_{n+1} columns, midpoint discretized.
    const int per_col = std::max(2, static_cast<int>(std::lround(l / segment_dx)));
    const double step = l / per_col;
    for (const auto& d : divergence) {
        check_same_n(d.p.n, mu.n, "lift_charge divergence atom");
        for (int j = 0; j < per_col; ++j) {
            const double t = (j + 0.5) * step;
            HVector v(mu.n + 1);
            v.c[static_cast<size_t>(mu.n)] = -d.mass * step;
            atoms.push_back({embed_at_height(d.p, t), v});
        }
    }
    out.column_atoms = atoms.size() - out.copy_atoms;
    out.lifted = DiscreteCharge::make(mu.n + 1, std::move(atoms));
    return out;
}

std::vector<DivergenceAtom> extract_divergence_atoms(const DiscreteCharge& mu, double grid,
                                                     double drop_tol) {
    // Smooth partition of unity: per-axis difference of shifted smooth steps,
    // telescoping to 1; cell (k_1..k_d) supported on the 2-cell neighborhood.
    const int n = mu.n;
    const int d = 2 * n + 1;
    const Box box = mu.bounding_box().padded(2 * grid);
    std::vector<int> cells(static_cast<size_t>(d), 0);
    for (int i = 0; i < d; ++i)
        cells[static_cast<size_t>(i)] =
            std::max(1, static_cast<int>(std::ceil((box.hi[static_cast<size_t>(i)] - box.lo[static_cast<size_t>(i)]) / grid)));

    auto smooth_step = [](double t) {  // C^inf, 0 at t<=0, 1 at t>=1
        auto b = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
        const double a = b(t), c = b(1.0 - t);
        return a / (a + c);
    };
    auto pu1d = [smooth_step](double t) {  // bump with sum_k pu1d(t-k) = 1
        return smooth_step(t + 1.0) - smooth_step(t);
    };

    const double total_mass = mu.var();
    std::vector<DivergenceAtom> out;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    while (true) {
        Coords center(static_cast<size_t>(d), 0.0);
        for (int i = 0; i < d; ++i)
            center[static_cast<size_t>(i)] = box.lo[static_cast<size_t>(i)] + (idx[static_cast<size_t>(i)] + 0.5) * grid;
        ScalarField f;
        f.n = n;
        Coords lo = box.lo;
        std::vector<int> cell = idx;
        f.eval = [lo, cell, grid, pu1d](const HPoint& p) {
            double v = 1.0;
            for (size_t i = 0; i < lo.size(); ++i)
                v *= pu1d((p.c[i] - lo[i]) / grid - cell[i] - 0.5);
            return v;
        };
        const double m = weak_divergence(mu, f);
        if (std::abs(m) > drop_tol * std::max(total_mass, 1.0))
            out.push_back({HPoint(n, center), m});
        size_t carry = 0;
        while (carry < static_cast<size_t>(d) && ++idx[carry] == cells[carry]) {
            idx[carry] = 0;
            ++carry;
        }
        if (carry == static_cast<size_t>(d)) break;
    }
    return out;
}

namespace {

// Clips a lifted curve to its plane-contact interval, projects and re-derives
// z so the n-dimensional contact identity is exact.
class ProjectionSink : public CurveSink {
public:
    ProjectionSink(const GeneralOptions& opt, const std::vector<DivergenceAtom>& divergence,
                   const std::vector<CurveSink*>& downstream, GeneralDiagnostics& diag)
        : opt_(opt), div_(divergence), downstream_(downstream), diag_(diag) {}

    void consume(size_t, double weight, const HorizontalCurve& curve) override {
        const int nl = curve.n;       // lifted n
        const int n = nl - 1;         // base n
        const double band = opt_.plane_contact_band;
        long alpha = -1, beta = -1;
        for (size_t k = 0; k < curve.samples.size(); ++k) {
            if (std::abs(curve.samples[k].x(n)) <= band) {
                if (alpha < 0) alpha = static_cast<long>(k);
                beta = static_cast<long>(k);
            }
        }
        if (alpha < 0) {
            diag_.dropped_weight += weight;
            ++diag_.dropped_curves;
            return;
        }
        // Vertical classification over the open slab near the divergence support.
        for (size_t k = 0; k < curve.samples.size(); ++k) {
            const HPoint& p = curve.samples[k];
            const double h = p.x(n);
            if (h <= band || h >= curve.l - band) continue;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& dvg : div_) {
                double d2 = 0;
                for (int i = 0; i < n; ++i) {
                    const double dx = p.x(i) - dvg.p.x(i);
                    const double dy = p.y(i) - dvg.p.y(i);
                    d2 += dx * dx + dy * dy;
                }
                best = std::min(best, d2);
            }
            if (div_.empty() || best > 4.0 * opt_.inner.eps * opt_.inner.eps) continue;
            slab_samples_ += weight;
            if (std::abs(curve.velocities[k].c[static_cast<size_t>(n)]) >=
                opt_.vertical_speed_threshold)
                vertical_samples_ += weight;
        }

        // P(gamma+) = pi(gamma+(clamp(s, alpha, beta))) on the same grid.
        HorizontalCurve c;
        c.n = n;
        c.l = curve.l;
        c.dt = curve.dt;
        const long M = static_cast<long>(curve.steps());
        c.samples.reserve(static_cast<size_t>(M) + 1);
        c.velocities.reserve(static_cast<size_t>(M) + 1);
        for (long k = 0; k <= M; ++k) {
            const long j = std::clamp(k, alpha, beta);
            c.samples.push_back(project_point(curve.samples[static_cast<size_t>(j)]));
            if (k > alpha && k < beta) {
                c.velocities.push_back(project_vector(curve.velocities[static_cast<size_t>(j)]));
            } else {
                c.velocities.push_back(HVector(n));
            }
        }
        // Dropping the (n+1) channels loses their area-rule term when the
        // curve carries a constant y_{n+1} offset; re-derive z.
        for (long k = 0; k < M; ++k) {
            HPoint& nxt = c.samples[static_cast<size_t>(k) + 1];
            nxt.z() = c.samples[static_cast<size_t>(k)].z() +
                      area_rule_increment(c.samples[static_cast<size_t>(k)], nxt);
        }
        diag_.kept_weight += weight;
        ++diag_.kept_curves;
        clipped_duration_ += weight * (curve.l - (beta - alpha) * curve.dt);
        for (CurveSink* s : downstream_) s->consume(diag_.kept_curves - 1, weight, c);
    }

    void finish() {
        diag_.mean_clipped_duration =
            diag_.kept_weight > 0 ? clipped_duration_ / diag_.kept_weight : 0.0;
        diag_.vertical_fraction = slab_samples_ > 0 ? vertical_samples_ / slab_samples_ : 0.0;
    }

private:
    const GeneralOptions& opt_;
    const std::vector<DivergenceAtom>& div_;
    const std::vector<CurveSink*>& downstream_;
    GeneralDiagnostics& diag_;
    double clipped_duration_ = 0;
    double slab_samples_ = 0, vertical_samples_ = 0;
};

class MaterializeGeneral : public CurveSink {
public:
    explicit MaterializeGeneral(CurveMeasure& m) : m_(m) {}
    void consume(size_t, double weight, const HorizontalCurve& curve) override {
        m_.entries.push_back(WeightedCurve{weight, curve});
    }

private:
    CurveMeasure& m_;
};

}  // namespace

void decompose_general_streaming(const DiscreteCharge& mu,
                                 const std::vector<DivergenceAtom>& divergence,
                                 const GeneralOptions& opt, GeneralDiagnostics& diag,
                                 const std::vector<CurveSink*>& downstream) {
    const LiftedCharge lifted = lift_charge(mu, divergence, opt.inner.horizon, opt.segment_dx);
    diag.lifted_var = lifted.lifted.var();

    {
        const Box box = lifted.lifted.bounding_box().padded(opt.inner.eps + 0.25);
        const auto dict = divergence_dictionary(lifted.lifted.n, box);
        for (const auto& f : dict)
            diag.lifted_divergence_residual =
                std::max(diag.lifted_divergence_residual, std::abs(weak_divergence(lifted.lifted, f)));
    }

    ProjectionSink sink(opt, divergence, downstream, diag);
    std::vector<CurveSink*> sinks{&sink};
    const RunSummary inner = run_smirnov_flow(lifted.lifted, opt.inner, sinks, /*check_solenoidal=*/true);
    diag.inner_total_weight = inner.total_weight;
    diag.inner_var_mollified = inner.var_mollified_estimate;
    sink.finish();
}

CurveMeasure decompose_general(const DiscreteCharge& mu,
                               const std::vector<DivergenceAtom>& divergence,
                               const GeneralOptions& opt, GeneralDiagnostics* diag) {
    GeneralDiagnostics local;
    GeneralDiagnostics& d = diag ? *diag : local;
    CurveMeasure out;
    out.n = mu.n;
    out.l = opt.inner.horizon;
    MaterializeGeneral mat(out);
    std::vector<CurveSink*> down{&mat};
    decompose_general_streaming(mu, divergence, opt, d, down);
    return out;
}

}  // namespace heis
