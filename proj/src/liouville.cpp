#include "heisflow/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "heisflow/flow.hpp"

namespace heis {

LiouvilleReport liouville_residual(const DiscreteCharge& mu, const Mollifier& J,
                                   const std::vector<double>& t_grid,
                                   const std::vector<ScalarField>& tests,
                                   const LiouvilleOptions& opt) {
    LiouvilleReport rep;
    rep.per_time.assign(t_grid.size(), 0.0);
    if (mu.atoms.empty() || t_grid.empty() || tests.empty()) return rep;

    MollifiedFlowField field(std::make_shared<DiscreteCharge>(mu), J, opt.division_threshold);
    const HVectorField phi = field.as_field();

    SeedOptions so;
    so.spacing = opt.grid;
    so.transverse_points = opt.transverse_points;
    const SeedQuadrature seeds = build_seed_quadrature(mu, J, so);

    double t_max = 0;
    for (double t : t_grid) t_max = std::max(t_max, t);
    std::vector<long> snap(t_grid.size(), 0);
    for (size_t i = 0; i < t_grid.size(); ++i) {
        snap[i] = std::lround(t_grid[i] / opt.dt);
        if (std::abs(snap[i] * opt.dt - t_grid[i]) > 1e-9)
            throw std::invalid_argument("liouville_residual: times must sit on the dt grid");
    }

    const size_t nt = t_grid.size(), nf = tests.size();
    std::vector<double> s_t(nt * nf, 0.0), s_0(nf, 0.0), s_abs(nf, 0.0);

    FlowConfig fc;
    fc.dt = opt.dt;
    fc.t_max = std::max(t_max, opt.dt);
    fc.enforce_speed_limit = true;

    const size_t total = seeds.nodes.size();
    std::vector<std::vector<HPoint>> snaps(total);
    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            const HorizontalCurve c = integrate(seeds.nodes[i].p, phi, fc);
            auto& row = snaps[i];
            row.reserve(nt);
            for (size_t k = 0; k < nt; ++k) row.push_back(c.samples[static_cast<size_t>(snap[k])]);
        }
    };
    if (opt.threads <= 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (total + static_cast<size_t>(opt.threads) - 1) / static_cast<size_t>(opt.threads);
        for (int t = 0; t < opt.threads; ++t) {
            const size_t lo = static_cast<size_t>(t) * chunk;
            const size_t hi = std::min(lo + chunk, total);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (size_t i = 0; i < total; ++i) {
        const double m = seeds.nodes[i].mass;
        for (size_t f = 0; f < nf; ++f) {
            const double v0 = tests[f].eval(seeds.nodes[i].p);
            s_0[f] += m * v0;
            s_abs[f] += m * std::abs(v0);
            for (size_t k = 0; k < nt; ++k) s_t[k * nf + f] += m * tests[f].eval(snaps[i][k]);
        }
    }

    for (size_t k = 0; k < nt; ++k) {
        double worst = 0;
        for (size_t f = 0; f < nf; ++f) {
            if (s_abs[f] < 1e-12 * seeds.total_mass) continue;  // test blind to the support
            worst = std::max(worst, std::abs(s_t[k * nf + f] - s_0[f]) / s_abs[f]);
        }
        rep.per_time[k] = worst;
        rep.max_residual = std::max(rep.max_residual, worst);
    }
    return rep;
}

}  // namespace heis
