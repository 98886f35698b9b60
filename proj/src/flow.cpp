#include "heisflow/flow.hpp"

#include <cmath>
#include <cstring>

#include "heisflow/group.hpp"

namespace heis {

void FlowConfig::validate() const {
    if (!(dt > 0)) throw std::invalid_argument("FlowConfig: dt must be positive");
    if (!(dt <= t_max + 1e-15)) throw std::invalid_argument("FlowConfig: dt must not exceed t_max");
}

namespace {

struct State {
    Coords h;  // 2n
    double z;
};

HPoint to_point(int n, const State& s) {
    HPoint p(n);
    for (int i = 0; i < 2 * n; ++i) p.c[static_cast<size_t>(i)] = s.h[static_cast<size_t>(i)];
    p.z() = s.z;
    return p;
}

// (h', z') at the state; z' = (1/2) omega(h, h').
void derivative(const HVectorField& field, int n, const State& s, Coords& dh, double& dz) {
    const HVector v = field.eval(to_point(n, s));
    dh.assign(static_cast<size_t>(2 * n), 0.0);
    for (int i = 0; i < 2 * n; ++i) dh[static_cast<size_t>(i)] = v.c[static_cast<size_t>(i)];
    dz = 0;
    for (int i = 0; i < n; ++i)
        dz += 0.5 * (s.h[static_cast<size_t>(i)] * v.c[static_cast<size_t>(n + i)] -
                     s.h[static_cast<size_t>(n + i)] * v.c[static_cast<size_t>(i)]);
}

State rk4_step(const HVectorField& field, int n, const State& s, double dt) {
    const size_t d = static_cast<size_t>(2 * n);
    Coords k1h, k2h, k3h, k4h;
    double k1z, k2z, k3z, k4z;
    State tmp{Coords(d, 0.0), 0.0};

    derivative(field, n, s, k1h, k1z);
    for (size_t i = 0; i < d; ++i) tmp.h[i] = s.h[i] + 0.5 * dt * k1h[i];
    tmp.z = s.z + 0.5 * dt * k1z;
    derivative(field, n, tmp, k2h, k2z);
    for (size_t i = 0; i < d; ++i) tmp.h[i] = s.h[i] + 0.5 * dt * k2h[i];
    tmp.z = s.z + 0.5 * dt * k2z;
    derivative(field, n, tmp, k3h, k3z);
    for (size_t i = 0; i < d; ++i) tmp.h[i] = s.h[i] + dt * k3h[i];
    tmp.z = s.z + dt * k3z;
    derivative(field, n, tmp, k4h, k4z);

    State out{Coords(d, 0.0), 0.0};
    for (size_t i = 0; i < d; ++i)
        out.h[i] = s.h[i] + dt / 6.0 * (k1h[i] + 2.0 * k2h[i] + 2.0 * k3h[i] + k4h[i]);
    out.z = s.z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    return out;
}

}  // namespace

HorizontalCurve integrate(const HPoint& seed, const HVectorField& field, const FlowConfig& config) {
    check_same_n(seed.n, field.n, "integrate");
    config.validate();
    const int n = seed.n;
    const double steps_real = config.t_max / config.dt;
    const long steps = std::lround(steps_real);
    if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9)
        throw std::invalid_argument("integrate: t_max must be an integer multiple of dt");

    HorizontalCurve c;
    c.n = n;
    c.l = config.t_max;
    c.dt = config.dt;
    c.samples.reserve(static_cast<size_t>(steps) + 1);
    c.velocities.reserve(static_cast<size_t>(steps) + 1);

    State s{Coords(static_cast<size_t>(2 * n), 0.0), seed.z()};
    for (int i = 0; i < 2 * n; ++i) s.h[static_cast<size_t>(i)] = seed.c[static_cast<size_t>(i)];

    HPoint cur = to_point(n, s);
    for (long k = 0; k <= steps; ++k) {
        const HVector v = field.eval(cur);
        if (config.enforce_speed_limit && v.norm() > 1.0 + 1e-9)
            throw SpeedBoundExceeded("integrate: |field| exceeds 1 + 1e-9 on the trajectory");
        c.samples.push_back(cur);
        c.velocities.push_back(v);
        if (k == steps) break;
        State next = rk4_step(field, n, s, config.dt);
        HPoint np = to_point(n, next);
        // Exact discrete horizontality: z from the trapezoidal area rule.
        np.z() = cur.z() + area_rule_increment(cur, np);
        next.z = np.z();
        s = next;
        cur = np;
    }
    return c;
}

FlowMap::FlowMap(HVectorField field, FlowConfig config)
    : field_(std::move(field)), config_(config) {
    config_.validate();
}

const HorizontalCurve& FlowMap::trajectory(const HPoint& seed) const {
    std::string key(reinterpret_cast<const char*>(seed.c.data()), seed.c.size() * sizeof(double));
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        auto cur = std::make_shared<HorizontalCurve>(integrate(seed, field_, config_));
        it = cache_.emplace(std::move(key), std::move(cur)).first;
    }
    return *it->second;
}

HPoint flow_at(const HPoint& x, double t, const FlowMap& map) {
    const FlowConfig& cfg = map.config();
    if (std::abs(t) > cfg.t_max + 1e-9) throw HorizonExceeded("flow_at: |t| exceeds t_max");
    if (t == 0.0) return x;
    if (t < 0) {
        HVectorField rev = map.field();
        auto fwd = map.field().eval;
        rev.eval = [fwd](const HPoint& p) {
            HVector v = fwd(p);
            v *= -1.0;
            return v;
        };
        FlowConfig c2 = cfg;
        c2.t_max = -t;
        const double r = -t / c2.dt;
        if (std::abs(r - std::lround(r)) > 1e-9) c2.dt = -t / std::max(1.0, std::ceil(r));
        return integrate(x, rev, c2).back();
    }
    const double pos = t / cfg.dt;
    const long k = std::lround(pos);
    if (std::abs(pos - static_cast<double>(k)) < 1e-9) {
        const HorizontalCurve& traj = map.trajectory(x);
        return traj.samples[static_cast<size_t>(k)];
    }
    // Off-grid time: whole steps from the cached trajectory, then one short step.
    const long k0 = static_cast<long>(std::floor(pos));
    const HorizontalCurve& traj = map.trajectory(x);
    HPoint base = traj.samples[static_cast<size_t>(k0)];
    FlowConfig c2 = cfg;
    c2.t_max = t - static_cast<double>(k0) * cfg.dt;
    c2.dt = c2.t_max;
    return integrate(base, map.field(), c2).back();
}

GronwallReport gronwall_certificate(const HorizontalCurve& curve, double c, double K) {
    GronwallReport r;
    r.growth_constant = c;
    r.rate_constant = K;
    if (curve.samples.empty()) return r;
    const double s0 = homogeneous_norm4(curve.samples.front());
    r.max_slack = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < curve.samples.size(); ++k) {
        const double t = static_cast<double>(k) * curve.dt;
        const double bound = (s0 + 1.0) * std::exp(K * t) - 1.0;
        const double slack = homogeneous_norm4(curve.samples[k]) - bound;
        if (slack > r.max_slack) {
            r.max_slack = slack;
            r.worst_t = t;
        }
    }
    r.holds = r.max_slack <= 1e-9;
    return r;
}

}  // namespace heis
