#include "heisflow/mollifier.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace heis {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double raw_bump(double t) {  // t = ||u||^4 in [0,1)
    return t < 1.0 ? std::exp(-1.0 / (1.0 - t)) : 0.0;
}
}  // namespace

double Mollifier::unit_norm_constant(int n) {
    static std::map<int, double> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    const auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Reduced quadrature: the profile depends on (r = |h|, z) only, so
    // integral = S_{2n-1} * int r^{2n-1} B(r^4 + z^2) dz dr.
    double surf = 2.0 * std::pow(kPi, n);
    for (int k = 1; k < n; ++k) surf /= static_cast<double>(k);
    const int mr = 1536, mz = 3072;
    double acc = 0;
    for (int i = 0; i < mr; ++i) {
        const double r = (i + 0.5) / mr;
        const double rpow = std::pow(r, 2 * n - 1);
        double inner = 0;
        for (int j = 0; j < mz; ++j) {
            const double z = -1.0 + 2.0 * (j + 0.5) / mz;
            inner += raw_bump(r * r * r * r + z * z);
        }
        acc += rpow * inner * (2.0 / mz);
    }
    acc *= surf / mr;
    const double c = 1.0 / acc;
    cache[n] = c;
    return c;
}

Mollifier::Mollifier(int n, double eps) : n_(n), eps_(eps) {
    if (!(eps > 0)) throw std::invalid_argument("Mollifier: eps must be positive");
    inv_eps4_ = 1.0 / (eps * eps * eps * eps);
    scale_ = unit_norm_constant(n) * std::pow(eps, -static_cast<double>(homogeneous_dim()));
}

double Mollifier::value(const HPoint& u) const {
    check_same_n(u.n, n_, "Mollifier::value");
    double h2 = 0;
    for (int i = 0; i < 2 * n_; ++i) {
        const double v = u.c[static_cast<size_t>(i)];
        h2 += v * v;
    }
    const double zz = u.z();
    return scale_ * raw_bump((h2 * h2 + zz * zz) * inv_eps4_);
}

double Mollifier::value_diff(const double* dx, double zeta) const {
    double h2 = 0;
    for (int i = 0; i < 2 * n_; ++i) h2 += dx[i] * dx[i];
    const double t = (h2 * h2 + zeta * zeta) * inv_eps4_;
    if (t >= 1.0) return 0.0;
    return scale_ * std::exp(-1.0 / (1.0 - t));
}

MollifiedValue mollify_charge(const DiscreteCharge& mu, const AtomIndex& index,
                              const Mollifier& J, const HPoint& p) {
    check_same_n(mu.n, p.n, "mollify_charge");
    const int n = mu.n;
    MollifiedValue out;
    out.vector = HVector(n);
    thread_local std::vector<int32_t> hits;
    index.query(p, hits);
    double dx[16];
    for (const int32_t ai : hits) {
        const ChargeAtom& a = mu.atoms[static_cast<size_t>(ai)];
        // u = a^{-1} p: horizontal difference plus the group z-twist.
        double cross = 0;
        for (int i = 0; i < n; ++i) {
            dx[i] = p.x(i) - a.p.x(i);
            dx[n + i] = p.y(i) - a.p.y(i);
            cross += a.p.x(i) * p.y(i) - a.p.y(i) * p.x(i);
        }
        const double zeta = p.z() - a.p.z() - 0.5 * cross;
        const double w = J.value_diff(dx, zeta);
        if (w == 0.0) continue;
        const double vn = a.v.norm();
        out.density += w * vn;
        for (int i = 0; i < 2 * n; ++i) out.vector.c[static_cast<size_t>(i)] += w * a.v.c[static_cast<size_t>(i)];
    }
    return out;
}

MollifiedFlowField::MollifiedFlowField(std::shared_ptr<const DiscreteCharge> mu,
                                       const Mollifier& J, double threshold_factor)
    : mu_(std::move(mu)), J_(J), threshold_(threshold_factor * mu_->var()) {
    check_same_n(mu_->n, J.n(), "MollifiedFlowField");
    index_ = std::make_shared<AtomIndex>(*mu_, J.eps());
}

MollifiedValue MollifiedFlowField::value(const HPoint& p) const {
    return mollify_charge(*mu_, *index_, J_, p);
}

HVector MollifiedFlowField::direction(const HPoint& p) const {
    MollifiedValue mv = value(p);
    if (mv.density <= threshold_) return HVector(mu_->n);
    HVector v = std::move(mv.vector);
    v *= 1.0 / mv.density;
    return v;
}

HVectorField MollifiedFlowField::as_field() const {
    HVectorField f;
    f.n = mu_->n;
    f.sup = 1.0;
    f.name = "mollified direction";
    auto self = *this;
    f.eval = [self](const HPoint& p) { return self.direction(p); };
    return f;
}

HVectorField MollifiedFlowField::as_unnormalized_field() const {
    HVectorField f;
    f.n = mu_->n;
    f.name = "mollified charge";
    auto self = *this;
    f.eval = [self](const HPoint& p) { return self.value(p).vector; };
    return f;
}

}  // namespace heis
