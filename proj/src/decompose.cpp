#include "heisflow/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "heisflow/calculus.hpp"
#include "heisflow/group.hpp"

namespace heis {

namespace {

// Integrates one batch of seeds; curves land in slots, sinks run in order.
void run_batched(const SeedQuadrature& seeds, const HVectorField& phi, const FlowConfig& fc,
                 double horizon, int threads, const std::vector<CurveSink*>& sinks,
                 double& var_estimate) {
    const size_t total = seeds.nodes.size();
    const size_t batch = std::max<size_t>(256, total / 64 + 1);
    std::vector<HorizontalCurve> slots(std::min(batch, total));
    var_estimate = 0;
    for (size_t lo = 0; lo < total; lo += batch) {
        const size_t hi = std::min(lo + batch, total);
        const size_t count = hi - lo;
        auto work = [&](size_t wlo, size_t whi) {
            for (size_t i = wlo; i < whi; ++i)
                slots[i - lo] = integrate(seeds.nodes[i].p, phi, fc);
        };
        if (threads <= 1 || count < 2 * static_cast<size_t>(threads)) {
            work(lo, hi);
        } else {
            std::vector<std::thread> pool;
            const size_t chunk = (count + static_cast<size_t>(threads) - 1) / static_cast<size_t>(threads);
            for (int t = 0; t < threads; ++t) {
                const size_t wlo = lo + static_cast<size_t>(t) * chunk;
                const size_t whi = std::min(wlo + chunk, hi);
                if (wlo >= whi) break;
                pool.emplace_back(work, wlo, whi);
            }
            for (auto& th : pool) th.join();
        }
        for (size_t i = lo; i < hi; ++i) {
            const HorizontalCurve& c = slots[i - lo];
            const double w = seeds.nodes[i].mass / horizon;
            var_estimate += seeds.nodes[i].mass * c.velocities.front().norm();
            for (CurveSink* s : sinks) s->consume(i, w, c);
        }
    }
}

}  // namespace

RunSummary run_smirnov_flow(const DiscreteCharge& mu, const DecomposeOptions& opt,
                            const std::vector<CurveSink*>& sinks, bool check_solenoidal) {
    RunSummary out;
    if (mu.atoms.empty()) return out;
    out.var_mu = mu.var();

    if (check_solenoidal) {
        const Box box = mu.bounding_box().padded(opt.eps + 0.25);
        const auto dict = divergence_dictionary(mu.n, box);
        double worst = 0;
        for (const auto& f : dict) worst = std::max(worst, std::abs(weak_divergence(mu, f)));
        if (worst > opt.solenoidal_tol * out.var_mu)
            throw NotSolenoidal(worst / out.var_mu, opt.solenoidal_tol);
    }

    const Mollifier J(mu.n, opt.eps);
    MollifiedFlowField field(std::make_shared<DiscreteCharge>(mu), J, opt.division_threshold);
    const HVectorField phi = field.as_field();

    SeedOptions so;
    so.spacing = opt.grid;
    so.transverse_points = opt.transverse_points;
    so.hull_tol = opt.hull_tol;
    so.jitter_seed = opt.jitter_seed;
    const SeedQuadrature seeds = build_seed_quadrature(mu, J, so);
    out.hull_rank = seeds.hull_rank;

    FlowConfig fc;
    fc.dt = opt.dt;
    fc.t_max = opt.horizon;
    fc.enforce_speed_limit = true;

    run_batched(seeds, phi, fc, opt.horizon, opt.threads, sinks, out.var_mollified_estimate);
    out.curve_count = seeds.nodes.size();
    out.total_weight = seeds.total_mass / opt.horizon;
    return out;
}

namespace {
class MaterializeSink : public CurveSink {
public:
    explicit MaterializeSink(CurveMeasure& m) : m_(m) {}
    void consume(size_t, double weight, const HorizontalCurve& curve) override {
        m_.entries.push_back(WeightedCurve{weight, curve});
    }

private:
    CurveMeasure& m_;
};
}  // namespace

CurveMeasure decompose_solenoidal(const DiscreteCharge& mu, const DecomposeOptions& opt) {
    CurveMeasure m;
    m.n = mu.n;
    m.l = opt.horizon;
    MaterializeSink sink(m);
    std::vector<CurveSink*> sinks{&sink};
    run_smirnov_flow(mu, opt, sinks);
    return m;
}

std::vector<double> pairing_exact(const DiscreteCharge& mu,
                                  const std::vector<HVectorField>& dictionary) {
    std::vector<double> out(dictionary.size(), 0.0);
    for (const auto& a : mu.atoms)
        for (size_t k = 0; k < dictionary.size(); ++k)
            out[k] += dot(dictionary[k].eval(a.p), a.v);
    return out;
}

std::vector<double> pairing_mollified(const DiscreteCharge& mu, double eps,
                                      const std::vector<HVectorField>& dictionary,
                                      double spacing, int transverse_points) {
    const Mollifier J(mu.n, eps);
    SeedOptions so;
    so.spacing = spacing;
    so.transverse_points = transverse_points;
    const SeedQuadrature q = build_seed_quadrature(mu, J, so);
    std::vector<double> out(dictionary.size(), 0.0);
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        const ChargeAtom& a = mu.atoms[static_cast<size_t>(q.atom_of[i])];
        const double inv = 1.0 / a.v.norm();
        for (size_t k = 0; k < dictionary.size(); ++k)
            out[k] += q.nodes[i].mass * inv * dot(dictionary[k].eval(q.nodes[i].p), a.v);
    }
    return out;
}

void VerifyReport::finalize(const VerifyTolerances& tol, double var_mu,
                            const std::vector<double>& field_sups) {
    pairing_max_rel = 0;
    for (size_t k = 0; k < target_pairings.size(); ++k) {
        const double denom = std::max(field_sups[k] * var_mu, 1e-300);
        pairing_max_rel =
            std::max(pairing_max_rel, std::abs(target_pairings[k] - nu_pairings[k]) / denom);
    }
    variation_rel_err =
        std::abs(nu_variation - var_estimate) / std::max(var_estimate, 1e-300);
    mass_identity_rel_err =
        std::abs(horizon * total_weight - var_estimate) / std::max(var_estimate, 1e-300);
    pass_pairing = pairing_max_rel <= tol.pairing_rel;
    pass_variation = variation_rel_err <= tol.variation_rel;
    pass_support = support_outlier_sample_fraction <= tol.support_fraction;
    pass_mass = mass_identity_rel_err <= tol.mass_rel;
}

VerifySink::VerifySink(const DiscreteCharge& mu, const std::vector<HVectorField>& dictionary,
                       double support_distance, std::function<bool(const HPoint&)> speed_region)
    : mu_(mu),
      dict_(dictionary),
      support_index_(mu, std::max(support_distance, 1e-6) * 1.01),
      support_distance_(support_distance),
      region_(std::move(speed_region)),
      acc_pairings_(dictionary.size(), 0.0) {}

void VerifySink::consume(size_t, double weight, const HorizontalCurve& curve) {
    for (size_t k = 0; k < dict_.size(); ++k) acc_pairings_[k] += weight * act(curve, dict_[k]);
    acc_variation_ += weight * variation(curve);
    total_weight_ += weight;
    const double len = length(curve);
    len_min_ = any_ ? std::min(len_min_, len) : len;
    len_max_ = any_ ? std::max(len_max_, len) : len;
    len_wsum_ += weight * len;
    any_ = true;
    ++count_;

    thread_local std::vector<int32_t> hits;
    size_t outliers = 0;
    for (const auto& p : curve.samples) {
        support_index_.query(p, hits);
        double best = std::numeric_limits<double>::infinity();
        double dx[16];
        const int n = mu_.n;
        for (int32_t ai : hits) {
            const ChargeAtom& a = mu_.atoms[static_cast<size_t>(ai)];
            double cross = 0;
            for (int i = 0; i < n; ++i) {
                dx[i] = p.x(i) - a.p.x(i);
                dx[n + i] = p.y(i) - a.p.y(i);
                cross += a.p.x(i) * p.y(i) - a.p.y(i) * p.x(i);
            }
            const double zeta = p.z() - a.p.z() - 0.5 * cross;
            double h2 = 0;
            for (int i = 0; i < 2 * n; ++i) h2 += dx[i] * dx[i];
            best = std::min(best, h2 * h2 + zeta * zeta);
            if (best <= support_distance_ * support_distance_ * support_distance_ * support_distance_)
                break;
        }
        const double d4 = support_distance_ * support_distance_ * support_distance_ * support_distance_;
        if (!(best <= d4)) ++outliers;
    }
    const double frac = curve.samples.empty() ? 0.0 : static_cast<double>(outliers) / curve.samples.size();
    outlier_samples_ += weight * frac;
    sample_units_ += weight;
    if (outliers > 0) outlier_mass_ += weight;

    for (size_t k = 0; k < curve.samples.size(); ++k) {
        if (region_ && !region_(curve.samples[k])) continue;
        region_samples_ += weight;
        if (curve.velocities[k].norm() < 0.99) slow_samples_ += weight;
    }

    const CurveValidation v = validate_curve(curve);
    max_contact_ = std::max(max_contact_, v.max_contact_defect);
    max_speed_ = std::max(max_speed_, v.max_speed);
}

VerifyReport VerifySink::finalize(const std::vector<double>& target_pairings, double var_estimate,
                                  double var_mu, double horizon,
                                  const VerifyTolerances& tol) const {
    VerifyReport r;
    r.target_pairings = target_pairings;
    r.nu_pairings = acc_pairings_;
    for (const auto& f : dict_) r.field_names.push_back(f.name);
    r.var_estimate = var_estimate;
    r.nu_variation = acc_variation_;
    r.support_allowed_distance = support_distance_;
    r.support_outlier_sample_fraction = sample_units_ > 0 ? outlier_samples_ / sample_units_ : 0.0;
    r.support_outlier_mass_fraction = total_weight_ > 0 ? outlier_mass_ / total_weight_ : 0.0;
    r.length_min = any_ ? len_min_ : 0.0;
    r.length_max = len_max_;
    r.length_mean = total_weight_ > 0 ? len_wsum_ / total_weight_ : 0.0;
    r.horizon = horizon;
    r.total_weight = total_weight_;
    r.slow_sample_fraction = region_samples_ > 0 ? slow_samples_ / region_samples_ : 0.0;
    r.max_contact_defect = max_contact_;
    r.max_speed = max_speed_;
    r.curve_count = count_;
    std::vector<double> sups;
    for (const auto& f : dict_) sups.push_back(std::max(f.sup, 1e-12));
    r.finalize(tol, var_mu, sups);
    return r;
}

VerifyReport verify_decomposition(const DiscreteCharge& mu, std::optional<double> eps,
                                  const CurveMeasure& nu,
                                  const std::vector<HVectorField>& dictionary,
                                  const VerifyTolerances& tol, double oracle_spacing,
                                  std::function<bool(const HPoint&)> speed_region) {
    const double support_distance = (eps ? *eps : 0.0) + oracle_spacing + 1e-9;
    VerifySink sink(mu, dictionary, support_distance, std::move(speed_region));
    for (const auto& e : nu.entries) sink.consume(0, e.weight, e.curve);

    std::vector<double> target = eps ? pairing_mollified(mu, *eps, dictionary, oracle_spacing)
                                     : pairing_exact(mu, dictionary);
    double var_estimate = mu.var();
    if (eps) {
        // Quadrature of var(mu*J_eps) = int |phi| drho on the oracle stencil.
        const Mollifier J(mu.n, *eps);
        MollifiedFlowField f(std::make_shared<DiscreteCharge>(mu), J);
        SeedOptions so;
        so.spacing = oracle_spacing;
        so.transverse_points = 3;
        const SeedQuadrature q = build_seed_quadrature(mu, J, so);
        var_estimate = 0;
        for (const auto& node : q.nodes) var_estimate += node.mass * f.direction(node.p).norm();
    }
    return sink.finalize(target, var_estimate, mu.var(), nu.l, tol);
}

std::vector<EpsilonStage> refine_epsilon(const DiscreteCharge& mu,
                                         const std::vector<double>& schedule,
                                         DecomposeOptions opt) {
    for (size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw std::invalid_argument("refine_epsilon: schedule must be strictly decreasing");
    const Box box = mu.bounding_box().padded((schedule.empty() ? opt.eps : schedule.front()) + 0.5);
    const auto dict = reconstruction_dictionary(mu.n, box);
    const auto exact = pairing_exact(mu, dict);
    const double var_mu = mu.var();

    std::vector<EpsilonStage> out;
    for (double eps : schedule) {
        EpsilonStage st;
        st.eps = eps;
        opt.eps = eps;
        st.nu = decompose_solenoidal(mu, opt);
        double worst = 0;
        double var_est = 0;
        for (const auto& e : st.nu.entries) var_est += e.weight * length(e.curve);
        for (size_t k = 0; k < dict.size(); ++k) {
            double acc = 0;
            for (const auto& e : st.nu.entries) acc += e.weight * act(e.curve, dict[k]);
            worst = std::max(worst, std::abs(acc - exact[k]) / std::max(dict[k].sup * var_mu, 1e-300));
        }
        st.recon_err_vs_mu = worst;
        st.mass_identity_rel =
            std::abs(opt.horizon * st.nu.total() - var_est) / std::max(var_est, 1e-300);
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace heis
