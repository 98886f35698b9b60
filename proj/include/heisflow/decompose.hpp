#pragma once

#include <functional>
#include <optional>

#include "heisflow/charge.hpp"
#include "heisflow/curve.hpp"
#include "heisflow/dictionary.hpp"
#include "heisflow/flow.hpp"
#include "heisflow/mollifier.hpp"
#include "heisflow/seeds.hpp"

namespace heis {

struct NotSolenoidal : std::runtime_error {
    NotSolenoidal(double residual_, double tol_)
        : std::runtime_error("charge is not weakly solenoidal at the tested resolution"),
          residual(residual_),
          tolerance(tol_) {}
    double residual;
    double tolerance;
};

struct DecomposeOptions {
    double horizon = 1.0;  // l
    double eps = 0.1;
    double grid = 0.02;    // seed lattice spacing along the hull
    double dt = 0.01;
    int transverse_points = 2;
    double solenoidal_tol = 1e-6;      // precheck: |<div_H mu, f>| <= tol · var(mu)
    double division_threshold = 1e-12;
    int threads = 1;
    uint64_t jitter_seed = 0;
    double hull_tol = 1e-9;
};

struct WeightedCurve {
    double weight;
    HorizontalCurve curve;
};

/// Finite weighted family of horizontal curves; nu is atomic by construction.
struct CurveMeasure {
    int n = 1;
    double l = 0;
    std::vector<WeightedCurve> entries;

    double total() const {
        double s = 0;
        for (const auto& e : entries) s += e.weight;
        return s;
    }
};

/// Streaming consumer; curves arrive in seed order regardless of threading.
class CurveSink {
public:
    virtual ~CurveSink() = default;
    virtual void consume(size_t seed_index, double weight, const HorizontalCurve& curve) = 0;
};

struct RunSummary {
    size_t curve_count = 0;
    double total_weight = 0;            // nu(K_l)
    double var_mu = 0;                  // sum of seed masses = l · total_weight
    double var_mollified_estimate = 0;  // quadrature of |mu*J| against rho
    int hull_rank = 0;
};

/// The Theorem 5.2 pipeline: solenoidality pre-check, phi = (mu*J)/(|mu|*J),
/// seed quadrature of rho, one flow curve per node with weight mass/l.
RunSummary run_smirnov_flow(const DiscreteCharge& mu, const DecomposeOptions& opt,
                            const std::vector<CurveSink*>& sinks, bool check_solenoidal = true);

CurveMeasure decompose_solenoidal(const DiscreteCharge& mu, const DecomposeOptions& opt);

/// <mu, Phi_k> exactly from the atoms.
std::vector<double> pairing_exact(const DiscreteCharge& mu,
                                  const std::vector<HVectorField>& dictionary);

/// <mu*J_eps, Phi_k> by per-atom quadrature (direct oracle side).
std::vector<double> pairing_mollified(const DiscreteCharge& mu, double eps,
                                      const std::vector<HVectorField>& dictionary,
                                      double spacing, int transverse_points = 3);

struct VerifyTolerances {
    double pairing_rel = 2e-2;      // vs ||Phi||_inf · var(mu)
    double variation_rel = 1e-3;
    double support_fraction = 1e-3;
    double mass_rel = 1e-3;
    double contact_tol = 1e-10;
};

struct VerifyReport {
    std::vector<double> target_pairings, nu_pairings;
    std::vector<std::string> field_names;
    double pairing_max_rel = 0;
    double var_estimate = 0;
    double nu_variation = 0;
    double variation_rel_err = 0;
    double support_allowed_distance = 0;
    double support_outlier_sample_fraction = 0;
    double support_outlier_mass_fraction = 0;
    double length_mean = 0, length_min = 0, length_max = 0;
    double horizon = 0;
    double total_weight = 0;
    double mass_identity_rel_err = 0;
    double slow_sample_fraction = 0;  // |v| < 0.99 within the region (if any)
    double max_contact_defect = 0;
    double max_speed = 0;
    size_t curve_count = 0;
    bool pass_pairing = false, pass_variation = false, pass_support = false, pass_mass = false;

    bool all_pass() const { return pass_pairing && pass_variation && pass_support && pass_mass; }
    void finalize(const VerifyTolerances& tol, double var_mu,
                  const std::vector<double>& field_sups);
};

/// Streaming verification accumulator (also usable as a sink).
class VerifySink : public CurveSink {
public:
    VerifySink(const DiscreteCharge& mu, const std::vector<HVectorField>& dictionary,
               double support_distance,
               std::function<bool(const HPoint&)> speed_region = nullptr);

    void consume(size_t seed_index, double weight, const HorizontalCurve& curve) override;

    /// target: pairings of the reconstruction target (mu or mu*J_eps).
    VerifyReport finalize(const std::vector<double>& target_pairings, double var_estimate,
                          double var_mu, double horizon, const VerifyTolerances& tol) const;

private:
    const DiscreteCharge& mu_;
    const std::vector<HVectorField>& dict_;
    AtomIndex support_index_;
    double support_distance_;
    std::function<bool(const HPoint&)> region_;
    std::vector<double> acc_pairings_;
    double acc_variation_ = 0, total_weight_ = 0;
    double len_min_ = 0, len_max_ = 0, len_wsum_ = 0;
    double outlier_samples_ = 0, sample_units_ = 0, outlier_mass_ = 0;
    double slow_samples_ = 0, region_samples_ = 0;
    double max_contact_ = 0, max_speed_ = 0;
    size_t count_ = 0;
    bool any_ = false;
};

/// Re-verification of a stored decomposition against a target charge.
VerifyReport verify_decomposition(const DiscreteCharge& mu, std::optional<double> eps,
                                  const CurveMeasure& nu,
                                  const std::vector<HVectorField>& dictionary,
                                  const VerifyTolerances& tol,
                                  double oracle_spacing = 0.01,
                                  std::function<bool(const HPoint&)> speed_region = nullptr);

struct EpsilonStage {
    double eps;
    CurveMeasure nu;
    double recon_err_vs_mu = 0;      // max rel pairing error against mu itself
    double mass_identity_rel = 0;    // | l·total - var(mu*J_eps) | / var
};

/// Explicit epsilon-schedule replacing the weak-* extraction; diagnostics are
/// reconstruction errors against mu itself.
std::vector<EpsilonStage> refine_epsilon(const DiscreteCharge& mu,
                                         const std::vector<double>& schedule,
                                         DecomposeOptions opt);

}  // namespace heis
