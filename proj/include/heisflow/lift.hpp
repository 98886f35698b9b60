#pragma once

#include "heisflow/decompose.hpp"

namespace heis {

struct DivergenceAtom {
    HPoint p;
    double mass;
};

/// mu+ = (mu ⊗ (delta_0 - delta_l), -div_H(mu) ⊗ H^1|[0,l], 0) realized on
/// H^{n+1} through the embedding E((x,y,z),t) = (x,t,y,0,z).
struct LiftedCharge {
    int base_n = 1;
    double l = 0;
    DiscreteCharge lifted;       // on H^{n+1}
    size_t copy_atoms = 0;       // leading atoms: the two mu copies
    size_t column_atoms = 0;     // trailing atoms: divergence columns
};

/// Embeds a base point at height t.
HPoint embed_at_height(const HPoint& p, double t);

/// Projection pi: drop the (n+1)-st horizontal pair.
HPoint project_point(const HPoint& lifted_point);
HVector project_vector(const HVector& lifted_vector);

LiftedCharge lift_charge(const DiscreteCharge& mu, const std::vector<DivergenceAtom>& divergence,
                         double l, double segment_dx = 0.01);

/// Divergence extraction against a smooth partition of unity on a grid.
std::vector<DivergenceAtom> extract_divergence_atoms(const DiscreteCharge& mu, double grid,
                                                     double drop_tol = 1e-9);

struct GeneralOptions {
    DecomposeOptions inner;
    double plane_contact_band = 1e-6;     // height threshold for alpha/beta
    double vertical_speed_threshold = 0.9;
    double segment_dx = 0.01;             // divergence column discretization
};

struct GeneralDiagnostics {
    double kept_weight = 0;
    double dropped_weight = 0;            // NoPlaneContact curves
    double mean_clipped_duration = 0;     // weighted mean of l - (beta - alpha)
    double vertical_fraction = 0;         // |v_{n+1}| >= threshold near div support, mid-slab
    double lifted_divergence_residual = 0;
    double lifted_var = 0;
    double inner_total_weight = 0;        // nu+(K_l) of the lifted run
    double inner_var_mollified = 0;       // var(mu+ * J) estimate of the lifted run
    size_t kept_curves = 0, dropped_curves = 0;
};

/// Theorem 5.5 pipeline: lift, decompose in H^{n+1}, classify, clip to the
/// plane-contact interval, project, re-derive z by the area rule.
CurveMeasure decompose_general(const DiscreteCharge& mu,
                               const std::vector<DivergenceAtom>& divergence,
                               const GeneralOptions& opt, GeneralDiagnostics* diag = nullptr);

/// Streaming variant; projected curves are delivered to the downstream sinks
/// with a running kept-curve index.
void decompose_general_streaming(const DiscreteCharge& mu,
                                 const std::vector<DivergenceAtom>& divergence,
                                 const GeneralOptions& opt, GeneralDiagnostics& diag,
                                 const std::vector<CurveSink*>& downstream);

}  // namespace heis
