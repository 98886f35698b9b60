#pragma once

#include <memory>

#include "heisflow/charge.hpp"
#include "heisflow/fields.hpp"
#include "heisflow/types.hpp"

namespace heis {

/// Group mollifier J_eps(u) = eps^{-Q} J(delta_{1/eps} u) with Q = 2n+2, where
/// J is the bump exp(-1/(1-s^2)) in s = ||u||^2, normalized to unit Haar mass.
class Mollifier {
public:
    Mollifier(int n, double eps);

    int n() const { return n_; }
    double eps() const { return eps_; }
    int homogeneous_dim() const { return 2 * n_ + 2; }

    Mollifier rescale(double new_eps) const { return Mollifier(n_, new_eps); }

    double value(const HPoint& u) const;

    /// Fast path on a precomputed group difference (dx of length 2n, zeta).
    double value_diff(const double* dx, double zeta) const;

    /// Normalization of the unit-scale profile (independent oracle: reduced
    /// radial-z quadrature); 1/integral of the raw bump.
    static double unit_norm_constant(int n);

private:
    int n_;
    double eps_;
    double inv_eps4_;
    double scale_;  // unit_norm_constant / eps^Q
};

/// Sum_i J_eps(x_i^{-1} p) v_i and the matching scalar density Sum_i J |v_i|.
struct MollifiedValue {
    HVector vector;
    double density = 0;
};

MollifiedValue mollify_charge(const DiscreteCharge& mu, const AtomIndex& index,
                              const Mollifier& J, const HPoint& p);

/// The normalized direction field phi = (mu*J)/(|mu|*J), zero where the
/// density falls below threshold_factor * var(mu).
class MollifiedFlowField {
public:
    MollifiedFlowField(std::shared_ptr<const DiscreteCharge> mu, const Mollifier& J,
                       double threshold_factor = 1e-12);

    int n() const { return mu_->n; }
    /// Direction phi (unit or zero) at p.
    HVector direction(const HPoint& p) const;
    /// Raw mollified vector and density.
    MollifiedValue value(const HPoint& p) const;
    const AtomIndex& index() const { return *index_; }
    const Mollifier& mollifier() const { return J_; }

    HVectorField as_field() const;          // the direction field, |phi| <= 1
    HVectorField as_unnormalized_field() const;  // mu*J itself

private:
    std::shared_ptr<const DiscreteCharge> mu_;
    Mollifier J_;
    std::shared_ptr<AtomIndex> index_;
    double threshold_;
};

}  // namespace heis
