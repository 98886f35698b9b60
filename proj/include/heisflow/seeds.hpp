#pragma once

#include <cstdint>

#include "heisflow/charge.hpp"
#include "heisflow/mollifier.hpp"

namespace heis {

struct SeedOptions {
    double spacing = 0.02;       // lattice spacing along the charge's affine hull
    int transverse_points = 2;   // Gauss points per transverse direction (1..3)
    double hull_tol = 1e-9;      // singular-value cutoff for the hull rank
    uint64_t jitter_seed = 0;    // 0 = off; deterministic per-atom lattice shift
};

struct SeedNode {
    HPoint p;
    double mass;
};

/// Quadrature of rho = (|mu| * J_eps)·h: one J-weighted stencil per atom, a
/// `spacing` lattice along the local affine hull of the atom cloud (pulled
/// through the differential of left translation) times a symmetric Gauss rule
/// transverse to it, normalized per atom so that the total mass is var(mu).
struct SeedQuadrature {
    std::vector<SeedNode> nodes;
    std::vector<int32_t> atom_of;  // originating atom per node
    double total_mass = 0;
    int hull_rank = 0;
};

SeedQuadrature build_seed_quadrature(const DiscreteCharge& mu, const Mollifier& J,
                                     const SeedOptions& opt);

}  // namespace heis
