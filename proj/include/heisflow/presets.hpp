#pragma once

#include "heisflow/charge.hpp"
#include "heisflow/fields.hpp"
#include "heisflow/lift.hpp"

namespace heis {

/// Rotational charge on the annulus r_min <= r <= 2, carried by the Lagrangian
/// (x1, x2)-plane of H^2 (rotations there sweep no symplectic area, so the
/// charge is exactly weakly solenoidal and circles lift closed).  Atoms on a
/// polar grid, vectors (-x2, x1)/r times the cell mass.
DiscreteCharge annulus_charge(int rings = 2, int per_ring = 200, double r_min = 1.0,
                              double r_max = 2.0);

/// Straight unit segment charge from a to b on the x-axis of H^1, midpoint
/// discretized; div_H = delta_a - delta_b.
DiscreteCharge dipole_charge(int atoms = 200, double ax = -0.5, double bx = 0.5);
std::vector<DivergenceAtom> dipole_divergence(double ax = -0.5, double bx = 0.5);

/// Single-atom source (negative control for solenoidality and Liouville).
DiscreteCharge source_charge(int n = 2);

/// Field presets for the CLI and the flow fixtures.
HVectorField rotational_field(int n = 1);                  // (-y1, x1), vertical lift drift
HVectorField lagrangian_rotational_field();                // n = 2, (-x2, x1), closed circles
HVectorField constant_field(int n, const Coords& coeffs);  // 2n frame coefficients

}  // namespace heis
