#pragma once

#include "heisflow/types.hpp"

namespace heis {

struct CcBracket {
    double lower = 0;
    double upper = 0;
    bool converged = true;
};

struct CcBudget {
    double param_tol = 1e-8;    // golden-section tolerance on the sweep angle
    int bisect_iters = 200;
    int table_size = 1 << 14;   // shape-to-ratio table resolution
};

/// Constants of c·d_CC <= ||p^{-1}q|| <= C·d_CC, computed once on the arc family.
struct BilipschitzConstants {
    double min_ratio;  // inf ||d|| / d_CC(e,d); attained on vertical points
    double max_ratio;  // sup ||d|| / d_CC(e,d); attained on straight segments
};
const BilipschitzConstants& certified_bilipschitz_constants();

/// Certified bracket lower <= d_CC(p,q) <= upper.  Exact arc-family search for
/// n = 1; a norm-based bracket with the global constants otherwise.
CcBracket cc_distance_estimate(const HPoint& p, const HPoint& q, const CcBudget& budget = {});

/// Length of the connecting constant-curvature lift to a target with
/// horizontal displacement rho and group-vertical gap zeta; a d_CC upper bound
/// valid in every H^n (the arc lives in an H^1 subgroup).
double arc_connect_upper(double rho, double zeta);

}  // namespace heis
