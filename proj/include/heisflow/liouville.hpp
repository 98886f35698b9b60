#pragma once

#include "heisflow/charge.hpp"
#include "heisflow/fields.hpp"
#include "heisflow/mollifier.hpp"
#include "heisflow/seeds.hpp"

namespace heis {

struct LiouvilleOptions {
    double grid = 0.02;
    int transverse_points = 2;
    double dt = 0.01;
    double division_threshold = 1e-12;
    int threads = 1;
};

struct LiouvilleReport {
    double max_residual = 0;
    std::vector<double> per_time;  // max over tests at each requested time
};

/// Discretizes rho = (|mu|*J)·h, pushes the nodes through the flow of the
/// mollified direction field, and reports max_t max_f |∫f drho_t - ∫f drho|
/// normalized by ∫|f| drho.
LiouvilleReport liouville_residual(const DiscreteCharge& mu, const Mollifier& J,
                                   const std::vector<double>& t_grid,
                                   const std::vector<ScalarField>& tests,
                                   const LiouvilleOptions& opt = {});

}  // namespace heis
