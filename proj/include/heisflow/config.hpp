#pragma once

#include "heisflow/decompose.hpp"
#include "heisflow/lift.hpp"

namespace heis {

struct Thresholds {
    double solenoidal_tol = 1e-6;
    double division = 1e-12;
    double vertical_speed = 0.9;
    double plane_contact_band = 1e-6;
    double pairing_rel = 2e-2;
    double variation_rel = 1e-3;
    double support_fraction = 1e-3;
    double mass_rel = 1e-3;
    double contact = 1e-10;
};

struct RunConfig {
    int n = 0;  // 0: take from the charge file
    double l = 1.0;
    double eps = 0.1;
    std::vector<double> eps_schedule;  // optional; overrides eps when non-empty
    double grid = 0.02;
    double dt = 0.01;
    int transverse_points = 2;
    int threads = 1;
    uint64_t jitter_seed = 0;
    double segment_dx = 0.01;
    double div_extraction_grid = 0.25;  // partition-of-unity cell for extraction
    double t_max = 0;  // flow horizon; 0 means l
    Thresholds th;

    DecomposeOptions decompose_options() const {
        DecomposeOptions o;
        o.horizon = l;
        o.eps = eps;
        o.grid = grid;
        o.dt = dt;
        o.transverse_points = transverse_points;
        o.solenoidal_tol = th.solenoidal_tol;
        o.division_threshold = th.division;
        o.threads = threads;
        o.jitter_seed = jitter_seed;
        return o;
    }
    GeneralOptions general_options() const {
        GeneralOptions g;
        g.inner = decompose_options();
        g.plane_contact_band = th.plane_contact_band;
        g.vertical_speed_threshold = th.vertical_speed;
        g.segment_dx = segment_dx;
        return g;
    }
    VerifyTolerances verify_tolerances() const {
        VerifyTolerances v;
        v.pairing_rel = th.pairing_rel;
        v.variation_rel = th.variation_rel;
        v.support_fraction = th.support_fraction;
        v.mass_rel = th.mass_rel;
        v.contact_tol = th.contact;
        return v;
    }
};

}  // namespace heis
