#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "heisflow/calculus.hpp"
#include "heisflow/cayley.hpp"
#include "heisflow/cc_distance.hpp"
#include "heisflow/group.hpp"
#include "heisflow/liouville.hpp"
#include "heisflow/presets.hpp"
#include "heisflow/serialization.hpp"

namespace py = pybind11;
using namespace heis;

namespace {

HPoint point_from(int n, const std::vector<double>& c) {
    return HPoint(n, Coords(c.begin(), c.end()));
}
std::vector<double> point_to(const HPoint& p) { return {p.c.begin(), p.c.end()}; }

DiscreteCharge charge_from(int n, const std::vector<std::pair<std::vector<double>, std::vector<double>>>& atoms) {
    std::vector<ChargeAtom> a;
    for (const auto& [p, v] : atoms)
        a.push_back({HPoint(n, Coords(p.begin(), p.end())), HVector(n, Coords(v.begin(), v.end()))});
    return DiscreteCharge::make(n, std::move(a));
}

py::dict report_to_dict(const VerifyReport& r) {
    py::dict d;
    d["pairing_max_rel"] = r.pairing_max_rel;
    d["variation_rel_err"] = r.variation_rel_err;
    d["support_outlier_sample_fraction"] = r.support_outlier_sample_fraction;
    d["mass_identity_rel_err"] = r.mass_identity_rel_err;
    d["length_mean"] = r.length_mean;
    d["length_min"] = r.length_min;
    d["length_max"] = r.length_max;
    d["total_weight"] = r.total_weight;
    d["curve_count"] = r.curve_count;
    d["max_contact_defect"] = r.max_contact_defect;
    d["max_speed"] = r.max_speed;
    d["slow_sample_fraction"] = r.slow_sample_fraction;
    d["var_estimate"] = r.var_estimate;
    d["all_pass"] = r.all_pass();
    return d;
}

py::list curve_to_list(const HorizontalCurve& c) {
    py::list samples;
    for (const auto& p : c.samples) samples.append(point_to(p));
    return samples;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Smirnov decomposition of horizontal vector charges on the Heisenberg group";

    m.def("group_mul", [](int n, const std::vector<double>& p, const std::vector<double>& q) {
        return point_to(group_mul(point_from(n, p), point_from(n, q)));
    });
    m.def("group_inv", [](int n, const std::vector<double>& p) {
        return point_to(group_inv(point_from(n, p)));
    });
    m.def("dilate", [](int n, double lam, const std::vector<double>& p) {
        return point_to(dilate(lam, point_from(n, p)));
    });
    m.def("homogeneous_norm", [](int n, const std::vector<double>& p) {
        return homogeneous_norm(point_from(n, p));
    });
    m.def("contact_form", [](int n, const std::vector<double>& p, const std::vector<double>& tangent) {
        return contact_form(point_from(n, p), Coords(tangent.begin(), tangent.end()));
    });
    m.def("cc_distance_bracket", [](int n, const std::vector<double>& p, const std::vector<double>& q) {
        const CcBracket b = cc_distance_estimate(point_from(n, p), point_from(n, q));
        return py::make_tuple(b.lower, b.upper, b.converged);
    });
    m.def("cayley_forward", [](int n, const std::vector<double>& p) {
        const SpherePoint s = cayley_of_point(point_from(n, p));
        return py::make_tuple(s.w, s.w0);
    });
    m.def("cayley_sphere_defect", [](int n, const std::vector<double>& p) {
        return cayley_of_point(point_from(n, p)).sphere_defect();
    });
    m.def("cayley_inverse", [](int n, std::vector<std::complex<double>> w, std::complex<double> w0)
              -> py::object {
        SpherePoint s;
        s.n = n;
        s.w = std::move(w);
        s.w0 = w0;
        const auto z = cayley_inverse(s);
        if (!z) return py::none();
        return py::cast(point_to(from_complex_model(*z)));
    });

    m.def("annulus_charge", [](int rings, int per_ring) {
        const DiscreteCharge c = annulus_charge(rings, per_ring);
        std::vector<std::pair<std::vector<double>, std::vector<double>>> atoms;
        for (const auto& a : c.atoms)
            atoms.emplace_back(std::vector<double>(a.p.c.begin(), a.p.c.end()),
                               std::vector<double>(a.v.c.begin(), a.v.c.end()));
        return atoms;
    }, py::arg("rings") = 2, py::arg("per_ring") = 200);

    m.def("weak_divergence_residual", [](int n,
                                         const std::vector<std::pair<std::vector<double>, std::vector<double>>>& atoms) {
        const DiscreteCharge mu = charge_from(n, atoms);
        const auto dict = divergence_dictionary(n, mu.bounding_box().padded(0.5));
        double worst = 0;
        for (const auto& f : dict) worst = std::max(worst, std::abs(weak_divergence(mu, f)));
        return worst;
    });

    m.def("decompose_solenoidal",
          [](int n, const std::vector<std::pair<std::vector<double>, std::vector<double>>>& atoms,
             double l, double eps, double grid, double dt, int transverse, bool return_curves) {
              const DiscreteCharge mu = charge_from(n, atoms);
              DecomposeOptions opt;
              opt.horizon = l;
              opt.eps = eps;
              opt.grid = grid;
              opt.dt = dt;
              opt.transverse_points = transverse;
              const CurveMeasure nu = decompose_solenoidal(mu, opt);
              const auto dict = reconstruction_dictionary(n, mu.bounding_box().padded(eps + 0.5));
              const VerifyReport rep =
                  verify_decomposition(mu, eps, nu, dict, VerifyTolerances{}, 0.5 * grid);
              py::dict d = report_to_dict(rep);
              d["nu_total"] = nu.total();
              if (return_curves) {
                  py::list curves, weights;
                  for (const auto& e : nu.entries) {
                      curves.append(curve_to_list(e.curve));
                      weights.append(e.weight);
                  }
                  d["curves"] = curves;
                  d["weights"] = weights;
              }
              return d;
          },
          py::arg("n"), py::arg("atoms"), py::arg("l") = 1.0, py::arg("eps") = 0.1,
          py::arg("grid") = 0.05, py::arg("dt") = 0.02, py::arg("transverse") = 1,
          py::arg("return_curves") = false);

    m.def("flow_endpoint", [](const std::string& preset, int n, const std::vector<double>& seed,
                              double t_max, double dt) {
        HVectorField f;
        if (preset == "rotational") f = rotational_field(n);
        else if (preset == "lagrangian_rotational") f = lagrangian_rotational_field();
        else throw std::invalid_argument("unknown preset: " + preset);
        FlowConfig fc;
        fc.dt = dt;
        fc.t_max = t_max;
        const HorizontalCurve c = integrate(point_from(f.n, seed), f, fc);
        return point_to(c.back());
    });

    m.def("charge_to_json", [](int n, const std::vector<std::pair<std::vector<double>, std::vector<double>>>& atoms) {
        std::ostringstream os;
        io::write_charge_json(os, charge_from(n, atoms));
        return os.str();
    });

    m.attr("__version__") = "0.1.0";
}
