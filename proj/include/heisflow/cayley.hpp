#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "heisflow/types.hpp"

namespace heis {

/// (z, t) in C^n x R, the model carrying the group law with the 2·Im twist.
struct ComplexPoint {
    int n = 1;
    std::vector<std::complex<double>> zc;
    double t = 0;
};

/// Point of the unit sphere in C^{n+1}; |w|^2 + |w0|^2 = 1.
struct SpherePoint {
    int n = 1;
    std::vector<std::complex<double>> w;
    std::complex<double> w0;

    double sphere_defect() const;  // | |w|^2 + |w0|^2 - 1 |
};

/// Scalar c of the convention isomorphism (x,y,z) -> (x+iy, c z), determined by
/// a homomorphism probe and verified; expected -4.
double complex_model_scale();

ComplexPoint to_complex_model(const HPoint& p);
HPoint from_complex_model(const ComplexPoint& p);

/// Product in the complex model: (z,t)(z',t') = (z+z', t+t'+2 Im(z·conj(z'))).
ComplexPoint complex_mul(const ComplexPoint& a, const ComplexPoint& b);

SpherePoint cayley_forward(const ComplexPoint& p);
SpherePoint cayley_forward_infinity(int n);  // F(inf) = (0, -1)

/// Inverse Cayley map; nullopt encodes the point at infinity (pole (0,-1)).
std::optional<ComplexPoint> cayley_inverse(const SpherePoint& s);

SpherePoint cayley_of_point(const HPoint& p);

/// Euclidean (chordal) distance between sphere points in C^{n+1} = R^{2n+2}.
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

}  // namespace heis
