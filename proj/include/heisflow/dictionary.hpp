#pragma once

#include <vector>

#include "heisflow/fields.hpp"

namespace heis {

/// Fixed reconstruction dictionary ("fields v1"): 10 compactly supported
/// smooth horizontal fields over the box — bumps times frame directions plus
/// one rotational field.  Deterministic in (n, box); pairings in reports are
/// only comparable at equal dictionary version.
std::vector<HVectorField> reconstruction_dictionary(int n, const Box& box);

/// Fixed scalar dictionary ("scalars v1") for divergence checks and Liouville
/// tests: a plateau that is identically 1 over the box times
/// {1, coordinates, x1^2, y1^2, x1*y1}.
std::vector<ScalarField> divergence_dictionary(int n, const Box& box);

}  // namespace heis
