#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "heisflow/types.hpp"

namespace heis {

struct ChargeAtom {
    HPoint p;
    HVector v;
};

/// Finitely many atoms (point, horizontal vector) representing mu = alpha·q.
struct DiscreteCharge {
    int n = 1;
    std::vector<ChargeAtom> atoms;

    /// Drops zero-vector atoms; validates dimensions.
    static DiscreteCharge make(int n, std::vector<ChargeAtom> atoms);

    double var() const;          // sum |v_i|
    Box bounding_box() const;    // over all 2n+1 coordinates
    bool empty() const { return atoms.empty(); }
};

/// 2-D cell hash over the two widest horizontal coordinates; query returns the
/// atoms whose horizontal distance to p can be below the cell size.
class AtomIndex {
public:
    AtomIndex(const DiscreteCharge& charge, double cell);

    void query(const HPoint& p, std::vector<int32_t>& out) const;
    double cell_size() const { return cell_; }

private:
    int64_t key(int64_t ia, int64_t ib) const;
    int dim_a_ = 0, dim_b_ = 1;
    double cell_ = 1.0;
    std::unordered_map<int64_t, std::vector<int32_t>> cells_;
};

}  // namespace heis
