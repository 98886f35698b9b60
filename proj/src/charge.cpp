#include "heisflow/charge.hpp"

#include <cmath>

namespace heis {

DiscreteCharge DiscreteCharge::make(int n, std::vector<ChargeAtom> atoms) {
    DiscreteCharge c;
    c.n = n;
    c.atoms.reserve(atoms.size());
    for (auto& a : atoms) {
        check_same_n(a.p.n, n, "DiscreteCharge");
        check_same_n(a.v.n, n, "DiscreteCharge");
        if (!a.p.finite()) throw std::invalid_argument("DiscreteCharge: non-finite atom point");
        if (a.v.norm2() == 0.0) continue;
        c.atoms.push_back(std::move(a));
    }
    return c;
}

double DiscreteCharge::var() const {
    double s = 0;
    for (const auto& a : atoms) s += a.v.norm();
    return s;
}

Box DiscreteCharge::bounding_box() const {
    Box b = Box::of_dim(static_cast<size_t>(2 * n + 1));
    if (atoms.empty()) return b;
    b.lo = atoms.front().p.c;
    b.hi = atoms.front().p.c;
    for (const auto& a : atoms) b.expand(a.p.c);
    return b;
}

AtomIndex::AtomIndex(const DiscreteCharge& charge, double cell) : cell_(cell) {
    // Hash over the two horizontal coordinates with the widest spread.
    const Box b = charge.bounding_box();
    double best1 = -1, best2 = -1;
    for (int i = 0; i < 2 * charge.n; ++i) {
        const double w = b.hi[static_cast<size_t>(i)] - b.lo[static_cast<size_t>(i)];
        if (w > best1) {
            best2 = best1; dim_b_ = dim_a_; best1 = w; dim_a_ = i;
        } else if (w > best2) {
            best2 = w; dim_b_ = i;
        }
    }
    if (dim_a_ == dim_b_) dim_b_ = (dim_a_ + 1) % std::max(2 * charge.n, 2);
    for (size_t i = 0; i < charge.atoms.size(); ++i) {
        const HPoint& p = charge.atoms[i].p;
        const int64_t ia = static_cast<int64_t>(std::floor(p.c[static_cast<size_t>(dim_a_)] / cell_));
        const int64_t ib = static_cast<int64_t>(std::floor(p.c[static_cast<size_t>(dim_b_)] / cell_));
        cells_[key(ia, ib)].push_back(static_cast<int32_t>(i));
    }
}

int64_t AtomIndex::key(int64_t ia, int64_t ib) const {
    return ia * 73856093LL + ib * 19349663LL;
}

void AtomIndex::query(const HPoint& p, std::vector<int32_t>& out) const {
    out.clear();
    const int64_t ia = static_cast<int64_t>(std::floor(p.c[static_cast<size_t>(dim_a_)] / cell_));
    const int64_t ib = static_cast<int64_t>(std::floor(p.c[static_cast<size_t>(dim_b_)] / cell_));
    for (int da = -1; da <= 1; ++da) {
        for (int db = -1; db <= 1; ++db) {
            const auto it = cells_.find(key(ia + da, ib + db));
            if (it == cells_.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
}

}  // namespace heis
