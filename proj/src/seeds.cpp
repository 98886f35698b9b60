#include "heisflow/seeds.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "heisflow/group.hpp"

namespace heis {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Koranyi extent of the mollifier ball along a unit coordinate direction:
// largest sigma with ||sigma * dir|| <= eps.
double directional_extent(const Coords& dir, int n, double eps) {
    double h2 = 0;
    for (int i = 0; i < 2 * n; ++i) h2 += dir[static_cast<size_t>(i)] * dir[static_cast<size_t>(i)];
    const double zc = dir[static_cast<size_t>(2 * n)];
    const double e4 = eps * eps * eps * eps;
    if (h2 < 1e-300) return eps * eps / std::abs(zc);
    if (std::abs(zc) < 1e-300) return eps / std::sqrt(h2);
    // sigma^4 h2^2 + sigma^2 zc^2 = eps^4, quadratic in sigma^2
    const double a = h2 * h2, b = zc * zc;
    const double s2 = (-b + std::sqrt(b * b + 4.0 * a * e4)) / (2.0 * a);
    return std::sqrt(s2);
}

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};
GaussRule gauss_rule(int pts) {
    switch (pts) {
        case 1: return {{0.0}, {2.0}};
        case 2: {
            const double a = 1.0 / std::sqrt(3.0);
            return {{-a, a}, {1.0, 1.0}};
        }
        default: {
            const double a = std::sqrt(3.0 / 5.0);
            return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
        }
    }
}

}  // namespace

SeedQuadrature build_seed_quadrature(const DiscreteCharge& mu, const Mollifier& J,
                                     const SeedOptions& opt) {
    check_same_n(mu.n, J.n(), "build_seed_quadrature");
    SeedQuadrature out;
    if (mu.atoms.empty()) return out;

    const int n = mu.n;
    const int d = 2 * n + 1;
    const double eps = J.eps();

    // Affine hull of the atom positions from the coordinate covariance.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const auto& a : mu.atoms)
        for (int i = 0; i < d; ++i) mean(i) += a.p.c[static_cast<size_t>(i)];
    mean /= static_cast<double>(mu.atoms.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (const auto& a : mu.atoms) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v(i) = a.p.c[static_cast<size_t>(i)] - mean(i);
        cov += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    // Ascending eigenvalues; spread along direction i is sqrt(lambda_i / N).
    std::vector<Eigen::VectorXd> hull_dirs, trans_dirs;
    const double scale = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0) /
                                   static_cast<double>(mu.atoms.size()));
    for (int i = d - 1; i >= 0; --i) {
        const double spread = std::sqrt(std::max(es.eigenvalues()(i), 0.0) /
                                        static_cast<double>(mu.atoms.size()));
        Eigen::VectorXd dir = es.eigenvectors().col(i);
        int top = 0;
        for (int j = 1; j < d; ++j)
            if (std::abs(dir(j)) > std::abs(dir(top))) top = j;
        if (dir(top) < 0) dir = -dir;  // deterministic sign
        if (spread > opt.hull_tol * std::max(scale, 1.0) && spread > 1e-12)
            hull_dirs.push_back(dir);
        else
            trans_dirs.push_back(dir);
    }
    const int rank = static_cast<int>(hull_dirs.size());
    out.hull_rank = rank;

    std::vector<Coords> local_dirs;  // hull dirs then transverse dirs, in u-space
    std::vector<double> extents;
    std::vector<bool> is_hull;

    Coords u(static_cast<size_t>(d), 0.0);
    std::vector<double> node_w;
    std::vector<Coords> node_u;

    for (size_t ai = 0; ai < mu.atoms.size(); ++ai) {
        const ChargeAtom& atom = mu.atoms[ai];
        const HPoint inv_a = group_inv(atom.p);

        // Pull the global directions to the atom's u-coordinates and
        // re-orthonormalize (the left-translation shear is unimodular but not
        // orthogonal), hull directions first.
        local_dirs.clear();
        extents.clear();
        is_hull.clear();
        auto push_dir = [&](const Eigen::VectorXd& g, bool hull) {
            Coords v(static_cast<size_t>(d), 0.0);
            for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = g(i);
            Coords lv = dleft_translate(inv_a, v);
            // Gram-Schmidt against previous local dirs.
            for (const Coords& prev : local_dirs) {
                double dp = 0;
                for (int i = 0; i < d; ++i) dp += lv[static_cast<size_t>(i)] * prev[static_cast<size_t>(i)];
                for (int i = 0; i < d; ++i) lv[static_cast<size_t>(i)] -= dp * prev[static_cast<size_t>(i)];
            }
            double nm = 0;
            for (int i = 0; i < d; ++i) nm += lv[static_cast<size_t>(i)] * lv[static_cast<size_t>(i)];
            nm = std::sqrt(nm);
            if (nm < 1e-12) return;  // degenerate after projection
            for (int i = 0; i < d; ++i) lv[static_cast<size_t>(i)] /= nm;
            local_dirs.push_back(lv);
            extents.push_back(directional_extent(lv, n, eps));
            is_hull.push_back(hull);
        };
        for (const auto& g : hull_dirs) push_dir(g, true);
        for (const auto& g : trans_dirs) push_dir(g, false);

        // Per-direction node ladders: lattice along the hull, Gauss transverse.
        std::vector<std::vector<std::pair<double, double>>> ladders;  // (offset, weight)
        Coords shift(static_cast<size_t>(rank), 0.0);
        if (opt.jitter_seed != 0) {
            for (int r = 0; r < rank; ++r) {
                const uint64_t h =
                    splitmix64(opt.jitter_seed ^ (0x51ed2701ULL * (ai + 1) + 0x9e37ULL * (r + 1)));
                shift[static_cast<size_t>(r)] =
                    (static_cast<double>(h >> 11) / 9007199254740992.0 - 0.5) * opt.spacing;
            }
        }
        int hull_seen = 0;
        for (size_t di = 0; di < local_dirs.size(); ++di) {
            std::vector<std::pair<double, double>> lad;
            if (is_hull[di]) {
                const double off = shift[static_cast<size_t>(hull_seen++)];
                const int M = static_cast<int>(std::ceil(extents[di] / opt.spacing)) + 1;
                for (int m = -M; m <= M; ++m) {
                    const double t = m * opt.spacing + off;
                    if (std::abs(t) < extents[di]) lad.emplace_back(t, 1.0);
                }
            } else {
                // Below-resolution transverse extent collapses to the center.
                const int pts =
                    extents[di] < 0.75 * opt.spacing ? 1 : std::clamp(opt.transverse_points, 1, 3);
                const GaussRule g = gauss_rule(pts);
                for (size_t q = 0; q < g.x.size(); ++q)
                    lad.emplace_back(g.x[q] * extents[di], g.w[q]);
            }
            if (lad.empty()) lad.emplace_back(0.0, 1.0);
            ladders.push_back(std::move(lad));
        }

        // Tensor product, J-weighted, normalized per atom.
        node_w.clear();
        node_u.clear();
        std::vector<size_t> idx(ladders.size(), 0);
        while (true) {
            double w = 1.0;
            std::fill(u.begin(), u.end(), 0.0);
            for (size_t di = 0; di < ladders.size(); ++di) {
                const auto& [off, lw] = ladders[di][idx[di]];
                w *= lw;
                for (int i = 0; i < d; ++i) u[static_cast<size_t>(i)] += off * local_dirs[di][static_cast<size_t>(i)];
            }
            const double jv = J.value(HPoint(n, u));
            if (jv > 0.0) {
                node_w.push_back(w * jv);
                node_u.push_back(u);
            }
            size_t carry = 0;
            while (carry < ladders.size() && ++idx[carry] == ladders[carry].size()) {
                idx[carry] = 0;
                ++carry;
            }
            if (carry == ladders.size()) break;
        }
        double wsum = 0;
        for (double w : node_w) wsum += w;
        if (wsum <= 0) {  // should not happen: center node is always inside
            node_w.assign(1, 1.0);
            node_u.assign(1, Coords(static_cast<size_t>(d), 0.0));
            wsum = 1.0;
        }
        const double atom_mass = atom.v.norm();
        for (size_t k = 0; k < node_w.size(); ++k) {
            SeedNode node;
            node.p = group_mul(atom.p, HPoint(n, node_u[k]));
            node.mass = atom_mass * node_w[k] / wsum;
            out.nodes.push_back(std::move(node));
            out.atom_of.push_back(static_cast<int32_t>(ai));
        }
    }
    for (const auto& nd : out.nodes) out.total_mass += nd.mass;
    return out;
}

}  // namespace heis
