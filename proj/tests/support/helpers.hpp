#pragma once

// Test-side generators and brute-force oracles. Nothing here calls the
// library routine it is used to check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "troppca/newick.hpp"
#include "troppca/random.hpp"
#include "troppca/tree_sim.hpp"
#include "troppca/tropical.hpp"
#include "troppca/ultrametric.hpp"

namespace testing_support {

using troppca::Rng;
using troppca::TropicalPoint;
using troppca::Ultrametric;

inline TropicalPoint random_point(Rng& rng, std::size_t e, double lo = -5.0, double hi = 5.0) {
    std::vector<double> c(e);
    for (double& x : c) x = rng.uniform(lo, hi);
    return TropicalPoint(std::move(c));
}

// Random equidistant tree of random height, as an ultrametric.
inline Ultrametric random_ultrametric(Rng& rng, int m) {
    const auto tree = troppca::random_coalescent_tree(m, rng);
    const double scale = rng.uniform(0.5, 3.0);
    const auto u = troppca::cophenetic(tree);
    std::vector<double> c(u.point().coords().begin(), u.point().coords().end());
    for (double& x : c) x *= scale;
    return Ultrametric::trusted(TropicalPoint(std::move(c)), m);
}

// Ultrametric with some merge heights tied, so multifurcations occur.
inline Ultrametric random_coarse_ultrametric(Rng& rng, int m) {
    const auto u = random_ultrametric(rng, m);
    std::vector<double> c(u.point().coords().begin(), u.point().coords().end());
    for (double& x : c) x = std::ceil(x * 2.0) / 2.0;
    return Ultrametric::trusted(TropicalPoint(std::move(c)), m);
}

// max_k (a_k + D^(k)), coordinatewise.
inline TropicalPoint combination(const std::vector<TropicalPoint>& verts, const std::vector<double>& a) {
    std::vector<double> c(verts.front().dim(), -INFINITY);
    for (std::size_t k = 0; k < verts.size(); ++k) {
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = std::max(c[j], a[k] + verts[k][j]);
    }
    return TropicalPoint(std::move(c));
}

// Distance straight from the pairwise definition.
inline double pairwise_dist(const TropicalPoint& v, const TropicalPoint& w) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        for (std::size_t j = i + 1; j < v.dim(); ++j) {
            best = std::max(best, std::abs(v[i] - w[i] - v[j] + w[j]));
        }
    }
    return best;
}

// Leaf pair (i, j), 1-based, to the lexicographic flat index, by counting.
inline std::size_t flat(int m, int i, int j) {
    std::size_t k = 0;
    for (int a = 1; a <= m; ++a) {
        for (int b = a + 1; b <= m; ++b) {
            if (a == i && b == j) return k;
            ++k;
        }
    }
    return k;
}

inline bool three_point(const TropicalPoint& p, int m, double tol = 1e-9) {
    for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
            for (int k = j + 1; k <= m; ++k) {
                double v[3] = {p[flat(m, i, j)], p[flat(m, i, k)], p[flat(m, j, k)]};
                std::sort(v, v + 3);
                if (v[2] - v[1] > tol) return false;
            }
        }
    }
    return true;
}

// Clades of an ultrametric from the definition: for every leaf i and
// threshold t taken from the distance values, {j : d(i,j) <= t} plus i.
inline std::vector<std::vector<int>> clades_by_balls(const TropicalPoint& p, int m, double tol = 1e-9) {
    std::vector<std::vector<int>> out;
    for (int i = 1; i <= m; ++i) {
        out.push_back({i});
        for (std::size_t q = 0; q < p.dim(); ++q) {
            const double t = p[q];
            std::vector<int> ball;
            for (int j = 1; j <= m; ++j) {
                if (j == i || p[flat(m, std::min(i, j), std::max(i, j))] <= t + tol) ball.push_back(j);
            }
            out.push_back(ball);
        }
    }
    std::vector<int> all;
    for (int i = 1; i <= m; ++i) all.push_back(i);
    out.push_back(all);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Smallest tropical distance from d to points max_k(a_k + V_k) of a
// three-vertex polytope, a_1 = 0 and (a_2, a_3) on a grid of the given step
// over a box wide enough to reach every point of the hull.
inline double grid_nearest(const std::vector<TropicalPoint>& v, const TropicalPoint& d, double step) {
    double spread = 0.0;
    for (const auto& a : v) {
        for (const auto& b : v) spread = std::max(spread, pairwise_dist(a, b) + std::abs(a[0] - b[0]));
    }
    const double lo = -spread - step, hi = 2 * spread + step;
    const auto steps = static_cast<long>(std::ceil((hi - lo) / step));
    double best = INFINITY;
    for (long i = 0; i <= steps; ++i) {
        const double a2 = lo + step * static_cast<double>(i);
        for (long j = 0; j <= steps; ++j) {
            const double a3 = lo + step * static_cast<double>(j);
            double mx = -INFINITY, mn = INFINITY;
            for (std::size_t c = 0; c < d.dim(); ++c) {
                const double p = std::max({v[0][c], a2 + v[1][c], a3 + v[2][c]});
                mx = std::max(mx, p - d[c]);
                mn = std::min(mn, p - d[c]);
            }
            best = std::min(best, mx - mn);
        }
    }
    return best;
}

}  // namespace testing_support
