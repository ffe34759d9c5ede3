#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "troppca/tropical.hpp"

namespace troppca {

/// Bijection between leaf pairs (i, j), 1 <= i < j <= m, and flat indices
/// 0..e-1 in lexicographic order, e = m(m-1)/2.
class LeafPairIndex {
public:
    explicit LeafPairIndex(int leaves);

    int leaves() const noexcept { return m_; }
    std::size_t dim() const noexcept { return pairs_.size(); }

    std::size_t pair_to_flat(int i, int j) const;
    std::pair<int, int> flat_to_pair(std::size_t k) const;

    /// Leaf count for a vector of dimension e; throws when e is not C(m, 2).
    static int leaves_for_dim(std::size_t dim);

private:
    int m_;
    std::vector<std::pair<int, int>> pairs_;
};

using Triple = std::array<int, 3>;

struct UltrametricCheck {
    bool ok = true;
    std::vector<Triple> violations;  // 1-based leaf triples i < j < k

    explicit operator bool() const noexcept { return ok; }
};

/// Three-point condition: in every triple the maximum of d_ij, d_ik, d_jk is
/// attained at least twice (within tol).
UltrametricCheck is_ultrametric(const TropicalPoint& point, int leaves, double tol = kTolerance);

/// A tropical point indexed by leaf pairs that satisfies the three-point
/// condition. Construction validates.
class Ultrametric {
public:
    Ultrametric(TropicalPoint point, int leaves);

    /// Skips validation. For points that are ultrametric by construction.
    static Ultrametric trusted(TropicalPoint point, int leaves);

    const TropicalPoint& point() const noexcept { return point_; }
    int leaves() const noexcept { return m_; }
    std::size_t dim() const noexcept { return point_.dim(); }

    /// d(i, j) for 1-based leaves, i != j.
    double distance(int i, int j) const;

private:
    Ultrametric(TropicalPoint point, int leaves, bool);

    TropicalPoint point_;
    int m_;
};

/// Canonical rooted hierarchy: sorted clades (sorted 1-based leaf lists),
/// always including all singletons and the full leaf set.
struct TreeTopology {
    int leaves = 0;
    std::vector<std::vector<int>> clades;

    friend bool operator==(const TreeTopology&, const TreeTopology&) = default;
    friend auto operator<=>(const TreeTopology&, const TreeTopology&) = default;
};

/// Clade family from single-linkage merging in increasing distance order.
/// Distances within tol of each other merge at the same level, producing
/// multifurcations. Throws InvalidInput if the point fails the ultrametric
/// check.
TreeTopology topology_of(const TropicalPoint& point, int leaves, double tol = kTolerance);
TreeTopology topology_of(const Ultrametric& u, double tol = kTolerance);

/// Builds a topology from arbitrary clades; adds singletons and the root,
/// removes duplicates and sorts. Throws InvalidInput if the family is not
/// laminar or mentions leaves outside 1..m.
TreeTopology make_topology(int leaves, std::vector<std::vector<int>> clades);

/// Throws InvalidInput if the leaf sets differ.
bool topologies_equal(const TreeTopology& a, const TreeTopology& b);

/// Newick shape without branch lengths, e.g. "((1,2),3);". Leaves use
/// `labels[i-1]` when provided.
std::string topology_newick(const TreeTopology& t, const std::vector<std::string>& labels = {});

/// CSV exchange: header `m,1-2,1-3,...`, then one `m,d12,d13,...` row per
/// vector.
void write_ultrametric_csv(std::ostream& out, const std::vector<Ultrametric>& rows);
std::vector<Ultrametric> read_ultrametric_csv(std::istream& in);

}  // namespace troppca
