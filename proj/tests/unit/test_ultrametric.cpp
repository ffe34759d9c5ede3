#include <gtest/gtest.h>

#include <sstream>

#include "../support/helpers.hpp"
#include "troppca/error.hpp"
#include "troppca/polytope.hpp"
#include "troppca/ultrametric.hpp"

namespace {

using namespace troppca;
using namespace testing_support;

TEST(LeafPairIndex, Bijective) {
    for (int m = 2; m <= 12; ++m) {
        const LeafPairIndex idx(m);
        ASSERT_EQ(idx.dim(), static_cast<std::size_t>(m * (m - 1) / 2));
        for (std::size_t k = 0; k < idx.dim(); ++k) {
            const auto [i, j] = idx.flat_to_pair(k);
            EXPECT_EQ(idx.pair_to_flat(i, j), k);
            EXPECT_EQ(flat(m, i, j), k);
        }
        EXPECT_EQ(LeafPairIndex::leaves_for_dim(idx.dim()), m);
    }
    EXPECT_THROW(LeafPairIndex::leaves_for_dim(4), InvalidInput);
}

TEST(IsUltrametric, Examples) {
    EXPECT_TRUE(is_ultrametric(TropicalPoint{1, 2, 2}, 3));
    const auto bad = is_ultrametric(TropicalPoint{1, 2, 3}, 3);
    EXPECT_FALSE(bad);
    ASSERT_EQ(bad.violations.size(), 1u);
    EXPECT_EQ(bad.violations[0], (Triple{1, 2, 3}));
    EXPECT_THROW(is_ultrametric(TropicalPoint{1, 2, 2, 2}, 3), InvalidInput);
}

TEST(IsUltrametric, CopheneticOfTreeAtFourLeaves) {
    const auto tree = parse_newick("((1:1,2:1):2,(3:2.5,4:2.5):0.5);");
    const auto u = cophenetic(tree);
    // Path sums by hand: d12 = 2, d34 = 5, all others 6.
    EXPECT_EQ(u.point(), (TropicalPoint{2, 6, 6, 6, 6, 5}));
    EXPECT_TRUE(is_ultrametric(u.point(), 4));
    EXPECT_TRUE(three_point(u.point(), 4));
}

TEST(IsUltrametric, AgreesWithOracleOnRandomPoints) {
    Rng rng(6);
    for (int t = 0; t < 3000; ++t) {
        const int m = 3 + static_cast<int>(rng.below(4));
        const auto u = random_coarse_ultrametric(rng, m);
        std::vector<double> c(u.point().coords().begin(), u.point().coords().end());
        if (rng.below(2)) c[rng.below(c.size())] += rng.uniform(-0.6, 0.6);
        const TropicalPoint p(c);
        EXPECT_EQ(static_cast<bool>(is_ultrametric(p, m)), three_point(p, m));
    }
}

TEST(TopologyOf, Examples) {
    EXPECT_EQ(topology_of(TropicalPoint{1, 2, 2}, 3), make_topology(3, {{1, 2}}));
    const auto star = topology_of(TropicalPoint{2, 2, 2}, 3);
    EXPECT_EQ(star.clades, (std::vector<std::vector<int>>{{1}, {1, 2, 3}, {2}, {3}}));
    const auto cat = topology_of(cophenetic(parse_newick("(((1:1,2:1):1,3:2):1,4:3);")));
    EXPECT_EQ(cat, make_topology(4, {{1, 2}, {1, 2, 3}}));
    EXPECT_THROW(topology_of(TropicalPoint{1, 2, 3}, 3), InvalidInput);
}

TEST(TopologyOf, StarVersusResolvedDiffer) {
    EXPECT_FALSE(topologies_equal(topology_of(TropicalPoint{2, 2, 2}, 3), topology_of(TropicalPoint{1, 2, 2}, 3)));
    EXPECT_THROW(topologies_equal(make_topology(3, {}), make_topology(4, {})), InvalidInput);
}

TEST(TopologyOf, ShiftInvariantAndMatchesBallOracle) {
    Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
        const int m = 4 + static_cast<int>(rng.below(6));
        const auto u = rng.below(2) ? random_ultrametric(rng, m) : random_coarse_ultrametric(rng, m);
        const auto topo = topology_of(u);
        EXPECT_TRUE(topologies_equal(topo, topology_of(trop_scale(rng.uniform(-4, 4), u.point()), m)));
        EXPECT_EQ(topo.clades, clades_by_balls(u.point(), m));
    }
}

TEST(TopologyOf, RoundTripThroughTrees) {
    Rng rng(8);
    for (int t = 0; t < 1000; ++t) {
        const int m = 4 + static_cast<int>(rng.below(6));
        const auto tree = random_coalescent_tree(m, rng);
        // Clades read directly off the tree.
        std::vector<std::vector<int>> clades(tree.nodes().size());
        const auto order = tree.preorder();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const auto& nd = tree.node(*it);
            if (nd.children.empty()) clades[*it] = {nd.taxon + 1};
            for (int c : nd.children) clades[*it].insert(clades[*it].end(), clades[c].begin(), clades[c].end());
            std::sort(clades[*it].begin(), clades[*it].end());
        }
        EXPECT_EQ(topology_of(cophenetic(tree)), make_topology(m, clades));
    }
}

TEST(MakeTopology, RejectsOverlap) {
    EXPECT_THROW(make_topology(4, {{1, 2}, {2, 3}}), InvalidInput);
    EXPECT_THROW(make_topology(3, {{1, 5}}), InvalidInput);
}

TEST(Convexity, TropicalCombinationsOfUltrametricsAreUltrametric) {
    Rng rng(9);
    for (int t = 0; t < 1000; ++t) {
        const int m = 4 + static_cast<int>(rng.below(4));
        std::vector<TropicalPoint> verts;
        const int s = 2 + static_cast<int>(rng.below(3));
        for (int k = 0; k < s; ++k) verts.push_back(random_ultrametric(rng, m).point());
        std::vector<double> a(s);
        for (double& x : a) x = rng.uniform(-3, 3);
        EXPECT_TRUE(three_point(combination(verts, a), m));
    }
}

TEST(UltrametricCsv, RoundTrip) {
    Rng rng(10);
    std::vector<Ultrametric> rows;
    for (int t = 0; t < 5; ++t) rows.push_back(random_ultrametric(rng, 5));
    std::stringstream ss;
    write_ultrametric_csv(ss, rows);
    EXPECT_EQ(ss.str().substr(0, 10), "m,1-2,1-3,");
    const auto back = read_ultrametric_csv(ss);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(back[i].point(), rows[i].point());
}

TEST(UltrametricCsv, ReportsLine) {
    std::stringstream ss("m,1-2,1-3,2-3\n3,1,2,2\n3,1,2,x\n");
    try {
        read_ultrametric_csv(ss);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::stringstream bad("m,1-2,1-3,2-3\n3,1,2,3\n");
    EXPECT_THROW(read_ultrametric_csv(bad), ParseError);
}

}  // namespace
