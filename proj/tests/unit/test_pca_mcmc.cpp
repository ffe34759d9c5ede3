#include <gtest/gtest.h>

#include <json.hpp>

#include "../support/helpers.hpp"
#include "troppca/error.hpp"
#include "troppca/pca_mcmc.hpp"
#include "troppca/tree_sim.hpp"

namespace {

using namespace troppca;
using namespace testing_support;

std::vector<Ultrametric> inside_sample(Rng& rng, const std::vector<Ultrametric>& verts, int n) {
    std::vector<TropicalPoint> pts;
    for (const auto& v : verts) pts.push_back(v.point());
    std::vector<Ultrametric> out;
    for (int i = 0; i < n; ++i) {
        std::vector<double> a(verts.size());
        for (double& x : a) x = rng.uniform(-1, 1);
        out.push_back(Ultrametric(combination(pts, a), verts.front().leaves()));
    }
    return out;
}

TEST(Objective, HandExample) {
    const TropicalPolytope p({TropicalPoint{0, 0, 0}, TropicalPoint{0, 3, 0}, TropicalPoint{0, 3, 3}});
    // (0,1,2) projects to (0,1,1); (0,2,1) is a tropical combination of the
    // vertices with coefficients (0,-1,-2), so it costs nothing.
    EXPECT_DOUBLE_EQ(objective(p, {TropicalPoint{0, 1, 2}, TropicalPoint{0, 2, 1}}), 1.0);
}

TEST(Objective, InsideSampleIsZeroAndOrderFree) {
    Rng rng(50);
    for (int t = 0; t < 50; ++t) {
        std::vector<Ultrametric> verts;
        for (int k = 0; k < 3; ++k) verts.push_back(random_ultrametric(rng, 5));
        const auto sample = inside_sample(rng, verts, 10);
        EXPECT_NEAR(objective(verts, sample), 0.0, 1e-12);
        std::vector<Ultrametric> others;
        for (int i = 0; i < 10; ++i) others.push_back(random_ultrametric(rng, 5));
        std::vector<Ultrametric> rev(verts.rbegin(), verts.rend());
        EXPECT_NEAR(objective(verts, others), objective(rev, others), 1e-9);
    }
}

TEST(Objective, SingleVertexCostsTheDistance) {
    Rng rng(51);
    const auto v = random_ultrametric(rng, 4), u = random_ultrametric(rng, 4);
    EXPECT_NEAR(objective(std::vector<Ultrametric>{v}, {u}), pairwise_dist(v.point(), u.point()), 1e-12);
}

TEST(Propose, KeepsTreesEquidistant) {
    Rng rng(52);
    for (int t = 0; t < 10000; ++t) {
        const int m = 3 + static_cast<int>(rng.below(7));
        const auto tree = rng.below(2) ? random_coalescent_tree(m, rng) : random_caterpillar_tree(m, rng);
        const int k = static_cast<int>(rng.below(m + 1));
        const auto out = propose_tree(tree, k, rng);
        const auto depths = out.depths();
        for (int id = 0; id < static_cast<int>(out.nodes().size()); ++id) {
            if (id != out.root()) {
                ASSERT_GE(out.node(id).length, 0.0);
            }
            if (out.is_leaf(id)) {
                ASSERT_NEAR(depths[id], 1.0, 1e-9);
            }
        }
        ASSERT_TRUE(three_point(cophenetic(out).point(), m));
    }
}

TEST(Propose, SmallKLeavesLabelsAlone) {
    Rng rng(53);
    for (int k : {0, 1}) {
        for (int t = 0; t < 100; ++t) {
            const auto tree = random_coalescent_tree(6, rng);
            const auto out = propose_tree(tree, k, rng);
            for (int id = 0; id < static_cast<int>(tree.nodes().size()); ++id) {
                EXPECT_EQ(out.node(id).taxon, tree.node(id).taxon);
            }
        }
    }
}

TEST(Propose, StarTreeOnlyPermutes) {
    Rng rng(54);
    const auto star = parse_newick("(1:1,2:1,3:1,4:1);");
    const auto out = propose_tree(star, 4, rng);
    for (int id = 0; id < static_cast<int>(star.nodes().size()); ++id) {
        EXPECT_EQ(out.node(id).length, star.node(id).length);
    }
    EXPECT_THROW(propose_tree(star, 5, rng), InvalidInput);
}

TEST(Metropolis, AcceptanceProbabilities) {
    Rng rng(55);
    for (int t = 0; t < 100; ++t) {
        EXPECT_TRUE(metropolis_accept(10, 5, rng));
        EXPECT_TRUE(metropolis_accept(3, 3, rng));
        EXPECT_TRUE(metropolis_accept(3, 0, rng));
    }
    for (double r : {1.25, 2.0, 4.0}) {
        int hits = 0;
        const int trials = 10000;
        for (int t = 0; t < trials; ++t) hits += metropolis_accept(5.0, 5.0 * r, rng);
        EXPECT_NEAR(hits / double(trials), 1.0 / r, 0.02) << "ratio " << r;
    }
    EXPECT_THROW(metropolis_accept(-1, 2, rng), InvalidInput);
}

TEST(Statistics, Cases) {
    Rng rng(56);
    std::vector<Ultrametric> verts;
    for (int k = 0; k < 3; ++k) verts.push_back(random_ultrametric(rng, 4));
    const auto in = statistics(verts, inside_sample(rng, verts, 8));
    EXPECT_NEAR(in.pi, 0.0, 1e-12);
    EXPECT_NEAR(in.r_squared, 1.0, 1e-12);

    Ultrametric outside = random_ultrametric(rng, 4);
    while (residual(TropicalPolytope({verts[0].point(), verts[1].point(), verts[2].point()}), outside.point()) < 1e-3) {
        outside = random_ultrametric(rng, 4);
    }
    const auto same = statistics(verts, std::vector<Ultrametric>(5, outside));
    EXPECT_NEAR(same.s_reg, 0.0, 1e-9);
    EXPECT_GT(same.pi, 0.0);
    EXPECT_NEAR(same.r_squared, 0.0, 1e-9);

    std::vector<Ultrametric> sample;
    for (int i = 0; i < 12; ++i) sample.push_back(random_ultrametric(rng, 4));
    const auto st = statistics(verts, sample);
    double pi = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) pi += pairwise_dist(sample[i].point(), st.projections[i]);
    EXPECT_NEAR(st.pi, pi, 1e-7);
    EXPECT_NEAR(1.0 - st.pi / (st.pi + st.s_reg), st.s_reg / (st.pi + st.s_reg), 1e-12);
    EXPECT_GE(st.r_squared, 0.0);
    EXPECT_LE(st.r_squared, 1.0);
}

TEST(Fit, StartAtTrueVerticesStaysExact) {
    Rng rng(57);
    for (int t = 0; t < 5; ++t) {
        std::vector<Ultrametric> verts;
        for (int k = 0; k < 3; ++k) verts.push_back(random_ultrametric(rng, 5));
        McmcConfig cfg;
        cfg.iterations = 200;
        cfg.seed = 9 + t;
        cfg.init = InitMode::user_supplied;
        cfg.initial = verts;
        const auto f = fit(inside_sample(rng, verts, 20), cfg).best;
        EXPECT_NEAR(f.stats.pi, 0.0, 1e-9);
        EXPECT_NEAR(f.stats.r_squared, 1.0, 1e-9);
    }
}

TEST(Fit, TraceMonotoneAndDeterministic) {
    Rng rng(58);
    std::vector<Ultrametric> sample;
    for (int i = 0; i < 15; ++i) sample.push_back(random_ultrametric(rng, 5));
    McmcConfig cfg;
    cfg.iterations = 300;
    cfg.cooling_interval = 50;
    cfg.seed = 77;
    cfg.chains = 3;
    cfg.threads = 3;
    const auto a = fit(sample, cfg);
    for (const auto& c : a.chains) {
        ASSERT_EQ(c.trace.size(), 300u);
        for (std::size_t i = 1; i < c.trace.size(); ++i) EXPECT_LE(c.trace[i], c.trace[i - 1]);
        EXPECT_NEAR(c.trace.back(), c.stats.pi, 1e-9);
        EXPECT_LE(c.stats.r_squared, a.best.stats.r_squared);
    }
    cfg.threads = 1;
    const auto b = fit(sample, cfg);
    FitReport ra{&cfg, &a, {}, {}, 0, false}, rb{&cfg, &b, {}, {}, 0, false};
    EXPECT_EQ(fit_to_json(ra), fit_to_json(rb));
}

TEST(Fit, InputErrors) {
    Rng rng(59);
    McmcConfig cfg;
    std::vector<Ultrametric> two{random_ultrametric(rng, 4), random_ultrametric(rng, 4)};
    EXPECT_THROW(fit(two, cfg), InvalidInput);
    std::vector<Ultrametric> mixed{random_ultrametric(rng, 4), random_ultrametric(rng, 4), random_ultrametric(rng, 5)};
    EXPECT_THROW(fit(mixed, cfg), InvalidInput);
    std::vector<Ultrametric> copies(4, random_ultrametric(rng, 4));
    EXPECT_THROW(fit(copies, cfg), InvalidInput);
    cfg.cooling_interval = 0;
    EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(FitJson, Layout) {
    Rng rng(60);
    std::vector<Ultrametric> sample;
    for (int i = 0; i < 6; ++i) sample.push_back(random_ultrametric(rng, 4));
    McmcConfig cfg;
    cfg.iterations = 20;
    const auto f = fit(sample, cfg);
    const auto j = nlohmann::json::parse(fit_to_json({&cfg, &f, {"1", "2", "3", "4"}, {}, 0, false}));
    for (const char* key : {"config", "vertices", "vertex_vectors", "projections", "lambdas", "residuals", "pi",
                            "s_reg", "r_squared", "trace"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["vertices"].size(), 3u);
    EXPECT_EQ(j["trace"].size(), 20u);
    EXPECT_FALSE(j["config"].contains("threads"));
    for (const auto& s : j["vertices"]) EXPECT_TRUE(parse_newick(s.get<std::string>()).is_equidistant());
}

}  // namespace
