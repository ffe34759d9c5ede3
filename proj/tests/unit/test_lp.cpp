#include <gtest/gtest.h>

#include <cmath>

#include "troppca/error.hpp"
#include "troppca/lp.hpp"
#include "troppca/random.hpp"

namespace {

using namespace troppca;
using lp::Inequality;
using lp::Problem;
using lp::Status;

TEST(Lp, SmallKnownOptimum) {
    // min x + y  s.t.  x >= 1, y >= 2, x + y >= 4
    Problem p{2, {1, 1}, {{{{0, 1}}, 1}, {{{1, 1}}, 2}, {{{0, 1}, {1, 1}}, 4}}};
    const auto s = lp::minimize(p);
    ASSERT_EQ(s.status, Status::optimal);
    EXPECT_NEAR(s.value, 4.0, 1e-12);
    EXPECT_NEAR(s.y[0] + s.y[1], 4.0, 1e-12);
}

TEST(Lp, NegativeCostsAndFreeVariables) {
    // min -x  s.t.  -x >= -3, x - y >= -10, y >= -5 ; optimum x = 3
    Problem p{2, {-1, 0}, {{{{0, -1}}, -3}, {{{0, 1}, {1, -1}}, -10}, {{{1, 1}}, -5}}};
    const auto s = lp::minimize(p);
    ASSERT_EQ(s.status, Status::optimal);
    EXPECT_NEAR(s.y[0], 3.0, 1e-12);
    EXPECT_NEAR(s.value, -3.0, 1e-12);
}

TEST(Lp, DetectsUnboundedPrimal) {
    // min x with only x >= y: unbounded below.
    Problem p{2, {1, 0}, {{{{0, 1}, {1, -1}}, 0}}};
    EXPECT_EQ(lp::minimize(p).status, Status::unbounded);
}

TEST(Lp, DetectsInfeasiblePrimal) {
    // x >= 1 and -x >= 0.
    Problem p{1, {1}, {{{{0, 1}}, 1}, {{{0, -1}}, 0}}};
    EXPECT_EQ(lp::minimize(p).status, Status::infeasible);
}

TEST(Lp, RejectsBadProblems) {
    EXPECT_THROW(lp::minimize(Problem{2, {1}, {}}), InvalidInput);
    EXPECT_THROW(lp::minimize(Problem{1, {1}, {{{{3, 1}}, 0}}}), InvalidInput);
}

// Oracle: enumerate every intersection of two constraint lines, keep the
// feasible ones, take the best. Random 2-variable problems inside a box.
TEST(Lp, MatchesVertexEnumerationIn2D) {
    Rng rng(30);
    for (int t = 0; t < 500; ++t) {
        std::vector<std::array<double, 3>> rows;  // a0*x + a1*y >= b
        rows.push_back({1, 0, -5});
        rows.push_back({-1, 0, -5});
        rows.push_back({0, 1, -5});
        rows.push_back({0, -1, -5});
        const int extra = 1 + static_cast<int>(rng.below(6));
        for (int k = 0; k < extra; ++k) rows.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-3, 1)});
        const double c0 = rng.uniform(-1, 1), c1 = rng.uniform(-1, 1);

        double best = INFINITY;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                const auto& a = rows[i];
                const auto& b = rows[j];
                const double det = a[0] * b[1] - a[1] * b[0];
                if (std::abs(det) < 1e-12) continue;
                const double x = (a[2] * b[1] - a[1] * b[2]) / det;
                const double y = (a[0] * b[2] - a[2] * b[0]) / det;
                bool ok = true;
                for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y >= r[2] - 1e-9;
                if (ok) best = std::min(best, c0 * x + c1 * y);
            }
        }

        Problem p{2, {c0, c1}, {}};
        for (const auto& r : rows) p.constraints.push_back(Inequality{{{0, r[0]}, {1, r[1]}}, r[2]});
        const auto s = lp::minimize(p);
        if (std::isinf(best)) {
            EXPECT_NE(s.status, Status::optimal);
            continue;
        }
        ASSERT_EQ(s.status, Status::optimal);
        EXPECT_NEAR(s.value, best, 1e-9);
        EXPECT_NEAR(c0 * s.y[0] + c1 * s.y[1], best, 1e-9);
        for (const auto& r : rows) EXPECT_GE(r[0] * s.y[0] + r[1] * s.y[1], r[2] - 1e-9);
    }
}

TEST(Lp, Deterministic) {
    Rng rng(31);
    Problem p{3, {1, 1, 1}, {}};
    for (int k = 0; k < 30; ++k) {
        p.constraints.push_back({{{0, rng.uniform(0, 1)}, {1, rng.uniform(0, 1)}, {2, rng.uniform(0, 1)}}, rng.uniform(0, 1)});
    }
    const auto a = lp::minimize(p), b = lp::minimize(p);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.pivots, b.pivots);
}

}  // namespace
