#include "troppca/fermat_weber.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "troppca/error.hpp"
#include "troppca/lp.hpp"
#include "troppca/polytope.hpp"
#include "troppca/simd/kernels.hpp"

namespace troppca {
namespace {

void validate(const std::vector<TropicalPoint>& sample) {
    if (sample.empty()) throw InvalidInput("Fermat-Weber point of an empty sample");
    const std::size_t e = sample.front().dim();
    for (const auto& p : sample) {
        if (p.dim() != e) throw InvalidInput("sample points differ in dimension");
    }
    if (e > kMaxFermatWeberDim) {
        throw NumericError("instance too large: dimension " + std::to_string(e) + " exceeds " +
                           std::to_string(kMaxFermatWeberDim) + " (m > 25)");
    }
}

// Variables: a_0..a_{n-1}, b_0..b_{n-1}, x_1..x_{e-1}.
struct Layout {
    std::size_t n, e;
    std::size_t a(std::size_t i) const { return i; }
    std::size_t b(std::size_t i) const { return n + i; }
    std::size_t x(std::size_t j) const { return 2 * n + j - 1; }
    std::size_t vars() const { return 2 * n + e - 1; }
};

lp::Problem base_problem(const std::vector<TropicalPoint>& sample, const Layout& L) {
    lp::Problem p;
    p.num_vars = L.vars();
    p.objective.assign(p.num_vars, 0.0);
    for (std::size_t i = 0; i < L.n; ++i) {
        p.objective[L.a(i)] = 1.0;
        p.objective[L.b(i)] = 1.0;
        const auto& d = sample[i];
        // Shift each sample point to its normalized form to keep magnitudes small.
        const double s = d[0];
        for (std::size_t j = 0; j < L.e; ++j) {
            const double dj = d[j] - s;
            lp::Inequality up{{{L.a(i), 1.0}}, -dj};
            lp::Inequality down{{{L.b(i), 1.0}}, dj};
            if (j > 0) {
                up.terms.push_back({L.x(j), -1.0});
                down.terms.push_back({L.x(j), 1.0});
            }
            p.constraints.push_back(std::move(up));
            p.constraints.push_back(std::move(down));
        }
    }
    return p;
}

std::vector<double> solve(const lp::Problem& p) {
    const lp::Solution s = lp::minimize(p);
    if (s.status != lp::Status::optimal) {
        throw NumericError(s.status == lp::Status::iteration_limit ? "Fermat-Weber LP hit the iteration limit"
                                                                   : "Fermat-Weber LP has no optimal solution");
    }
    return s.y;
}

TropicalPoint point_from(const std::vector<double>& y, const Layout& L) {
    std::vector<double> c(L.e, 0.0);
    for (std::size_t j = 1; j < L.e; ++j) c[j] = y[L.x(j)] + 0.0;
    return TropicalPoint(std::move(c));
}

}  // namespace

double fw_objective(const std::vector<TropicalPoint>& sample, const TropicalPoint& x) {
    double total = 0.0;
    for (const auto& p : sample) total += trop_dist(x, p);
    return total;
}

FermatWeberResult fermat_weber(const std::vector<TropicalPoint>& sample, bool lexicographic) {
    validate(sample);
    const Layout L{sample.size(), sample.front().dim()};
    lp::Problem p = base_problem(sample, L);
    const std::vector<double> first = solve(p);
    TropicalPoint best = point_from(first, L);
    const double optimum = fw_objective(sample, best);

    // Lexicographic tie-break: minimize x_1, then x_2, ... over the optimal face.
    const double slack = 1e-12 * std::max(1.0, optimum);
    lp::Inequality budget{{}, -(optimum + slack)};
    for (std::size_t i = 0; i < L.n; ++i) {
        budget.terms.push_back({L.a(i), -1.0});
        budget.terms.push_back({L.b(i), -1.0});
    }
    p.constraints.push_back(std::move(budget));
    std::vector<double> fixed;
    for (std::size_t j = 1; lexicographic && j < L.e; ++j) {
        std::fill(p.objective.begin(), p.objective.end(), 0.0);
        p.objective[L.x(j)] = 1.0;
        lp::Problem step = p;
        for (std::size_t l = 1; l < j; ++l) {
            const double v = fixed[l - 1];
            const double eps = 1e-12 * std::max(1.0, std::abs(v));
            step.constraints.push_back({{{L.x(l), 1.0}}, v - eps});
            step.constraints.push_back({{{L.x(l), -1.0}}, -(v + eps)});
        }
        const lp::Solution s = lp::minimize(step);
        if (s.status != lp::Status::optimal) break;  // keep the last accepted point
        const TropicalPoint candidate = point_from(s.y, L);
        if (fw_objective(sample, candidate) > optimum + 2 * slack) break;
        fixed.push_back(s.y[L.x(j)]);
        best = candidate;
    }

    FermatWeberResult r{best, fw_objective(sample, best), false};
    r.in_hull = contains(TropicalPolytope(sample), r.point);
    return r;
}

TropicalPoint pull_into_hull(const std::vector<TropicalPoint>& sample, const TropicalPoint& x) {
    validate(sample);
    if (x.dim() != sample.front().dim()) throw InvalidInput("point dimension does not match the sample");
    const std::size_t e = x.dim();
    const double before = fw_objective(sample, x);
    std::vector<double> c(x.coords().begin(), x.coords().end());
    for (std::size_t j = 0; j < e; ++j) {
        double gap = 0.0;
        bool first = true;
        for (const auto& d : sample) {
            const double top = simd::max_diff(d.coords(), c);
            const double g = top - (d[j] - c[j]);
            if (first || g < gap) gap = g;
            first = false;
        }
        if (gap > kTolerance) c[j] = (c[j] - gap) + 0.0;
    }
    TropicalPoint out(std::move(c));
    const double after = fw_objective(sample, out);
    if (std::abs(after - before) > 1e-7 * std::max(1.0, before)) {
        throw NumericError("pull_into_hull: objective changed from " + std::to_string(before) + " to " +
                           std::to_string(after) + "; the point is not a Fermat-Weber point");
    }
    return out;
}

}  // namespace troppca
