#include "troppca/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "troppca/error.hpp"

namespace troppca::lp {
namespace {

constexpr double kPricingTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr std::size_t kRefactorEvery = 100;
constexpr std::size_t kStallLimit = 50;

struct Entry {
    std::size_t row;
    double val;
};

class DualSimplex {
public:
    DualSimplex(const Problem& p) : rows_(p.num_vars) {
        // One row per primal variable, one column per primal inequality.
        sign_.assign(rows_, 1.0);
        b_.assign(rows_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            if (p.objective[r] < 0.0) sign_[r] = -1.0;
            b_[r] = sign_[r] * p.objective[r];
        }
        for (const auto& ineq : p.constraints) {
            std::vector<Entry> col;
            for (const auto& t : ineq.terms) {
                if (t.var >= rows_) throw InvalidInput("LP term references an unknown variable");
                auto it = std::find_if(col.begin(), col.end(), [&](const Entry& e) { return e.row == t.var; });
                if (it == col.end()) {
                    col.push_back({t.var, sign_[t.var] * t.coef});
                } else {
                    it->val += sign_[t.var] * t.coef;
                }
            }
            std::erase_if(col, [](const Entry& e) { return e.val == 0.0; });
            std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
            cols_.push_back(std::move(col));
            cost_.push_back(ineq.rhs);
        }
        structural_ = cols_.size();
    }

    Solution run() {
        Solution sol;
        crash_basis();

        // Phase 1: drive artificials to zero.
        std::vector<double> phase1(cols_.size(), 0.0);
        bool any_artificial = false;
        for (std::size_t j = structural_; j < cols_.size(); ++j) {
            phase1[j] = -1.0;
            any_artificial = true;
        }
        if (any_artificial) {
            const Status s = iterate(phase1, /*allow_artificial=*/true, sol.pivots);
            if (s != Status::optimal) {
                sol.status = s;
                return sol;
            }
            double infeas = 0.0;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (basis_[r] >= structural_) infeas += x_[r];
            }
            double scale = 1.0;
            for (double v : b_) scale = std::max(scale, std::abs(v));
            if (infeas > 1e-7 * scale) {
                // No dual point: the primal is unbounded (or infeasible too).
                sol.status = Status::unbounded;
                return sol;
            }
            expel_artificials(sol.pivots);
        }

        std::vector<double> phase2(cols_.size(), 0.0);
        std::copy(cost_.begin(), cost_.end(), phase2.begin());
        const Status s = iterate(phase2, /*allow_artificial=*/false, sol.pivots);
        // An unbounded dual means an infeasible primal.
        sol.status = s == Status::unbounded ? Status::infeasible : s;
        if (s != Status::optimal) return sol;

        const auto y = multipliers(phase2);
        sol.y.resize(rows_);
        for (std::size_t r = 0; r < rows_; ++r) sol.y[r] = sign_[r] * y[r];
        sol.value = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) sol.value += y[r] * b_[r];
        return sol;
    }

private:
    void crash_basis() {
        basis_.assign(rows_, std::numeric_limits<std::size_t>::max());
        for (std::size_t j = 0; j < structural_; ++j) {
            const auto& col = cols_[j];
            if (col.size() == 1 && col[0].val == 1.0 && basis_[col[0].row] == std::numeric_limits<std::size_t>::max()) {
                basis_[col[0].row] = j;
            }
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            if (basis_[r] == std::numeric_limits<std::size_t>::max()) {
                basis_[r] = cols_.size();
                cols_.push_back({{r, 1.0}});
            }
        }
        in_basis_.assign(cols_.size(), 0);
        for (std::size_t j : basis_) in_basis_[j] = 1;
        binv_.assign(rows_ * rows_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) binv_[r * rows_ + r] = 1.0;
        x_ = b_;
    }

    std::vector<double> multipliers(const std::vector<double>& cost) const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t k = 0; k < rows_; ++k) {
            const double cb = cost[basis_[k]];
            if (cb == 0.0) continue;
            const double* row = &binv_[k * rows_];
            for (std::size_t r = 0; r < rows_; ++r) y[r] += cb * row[r];
        }
        return y;
    }

    std::vector<double> column_image(std::size_t j) const {
        std::vector<double> a(rows_, 0.0);
        for (std::size_t k = 0; k < rows_; ++k) {
            const double* row = &binv_[k * rows_];
            double s = 0.0;
            for (const auto& e : cols_[j]) s += row[e.row] * e.val;
            a[k] = s;
        }
        return a;
    }

    // Returns true when B^-1 was rebuilt from scratch.
    bool pivot(std::size_t r, std::size_t entering, const std::vector<double>& alpha, double theta) {
        for (std::size_t k = 0; k < rows_; ++k) x_[k] -= theta * alpha[k];
        x_[r] = theta;
        double* prow = &binv_[r * rows_];
        const double inv = 1.0 / alpha[r];
        for (std::size_t c = 0; c < rows_; ++c) prow[c] *= inv;
        for (std::size_t k = 0; k < rows_; ++k) {
            if (k == r || alpha[k] == 0.0) continue;
            double* row = &binv_[k * rows_];
            const double f = alpha[k];
            for (std::size_t c = 0; c < rows_; ++c) row[c] -= f * prow[c];
        }
        in_basis_[basis_[r]] = 0;
        basis_[r] = entering;
        in_basis_[entering] = 1;
        if (++since_refactor_ >= kRefactorEvery) {
            refactor();
            return true;
        }
        return false;
    }

    // Rebuilds B^-1 from the basis columns by Gauss-Jordan elimination.
    void refactor() {
        since_refactor_ = 0;
        const std::size_t n = rows_;
        std::vector<double> bmat(n * n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (const auto& e : cols_[basis_[k]]) bmat[e.row * n + k] = e.val;
        }
        std::vector<double> inv(n * n, 0.0);
        for (std::size_t r = 0; r < n; ++r) inv[r * n + r] = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < n; ++r) {
                if (std::abs(bmat[r * n + c]) > std::abs(bmat[piv * n + c])) piv = r;
            }
            if (std::abs(bmat[piv * n + c]) < 1e-14) return;  // keep the updated inverse
            if (piv != c) {
                for (std::size_t k = 0; k < n; ++k) {
                    std::swap(bmat[piv * n + k], bmat[c * n + k]);
                    std::swap(inv[piv * n + k], inv[c * n + k]);
                }
            }
            const double d = 1.0 / bmat[c * n + c];
            for (std::size_t k = 0; k < n; ++k) {
                bmat[c * n + k] *= d;
                inv[c * n + k] *= d;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c) continue;
                const double f = bmat[r * n + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    bmat[r * n + k] -= f * bmat[c * n + k];
                    inv[r * n + k] -= f * inv[c * n + k];
                }
            }
        }
        // inv = B^-1 with rows indexed by basis position.
        binv_ = std::move(inv);
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += binv_[k * n + r] * b_[r];
            x_[k] = std::abs(s) < 1e-12 ? 0.0 : s;
        }
    }

    Status iterate(const std::vector<double>& cost, bool allow_artificial, std::size_t& pivots) {
        const std::size_t limit = 50000 + 20 * (rows_ + cols_.size());
        std::size_t stall = 0;
        std::vector<double> y = multipliers(cost);
        for (std::size_t iter = 0; iter < limit; ++iter) {
            const bool bland = stall >= kStallLimit;
            std::size_t entering = cols_.size();
            double best = kPricingTol;
            const std::size_t ncols = allow_artificial ? cols_.size() : structural_;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (in_basis_[j]) continue;
                double d = cost[j];
                for (const auto& e : cols_[j]) d -= y[e.row] * e.val;
                if (d > best) {
                    entering = j;
                    best = d;
                    if (bland) break;
                }
            }
            if (entering == cols_.size()) return Status::optimal;

            const auto alpha = column_image(entering);
            std::size_t leave = rows_;
            double theta = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < rows_; ++k) {
                if (alpha[k] <= kPivotTol) continue;
                const double t = std::max(0.0, x_[k]) / alpha[k];
                if (leave == rows_ || t < theta - 1e-12) {
                    leave = k;
                    theta = t;
                } else if (t <= theta + 1e-12) {
                    const bool better = bland ? basis_[k] < basis_[leave] : alpha[k] > alpha[leave];
                    if (better) {
                        leave = k;
                        theta = std::min(theta, t);
                    }
                }
            }
            if (leave == rows_) return Status::unbounded;
            stall = theta <= 1e-12 ? stall + 1 : 0;
            ++pivots;
            if (pivot(leave, entering, alpha, theta)) {
                y = multipliers(cost);
            } else {
                // y' = y + d_q * (row `leave` of the updated inverse).
                const double* prow = &binv_[leave * rows_];
                for (std::size_t c = 0; c < rows_; ++c) y[c] += best * prow[c];
            }
        }
        return Status::iteration_limit;
    }

    // Pivots zero-level artificials out of the basis where a structural
    // column can replace them; rows where none can are redundant.
    void expel_artificials(std::size_t& pivots) {
        for (std::size_t r = 0; r < rows_; ++r) {
            if (basis_[r] < structural_) continue;
            const double* row = &binv_[r * rows_];
            std::size_t pick = structural_;
            double best = 1e-7;
            for (std::size_t j = 0; j < structural_; ++j) {
                if (in_basis_[j]) continue;
                double v = 0.0;
                for (const auto& e : cols_[j]) v += row[e.row] * e.val;
                if (std::abs(v) > best) {
                    best = std::abs(v);
                    pick = j;
                }
            }
            if (pick == structural_) continue;
            const auto alpha = column_image(pick);
            pivot(r, pick, alpha, 0.0);
            x_[r] = 0.0;
            ++pivots;
        }
    }

    std::size_t rows_;
    std::size_t structural_ = 0;
    std::vector<std::vector<Entry>> cols_;
    std::vector<double> cost_;
    std::vector<double> b_;
    std::vector<double> sign_;
    std::vector<std::size_t> basis_;
    std::vector<char> in_basis_;
    std::vector<double> binv_;
    std::vector<double> x_;
    std::size_t since_refactor_ = 0;
};

}  // namespace

Solution minimize(const Problem& problem) {
    if (problem.objective.size() != problem.num_vars) throw InvalidInput("LP objective size mismatch");
    if (problem.num_vars == 0) throw InvalidInput("LP has no variables");
    return DualSimplex(problem).run();
}

}  // namespace troppca::lp
