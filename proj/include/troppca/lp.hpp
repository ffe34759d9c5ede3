#pragma once

#include <cstddef>
#include <vector>

namespace troppca::lp {

struct Term {
    std::size_t var;
    double coef;
};

/// sum(coef * y[var]) >= rhs
struct Inequality {
    std::vector<Term> terms;
    double rhs = 0.0;
};

/// minimize objective . y over free variables y subject to inequalities.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<Inequality> constraints;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
    Status status = Status::iteration_limit;
    std::vector<double> y;
    double value = 0.0;
    std::size_t pivots = 0;
};

/// Revised primal simplex on the dual (max rhs.z, A^T z = objective, z >= 0);
/// the primal point is read off the simplex multipliers. Dantzig pricing
/// with a switch to Bland's rule on degenerate stalls, so results are
/// deterministic for a given problem.
Solution minimize(const Problem& problem);

}  // namespace troppca::lp
