#pragma once

#include <cstddef>
#include <vector>

#include "troppca/tropical.hpp"

namespace troppca {

// Largest accepted dimension, C(25, 2).
inline constexpr std::size_t kMaxFermatWeberDim = 300;

struct FermatWeberResult {
    TropicalPoint point;
    double objective = 0.0;  // sum of tropical distances, recomputed from point
    bool in_hull = false;
};

/// Sum of tropical distances from x to every sample point.
double fw_objective(const std::vector<TropicalPoint>& sample, const TropicalPoint& x);

/// A tropical Fermat-Weber point of `sample`, via the linear program
///
///   min sum_i (a_i + b_i)  s.t.  a_i >= x_j - D_ij,  b_i >= D_ik - x_k,  x_0 = 0.
///
/// With `lexicographic` set, the lexicographically smallest normalized
/// optimal point is returned (e - 1 further LPs); otherwise the first optimal
/// vertex found, which is still deterministic and has the same objective.
/// Throws InvalidInput for an empty or ragged sample and
/// NumericError("instance too large") above kMaxFermatWeberDim.
FermatWeberResult fermat_weber(const std::vector<TropicalPoint>& sample, bool lexicographic = true);

/// Lowers coordinates with an empty type set until some sample point ties
/// its maximum, moving a Fermat-Weber point into tconv(sample) without
/// changing the objective. Throws NumericError when the objective moves by
/// more than 1e-7 (x was not optimal).
TropicalPoint pull_into_hull(const std::vector<TropicalPoint>& sample, const TropicalPoint& x);

}  // namespace troppca
