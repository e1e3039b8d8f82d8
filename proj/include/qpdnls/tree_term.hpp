#pragma once

#include "qpdnls/branch.hpp"
#include "qpdnls/state.hpp"

namespace qpdnls {

// One (branch, mode) slice of the term expansion of the iteration: the sum
// over all initial-support tuples with alternating sum n of the product of
// the data factor (alternating conjugates across the flattened tuple), the
// nested oscillatory time integral (composite Simpson on a shared grid,
// grid+1 nodes, self-checked against the half-resolution value), and the
// derivative frequency factor collected along the branch.
//
// Evaluates the unscaled dnls form; a caller comparing against an epsilon-
// scaled run multiplies by (sgn eps)^ell(gamma).
std::complex<double> tree_term(const BranchTree& gamma, const LatticePoint& n, double t,
                               const FourierState& initial, const FrequencyVector& omega,
                               int grid = 512, double tol = 1e-9,
                               std::uint64_t tuple_budget = 4000000);

// Sum of tree_term over the whole level-k branch set.
std::complex<double> tree_sum(int k, const LatticePoint& n, double t, const FourierState& initial,
                              const FrequencyVector& omega, int grid = 512, double tol = 1e-9,
                              std::uint64_t tuple_budget = 4000000);

} // namespace qpdnls
