#pragma once

#include <cstdint>
#include <vector>

#include "qpdnls/branch.hpp"
#include "qpdnls/errors.hpp"

namespace qpdnls {

// A tuple of naturals distributing derivative powers across tuple slots.
using MultiIndex = std::vector<std::uint32_t>;

std::uint64_t weight(const MultiIndex& alpha);
std::uint64_t factorial(std::uint32_t n);
std::uint64_t factorial_product(const MultiIndex& alpha);

// Multiset of multi-indices. members preserves multiplicity and is emitted
// in a fixed generation order, so equal inputs give identical vectors.
struct IndexFamily {
    enum class Kind { r_branch, g_level, a_compositions };
    Kind kind;
    std::vector<MultiIndex> members;
};

// Exact multiset cardinality of the branch family without materializing it.
std::uint64_t r_cardinality(const BranchTree& gamma);

// The branch multi-index family: a leaf 0 gives the singleton zero index,
// a leaf 1 gives the three unit indices of length three, and a node takes
// every concatenation across its children plus every unit bump. Kept as a
// multiset because the product-sum recursion counts repeats separately.
IndexFamily enumerate_R(const BranchTree& gamma, std::uint64_t budget = 1000000);

// Level family for the contraction estimates: members have length 2k+1
// and weight k.
IndexFamily enumerate_G(int k, std::uint64_t budget = 1000000);

// All length-N multi-indices of weight L, lexicographic.
IndexFamily enumerate_A(int N, int L);

// One streaming pass over the branch family, visiting every member without
// storing the multiset. Reports whether all member lengths equal twice
// sigma and all weights equal ell, and accumulates the factorial-product
// sum member by member.
struct RFamilyScan {
    std::uint64_t member_count = 0;
    bool lengths_ok = true;
    bool weights_ok = true;
    std::uint64_t factorial_sum = 0;
};
RFamilyScan scan_r_family(const BranchTree& gamma, std::uint64_t budget);

// Product-sum value computed along two independent routes: direct member
// enumeration and the closed recursion 3*ell*prod(children). Both are
// returned so callers can assert the identity.
struct PValue {
    std::uint64_t by_enumeration = 0;
    std::uint64_t by_recursion = 0;
    std::uint64_t member_count = 0;
};
PValue p_value(const BranchTree& gamma, std::uint64_t budget = 1000000);
std::uint64_t p_recursion(const BranchTree& gamma);

// Weighted branch-set sum at parameter T. full_sum runs over the whole
// level-k branch set; inductive_split follows the two-term recursion
// s_1 = 1 + 3T, s_k = 1 + 3T s_{k-1}^3. Both are reported.
struct MValue {
    double full_sum = 0.0;
    double inductive_split = 0.0;
};
MValue m_value(int k, double T, std::uint64_t budget = 1000000);

// Exhaustive factorial-product sum over all weight-L indices of length N,
// against the strict bound (2N)^L.
struct FactorialSumCheck {
    std::uint64_t exact_sum = 0;
    std::uint64_t bound = 0;
    bool strict = false;
};
FactorialSumCheck factorial_sum_bound_check(int N, int L);

} // namespace qpdnls
