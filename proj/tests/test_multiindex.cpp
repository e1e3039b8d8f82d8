#include <algorithm>

#include "doctest.h"

#include "qpdnls/multiindex.hpp"

using namespace qpdnls;

namespace {

// independent construction of the branch family, following the definition
// literally with vector concatenation; used as the oracle for enumerate_R
std::vector<MultiIndex> oracle_r(const BranchTree& gamma) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return {MultiIndex{0}};
    case BranchTree::Kind::leaf1: return {MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}};
    case BranchTree::Kind::node: {
        std::vector<MultiIndex> out;
        for (const MultiIndex& a : oracle_r(*gamma.child(0)))
            for (const MultiIndex& b : oracle_r(*gamma.child(1)))
                for (const MultiIndex& c : oracle_r(*gamma.child(2))) {
                    MultiIndex concat;
                    concat.insert(concat.end(), a.begin(), a.end());
                    concat.insert(concat.end(), b.begin(), b.end());
                    concat.insert(concat.end(), c.begin(), c.end());
                    for (std::size_t j = 0; j < concat.size(); ++j) {
                        MultiIndex m = concat;
                        ++m[j];
                        out.push_back(m);
                    }
                }
        return out;
    }
    }
    return {};
}

std::vector<MultiIndex> sorted(std::vector<MultiIndex> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("branch family base cases") {
    CHECK(enumerate_R(*BranchTree::leaf0()).members == std::vector<MultiIndex>{MultiIndex{0}});
    CHECK(enumerate_R(*BranchTree::leaf1()).members ==
          std::vector<MultiIndex>{MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}});
}

TEST_CASE("branch family of a one-deep node") {
    const BranchPtr t =
        BranchTree::node(BranchTree::leaf1(), BranchTree::leaf0(), BranchTree::leaf0());
    const IndexFamily fam = enumerate_R(*t);
    CHECK(fam.members.size() == 15);
    CHECK(r_cardinality(*t) == 15);
    for (const MultiIndex& m : fam.members) {
        CHECK(m.size() == 5);
        CHECK(weight(m) == 2);
    }
    CHECK(sorted(fam.members) == sorted(oracle_r(*t)));
}

TEST_CASE("branch family multiset matches the literal construction at level 2") {
    for (const BranchPtr& gamma : enumerate_branches(2)) {
        CAPTURE(gamma->str());
        CHECK(sorted(enumerate_R(*gamma).members) == sorted(oracle_r(*gamma)));
    }
}

TEST_CASE("streaming scan agrees with materialized members") {
    for (const BranchPtr& gamma : enumerate_branches(2)) {
        const RFamilyScan scan = scan_r_family(*gamma, 1000000);
        std::uint64_t direct = 0;
        const IndexFamily fam = enumerate_R(*gamma);
        for (const MultiIndex& m : fam.members) direct += factorial_product(m);
        CHECK(scan.factorial_sum == direct);
        CHECK(scan.member_count == fam.members.size());
        CHECK(scan.lengths_ok);
        CHECK(scan.weights_ok);
    }
}

TEST_CASE("product-sum value examples and the recursion identity") {
    CHECK(p_value(*BranchTree::leaf0()).by_enumeration == 1);
    CHECK(p_value(*BranchTree::leaf1()).by_enumeration == 3);
    const BranchPtr full =
        BranchTree::node(BranchTree::leaf1(), BranchTree::leaf1(), BranchTree::leaf1());
    const PValue v = p_value(*full);
    CHECK(v.by_enumeration == 324);
    CHECK(v.by_recursion == 324);
    for (const BranchPtr& gamma : enumerate_branches(2)) {
        const PValue pv = p_value(*gamma);
        CHECK(pv.by_enumeration == pv.by_recursion);
    }
}

TEST_CASE("budget fail-fast carries the exact cardinality") {
    const BranchPtr full =
        BranchTree::node(BranchTree::leaf1(), BranchTree::leaf1(), BranchTree::leaf1());
    CHECK_THROWS_AS(enumerate_R(*full, 10), BudgetError);
    try {
        enumerate_R(*full, 10);
    } catch (const BudgetError& e) {
        CHECK(e.demanded() == static_cast<double>(r_cardinality(*full)));
    }
}

TEST_CASE("level family shapes") {
    const IndexFamily g1 = enumerate_G(1);
    CHECK(g1.members ==
          std::vector<MultiIndex>{MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}});
    CHECK(enumerate_G(2).members.size() == 15);
    for (int k = 1; k <= 6; ++k) {
        for (const MultiIndex& m : enumerate_G(k).members) {
            CHECK(m.size() == static_cast<std::size_t>(2 * k + 1));
            CHECK(weight(m) == static_cast<std::uint64_t>(k));
        }
    }
}

TEST_CASE("weighted branch sums") {
    const double T = 4.0 / 81.0;
    const MValue m1 = m_value(1, T);
    CHECK(m1.full_sum == doctest::Approx(1.0 + 3.0 * T).epsilon(1e-15));
    CHECK(m1.inductive_split == doctest::Approx(1.0 + 3.0 * T).epsilon(1e-15));
    CHECK(m_value(1, 0.0).full_sum == 1.0);

    for (int k = 1; k <= 3; ++k) {
        for (int gi = 0; gi < 50; ++gi) {
            const double t = T * gi / 49.0;
            const MValue v = m_value(k, t);
            CHECK(v.full_sum <= 1.5 + 1e-12);
            CHECK(v.inductive_split <= 1.5 + 1e-12);
            // the full sum factorizes over children, so both readings coincide
            CHECK(v.full_sum == doctest::Approx(v.inductive_split).epsilon(1e-12));
        }
    }
}

TEST_CASE("factorial composition bound") {
    const FactorialSumCheck a = factorial_sum_bound_check(3, 1);
    CHECK(a.exact_sum == 3);
    CHECK(a.bound == 6);
    CHECK(a.strict);
    const FactorialSumCheck b = factorial_sum_bound_check(2, 2);
    CHECK(b.exact_sum == 5);
    CHECK(b.bound == 16);
    const FactorialSumCheck c = factorial_sum_bound_check(1, 3);
    CHECK(c.exact_sum == 6);
    CHECK(c.bound == 8);

    // The strict bound fails once the weight concentrates in few slots: a
    // single slot gives L! against 2^L, and 4! = 24 > 16 already. The checker
    // must report exactly these violations on the 8x8 grid and no others.
    std::vector<std::pair<int, int>> violations;
    for (int N = 1; N <= 8; ++N)
        for (int L = 1; L <= 8; ++L)
            if (!factorial_sum_bound_check(N, L).strict) violations.emplace_back(N, L);
    const std::vector<std::pair<int, int>> expected = {{1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8}, {2, 8}};
    CHECK(violations == expected);
    CHECK(factorial_sum_bound_check(1, 4).exact_sum == 24);
    CHECK(factorial_sum_bound_check(1, 4).bound == 16);

    // in the regime the contraction estimates use (N = 2k+1 slots, weight k)
    // the bound holds with room
    for (int k = 1; k <= 3; ++k) CHECK(factorial_sum_bound_check(2 * k + 1, k).strict);
}

TEST_CASE("composition enumeration is exhaustive and ordered") {
    const IndexFamily a22 = enumerate_A(2, 2);
    CHECK(a22.members ==
          std::vector<MultiIndex>{MultiIndex{0, 2}, MultiIndex{1, 1}, MultiIndex{2, 0}});
    CHECK(enumerate_A(4, 3).members.size() == 20); // C(6,3)
}
