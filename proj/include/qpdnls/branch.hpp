#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qpdnls/errors.hpp"
#include "qpdnls/rational.hpp"

namespace qpdnls {

class BranchTree;
using BranchPtr = std::shared_ptr<const BranchTree>;

// One element of the branch set: a leaf of type 0 or 1, or a node with
// exactly three children. Depth membership is contextual: leaf 0 belongs
// to every level, leaf 1 only to level 1, and a node belongs to level k
// when all three children belong to level k-1.
class BranchTree {
public:
    enum class Kind { leaf0, leaf1, node };

    Kind kind() const { return kind_; }
    const BranchPtr& child(int j) const { return children_[static_cast<std::size_t>(j)]; }

    static const BranchPtr& leaf0();
    static const BranchPtr& leaf1();
    static BranchPtr node(BranchPtr a, BranchPtr b, BranchPtr c);

    // Text form: "0", "1", or "(a,b,c)" recursively.
    std::string str() const;
    static BranchPtr parse(std::string_view text);

    bool member_of_level(int k) const;

private:
    explicit BranchTree(Kind k) : kind_(k) {}
    BranchTree(BranchPtr a, BranchPtr b, BranchPtr c)
        : kind_(Kind::node), children_{std::move(a), std::move(b), std::move(c)} {}

    Kind kind_;
    std::array<BranchPtr, 3> children_{};
};

// First counting function: number of initial-data factors is 2*sigma,
// always an odd integer. Exact rational, never a float.
Rational sigma(const BranchTree& gamma);

// Second counting function: number of nested time integrations.
std::uint64_t ell(const BranchTree& gamma);

// Denominator taming iterate growth: leaves give 1, a node gives
// ell(node) times the product over its children.
std::uint64_t dd(const BranchTree& gamma);

// Cardinality of the level-k branch set: g(1)=2, g(k)=1+g(k-1)^3.
// Throws BudgetError once the count no longer fits in uint64.
std::uint64_t branch_count(int k);

// The full level-k branch set, or a BudgetError carrying the exact
// cardinality when it exceeds the budget. Deterministic generation order:
// leaf 0 first, then children varying fastest on the right.
std::vector<BranchPtr> enumerate_branches(int k, std::uint64_t budget = 1000000);

} // namespace qpdnls
