#include "qpdnls/branch.hpp"

namespace qpdnls {

const BranchPtr& BranchTree::leaf0() {
    static const BranchPtr p(new BranchTree(Kind::leaf0));
    return p;
}

const BranchPtr& BranchTree::leaf1() {
    static const BranchPtr p(new BranchTree(Kind::leaf1));
    return p;
}

BranchPtr BranchTree::node(BranchPtr a, BranchPtr b, BranchPtr c) {
    if (!a || !b || !c) throw UsageError("branch node requires three children");
    return BranchPtr(new BranchTree(std::move(a), std::move(b), std::move(c)));
}

std::string BranchTree::str() const {
    switch (kind_) {
    case Kind::leaf0: return "0";
    case Kind::leaf1: return "1";
    case Kind::node:
        return "(" + children_[0]->str() + "," + children_[1]->str() + "," + children_[2]->str() + ")";
    }
    return {};
}

namespace {

BranchPtr parse_rec(std::string_view text, std::size_t& pos) {
    if (pos >= text.size()) throw ConfigError("branch text ended early");
    const char c = text[pos];
    if (c == '0') {
        ++pos;
        return BranchTree::leaf0();
    }
    if (c == '1') {
        ++pos;
        return BranchTree::leaf1();
    }
    if (c == '(') {
        ++pos;
        BranchPtr a = parse_rec(text, pos);
        if (pos >= text.size() || text[pos] != ',') throw ConfigError("expected ',' in branch text");
        ++pos;
        BranchPtr b = parse_rec(text, pos);
        if (pos >= text.size() || text[pos] != ',') throw ConfigError("expected ',' in branch text");
        ++pos;
        BranchPtr d = parse_rec(text, pos);
        if (pos >= text.size() || text[pos] != ')') throw ConfigError("expected ')' in branch text");
        ++pos;
        return BranchTree::node(std::move(a), std::move(b), std::move(d));
    }
    throw ConfigError(std::string("unexpected character '") + c + "' in branch text");
}

} // namespace

BranchPtr BranchTree::parse(std::string_view text) {
    std::size_t pos = 0;
    BranchPtr t = parse_rec(text, pos);
    if (pos != text.size()) throw ConfigError("trailing characters in branch text: " + std::string(text));
    return t;
}

bool BranchTree::member_of_level(int k) const {
    if (k < 1) return false;
    switch (kind_) {
    case Kind::leaf0: return true;
    case Kind::leaf1: return k == 1;
    case Kind::node:
        return k >= 2 && children_[0]->member_of_level(k - 1) &&
               children_[1]->member_of_level(k - 1) && children_[2]->member_of_level(k - 1);
    }
    return false;
}

Rational sigma(const BranchTree& gamma) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return Rational(1, 2);
    case BranchTree::Kind::leaf1: return Rational(3, 2);
    case BranchTree::Kind::node:
        return sigma(*gamma.child(0)) + sigma(*gamma.child(1)) + sigma(*gamma.child(2));
    }
    return Rational();
}

std::uint64_t ell(const BranchTree& gamma) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return 0;
    case BranchTree::Kind::leaf1: return 1;
    case BranchTree::Kind::node:
        return 1 + ell(*gamma.child(0)) + ell(*gamma.child(1)) + ell(*gamma.child(2));
    }
    return 0;
}

std::uint64_t dd(const BranchTree& gamma) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return 1;
    case BranchTree::Kind::leaf1: return 1;
    case BranchTree::Kind::node:
        return ell(gamma) * dd(*gamma.child(0)) * dd(*gamma.child(1)) * dd(*gamma.child(2));
    }
    return 1;
}

std::uint64_t branch_count(int k) {
    if (k < 1) throw UsageError("branch level must be >= 1");
    std::uint64_t g = 2;
    for (int i = 2; i <= k; ++i) {
        if (g > 2642245) // cube would overflow uint64
            throw BudgetError("branch count overflows uint64 at level " + std::to_string(i),
                              1e308, 1.8e19);
        g = 1 + g * g * g;
    }
    return g;
}

std::vector<BranchPtr> enumerate_branches(int k, std::uint64_t budget) {
    const std::uint64_t count = branch_count(k);
    if (count > budget)
        throw BudgetError("enumeration too large: level " + std::to_string(k) + " branch set has " +
                              std::to_string(count) + " elements, budget " + std::to_string(budget),
                          static_cast<double>(count), static_cast<double>(budget));
    if (k == 1) return {BranchTree::leaf0(), BranchTree::leaf1()};
    std::vector<BranchPtr> prev = enumerate_branches(k - 1, budget);
    std::vector<BranchPtr> out;
    out.reserve(count);
    out.push_back(BranchTree::leaf0());
    for (const BranchPtr& a : prev)
        for (const BranchPtr& b : prev)
            for (const BranchPtr& c : prev) out.push_back(BranchTree::node(a, b, c));
    return out;
}

} // namespace qpdnls
