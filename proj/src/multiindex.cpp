#include "qpdnls/multiindex.hpp"

#include <algorithm>
#include <cmath>

namespace qpdnls {

std::uint64_t weight(const MultiIndex& alpha) {
    std::uint64_t w = 0;
    for (std::uint32_t a : alpha) w += a;
    return w;
}

std::uint64_t factorial(std::uint32_t n) {
    static constexpr std::uint64_t table[21] = {
        1ull, 1ull, 2ull, 6ull, 24ull, 120ull, 720ull, 5040ull, 40320ull, 362880ull,
        3628800ull, 39916800ull, 479001600ull, 6227020800ull, 87178291200ull,
        1307674368000ull, 20922789888000ull, 355687428096000ull, 6402373705728000ull,
        121645100408832000ull, 2432902008176640000ull};
    if (n > 20) throw BudgetError("factorial argument too large: " + std::to_string(n), n, 20);
    return table[n];
}

std::uint64_t factorial_product(const MultiIndex& alpha) {
    std::uint64_t p = 1;
    for (std::uint32_t a : alpha) p *= factorial(a);
    return p;
}

std::uint64_t r_cardinality(const BranchTree& gamma) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return 1;
    case BranchTree::Kind::leaf1: return 3;
    case BranchTree::Kind::node: {
        const Rational s = sigma(gamma);
        const std::uint64_t len = static_cast<std::uint64_t>(2 * s.num / s.den);
        unsigned __int128 prod = len;
        for (int j = 0; j < 3; ++j) prod *= r_cardinality(*gamma.child(j));
        if (prod > static_cast<unsigned __int128>(UINT64_MAX))
            throw BudgetError("branch family cardinality overflows uint64", 1e20, 1.8e19);
        return static_cast<std::uint64_t>(prod);
    }
    }
    return 0;
}

namespace {

std::vector<MultiIndex> r_members(const BranchTree& gamma, std::uint64_t budget) {
    const std::uint64_t count = r_cardinality(gamma);
    if (count > budget)
        throw BudgetError("branch family too large: " + std::to_string(count) + " members, budget " +
                              std::to_string(budget),
                          static_cast<double>(count), static_cast<double>(budget));
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return {MultiIndex{0}};
    case BranchTree::Kind::leaf1: return {MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}};
    case BranchTree::Kind::node: {
        std::array<std::vector<MultiIndex>, 3> ch;
        for (int j = 0; j < 3; ++j) ch[static_cast<std::size_t>(j)] = r_members(*gamma.child(j), budget);
        std::vector<MultiIndex> out;
        out.reserve(count);
        MultiIndex buf;
        for (const MultiIndex& a : ch[0])
            for (const MultiIndex& b : ch[1])
                for (const MultiIndex& c : ch[2]) {
                    buf.clear();
                    buf.insert(buf.end(), a.begin(), a.end());
                    buf.insert(buf.end(), b.begin(), b.end());
                    buf.insert(buf.end(), c.begin(), c.end());
                    for (std::size_t j0 = 0; j0 < buf.size(); ++j0) {
                        MultiIndex m = buf;
                        ++m[j0];
                        out.push_back(std::move(m));
                    }
                }
        return out;
    }
    }
    return {};
}

} // namespace

IndexFamily enumerate_R(const BranchTree& gamma, std::uint64_t budget) {
    return IndexFamily{IndexFamily::Kind::r_branch, r_members(gamma, budget)};
}

IndexFamily enumerate_G(int k, std::uint64_t budget) {
    if (k < 1) throw UsageError("level must be >= 1");
    std::uint64_t count = 3;
    for (int j = 2; j <= k; ++j) count *= static_cast<std::uint64_t>(2 * j + 1);
    if (count > budget)
        throw BudgetError("level family too large: " + std::to_string(count) + " members, budget " +
                              std::to_string(budget),
                          static_cast<double>(count), static_cast<double>(budget));
    std::vector<MultiIndex> cur = {MultiIndex{1, 0, 0}, MultiIndex{0, 1, 0}, MultiIndex{0, 0, 1}};
    for (int j = 2; j <= k; ++j) {
        const std::size_t len = static_cast<std::size_t>(2 * j + 1);
        std::vector<MultiIndex> next;
        next.reserve(cur.size() * len);
        for (const MultiIndex& prev : cur) {
            MultiIndex base(len, 0);
            std::copy(prev.begin(), prev.end(), base.begin());
            for (std::size_t j0 = 0; j0 < len; ++j0) {
                MultiIndex m = base;
                ++m[j0];
                next.push_back(std::move(m));
            }
        }
        cur = std::move(next);
    }
    return IndexFamily{IndexFamily::Kind::g_level, std::move(cur)};
}

namespace {

void compositions_rec(int slots_left, int weight_left, MultiIndex& prefix, std::vector<MultiIndex>& out) {
    if (slots_left == 1) {
        prefix.push_back(static_cast<std::uint32_t>(weight_left));
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int v = 0; v <= weight_left; ++v) {
        prefix.push_back(static_cast<std::uint32_t>(v));
        compositions_rec(slots_left - 1, weight_left - v, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

IndexFamily enumerate_A(int N, int L) {
    if (N < 1 || L < 0) throw UsageError("composition family needs N >= 1, L >= 0");
    std::vector<MultiIndex> out;
    MultiIndex prefix;
    compositions_rec(N, L, prefix, out);
    return IndexFamily{IndexFamily::Kind::a_compositions, std::move(out)};
}

RFamilyScan scan_r_family(const BranchTree& gamma, std::uint64_t budget) {
    const std::uint64_t count = r_cardinality(gamma);
    if (count > budget)
        throw BudgetError("branch family too large: " + std::to_string(count) + " members, budget " +
                              std::to_string(budget),
                          static_cast<double>(count), static_cast<double>(budget));

    const Rational s = sigma(gamma);
    const std::uint64_t want_len = static_cast<std::uint64_t>(2 * s.num / s.den);
    const std::uint64_t want_weight = ell(gamma);

    RFamilyScan scan;
    scan.member_count = count;

    auto visit_small = [&](const std::vector<MultiIndex>& members) {
        for (const MultiIndex& m : members) {
            if (m.size() != want_len) scan.lengths_ok = false;
            if (weight(m) != want_weight) scan.weights_ok = false;
            scan.factorial_sum += factorial_product(m);
        }
    };

    if (gamma.kind() != BranchTree::Kind::node) {
        visit_small(r_members(gamma, budget));
        return scan;
    }

    // Node: stream over (child member triple, bump position) without
    // materializing. Child lists are materialized, with actual per-member
    // lengths, entry sums and factorial products.
    std::array<std::vector<MultiIndex>, 3> ch;
    for (int j = 0; j < 3; ++j) ch[static_cast<std::size_t>(j)] = r_members(*gamma.child(j), budget);

    std::array<std::vector<std::uint64_t>, 3> fprod, wsum;
    for (int j = 0; j < 3; ++j) {
        for (const MultiIndex& m : ch[static_cast<std::size_t>(j)]) {
            fprod[static_cast<std::size_t>(j)].push_back(factorial_product(m));
            wsum[static_cast<std::size_t>(j)].push_back(weight(m));
        }
    }

    const std::size_t l1 = ch[0].front().size();
    const std::size_t l2 = ch[1].front().size();
    const std::size_t l3 = ch[2].front().size();
    const std::size_t len = l1 + l2 + l3;
    MultiIndex buf(len);
    if (len != want_len) scan.lengths_ok = false;

    for (std::size_t i1 = 0; i1 < ch[0].size(); ++i1) {
        std::copy(ch[0][i1].begin(), ch[0][i1].end(), buf.begin());
        for (std::size_t i2 = 0; i2 < ch[1].size(); ++i2) {
            std::copy(ch[1][i2].begin(), ch[1][i2].end(), buf.begin() + static_cast<std::ptrdiff_t>(l1));
            const std::uint64_t f12 = fprod[0][i1] * fprod[1][i2];
            const std::uint64_t w12 = wsum[0][i1] + wsum[1][i2];
            for (std::size_t i3 = 0; i3 < ch[2].size(); ++i3) {
                std::copy(ch[2][i3].begin(), ch[2][i3].end(),
                          buf.begin() + static_cast<std::ptrdiff_t>(l1 + l2));
                const std::uint64_t base = f12 * fprod[2][i3];
                if (w12 + wsum[2][i3] + 1 != want_weight) scan.weights_ok = false;
                // each member is buf plus a unit bump at j0, so its factorial
                // product is base * (buf[j0] + 1)
                std::uint64_t acc = 0;
                for (std::size_t j0 = 0; j0 < len; ++j0)
                    acc += base * static_cast<std::uint64_t>(buf[j0] + 1);
                scan.factorial_sum += acc;
            }
        }
    }
    return scan;
}

std::uint64_t p_recursion(const BranchTree& gamma) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return 1;
    case BranchTree::Kind::leaf1: return 3;
    case BranchTree::Kind::node: {
        unsigned __int128 p = 3 * static_cast<unsigned __int128>(ell(gamma));
        for (int j = 0; j < 3; ++j) p *= p_recursion(*gamma.child(j));
        if (p > static_cast<unsigned __int128>(UINT64_MAX))
            throw BudgetError("product-sum value overflows uint64", 1e20, 1.8e19);
        return static_cast<std::uint64_t>(p);
    }
    }
    return 0;
}

PValue p_value(const BranchTree& gamma, std::uint64_t budget) {
    RFamilyScan scan = scan_r_family(gamma, budget);
    PValue v;
    v.by_enumeration = scan.factorial_sum;
    v.by_recursion = p_recursion(gamma);
    v.member_count = scan.member_count;
    return v;
}

MValue m_value(int k, double T, std::uint64_t budget) {
    if (k < 1) throw UsageError("level must be >= 1");
    if (T < 0) throw UsageError("T must be >= 0");
    MValue v;
    for (const BranchPtr& gamma : enumerate_branches(k, budget)) {
        const double tl = std::pow(T, static_cast<double>(ell(*gamma)));
        v.full_sum += tl / static_cast<double>(dd(*gamma)) * static_cast<double>(p_recursion(*gamma));
    }
    double s = 1.0 + 3.0 * T;
    for (int j = 2; j <= k; ++j) s = 1.0 + 3.0 * T * s * s * s;
    v.inductive_split = s;
    return v;
}

FactorialSumCheck factorial_sum_bound_check(int N, int L) {
    if (N < 1 || N > 8 || L < 1 || L > 8)
        throw UsageError("exhaustive factorial-sum check supports 1 <= N, L <= 8");
    FactorialSumCheck chk;
    for (const MultiIndex& alpha : enumerate_A(N, L).members) chk.exact_sum += factorial_product(alpha);
    chk.bound = 1;
    for (int i = 0; i < L; ++i) chk.bound *= static_cast<std::uint64_t>(2 * N);
    chk.strict = chk.exact_sum < chk.bound;
    return chk;
}

} // namespace qpdnls
