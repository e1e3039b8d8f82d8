#include "qpdnls/tree_term.hpp"

#include <cmath>

#include "qpdnls/errors.hpp"
#include "qpdnls/solver.hpp"

namespace qpdnls {

namespace {

struct TupleContext {
    std::span<const LatticePoint> slots; // flattened tuple for the whole tree
    const FrequencyVector* omega;
    double t;
    int grid;
};

std::size_t leaf_slots(const BranchTree& gamma) {
    const Rational s = sigma(gamma);
    return static_cast<std::size_t>(2 * s.num / s.den);
}

LatticePoint slice_cas(std::span<const LatticePoint> slice) {
    return cas(slice);
}

// frequency factor along the branch; conjugation flips the sign of i<cas>
Complex f_factor(const BranchTree& gamma, std::span<const LatticePoint> slice,
                 const FrequencyVector& omega) {
    switch (gamma.kind()) {
    case BranchTree::Kind::leaf0: return Complex(1.0, 0.0);
    case BranchTree::Kind::leaf1: return Complex(0.0, pairing(slice_cas(slice), omega));
    case BranchTree::Kind::node: {
        Complex prod(1.0, 0.0);
        std::size_t off = 0;
        for (int j = 0; j < 3; ++j) {
            const std::size_t w = leaf_slots(*gamma.child(j));
            Complex fj = f_factor(*gamma.child(j), slice.subspan(off, w), omega);
            if (j % 2 == 1) fj = std::conj(fj);
            prod *= fj;
            off += w;
        }
        return Complex(0.0, pairing(slice_cas(slice), omega)) * prod;
    }
    }
    return Complex();
}

// nested oscillatory integral evaluated on the shared grid s_i = t i / grid
std::vector<Complex> i_factor(const BranchTree& gamma, std::span<const LatticePoint> slice,
                              const TupleContext& ctx) {
    const std::size_t nodes = static_cast<std::size_t>(ctx.grid) + 1;
    const double h = ctx.t / static_cast<double>(ctx.grid);
    std::vector<Complex> out(nodes);
    const double freq = pairing(slice_cas(slice), *ctx.omega);
    const double freq2 = freq * freq;

    if (gamma.kind() == BranchTree::Kind::leaf0) {
        for (std::size_t m = 0; m < nodes; ++m)
            out[m] = std::polar(1.0, -freq2 * h * static_cast<double>(m));
        return out;
    }

    std::vector<Complex> g(nodes);
    if (gamma.kind() == BranchTree::Kind::leaf1) {
        // product of bare phases with alternating conjugates
        double rate = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double fj = pairing(slice[static_cast<std::size_t>(j)], *ctx.omega);
            rate += (j % 2 == 0 ? -1.0 : 1.0) * fj * fj;
        }
        for (std::size_t m = 0; m < nodes; ++m)
            g[m] = std::polar(1.0, (freq2 + rate) * h * static_cast<double>(m));
    } else {
        std::array<std::vector<Complex>, 3> child;
        std::size_t off = 0;
        for (int j = 0; j < 3; ++j) {
            const std::size_t w = leaf_slots(*gamma.child(j));
            child[static_cast<std::size_t>(j)] = i_factor(*gamma.child(j), slice.subspan(off, w), ctx);
            off += w;
        }
        for (std::size_t m = 0; m < nodes; ++m) {
            Complex prod = child[0][m] * std::conj(child[1][m]) * child[2][m];
            g[m] = std::polar(1.0, freq2 * h * static_cast<double>(m)) * prod;
        }
    }
    const std::vector<Complex> q = cumulative_quadrature(g, h, ProblemConfig::Quadrature::simpson);
    for (std::size_t m = 0; m < nodes; ++m)
        out[m] = std::polar(1.0, -freq2 * h * static_cast<double>(m)) * q[m];
    return out;
}

Complex evaluate_at_grid(const BranchTree& gamma, const LatticePoint& n, double t,
                         const FourierState& initial, const FrequencyVector& omega, int grid,
                         std::uint64_t tuple_budget) {
    const std::size_t slots = leaf_slots(gamma);
    const std::vector<LatticePoint> support = initial.support();
    if (support.empty()) return Complex(0.0, 0.0);

    double tuples = 1.0;
    for (std::size_t i = 0; i < slots; ++i) tuples *= static_cast<double>(support.size());
    if (tuples > static_cast<double>(tuple_budget))
        throw BudgetError("tree term tuple enumeration too large", tuples,
                          static_cast<double>(tuple_budget));

    std::vector<std::size_t> idx(slots, 0);
    std::vector<LatticePoint> tuple(slots, support[0]);
    Complex total(0.0, 0.0);
    while (true) {
        for (std::size_t i = 0; i < slots; ++i) tuple[i] = support[idx[i]];
        if (cas(tuple) == n) {
            // data factor: flattened product with alternating conjugates
            Complex cfac(1.0, 0.0);
            for (std::size_t j = 0; j < slots; ++j) {
                const Complex a = initial.amplitude(tuple[j]);
                cfac *= (j % 2 == 1) ? std::conj(a) : a;
            }
            if (cfac != Complex(0.0, 0.0)) {
                TupleContext ctx{std::span<const LatticePoint>(tuple), &omega, t, grid};
                const std::vector<Complex> iv = i_factor(gamma, ctx.slots, ctx);
                const Complex ffac = f_factor(gamma, ctx.slots, omega);
                total += cfac * iv.back() * ffac;
            }
        }
        std::size_t i = 0;
        for (; i < slots; ++i) {
            if (++idx[i] < support.size()) break;
            idx[i] = 0;
        }
        if (i == slots) break;
    }
    return total;
}

} // namespace

Complex tree_term(const BranchTree& gamma, const LatticePoint& n, double t,
                  const FourierState& initial, const FrequencyVector& omega, int grid, double tol,
                  std::uint64_t tuple_budget) {
    if (grid < 8 || grid % 2 != 0) throw UsageError("tree term grid must be even and >= 8");
    if (t < 0) throw UsageError("tree term time must be >= 0");
    if (t == 0.0 || gamma.kind() == BranchTree::Kind::leaf0) {
        // no time integration happens for the bare branch; evaluate directly
        return evaluate_at_grid(gamma, n, t == 0.0 ? 0.0 : t, initial, omega, std::max(grid, 8),
                                tuple_budget);
    }
    const Complex fine = evaluate_at_grid(gamma, n, t, initial, omega, grid, tuple_budget);
    const Complex coarse = evaluate_at_grid(gamma, n, t, initial, omega, grid / 2, tuple_budget);
    const double err = std::abs(fine - coarse);
    if (err > tol * std::max(1.0, std::abs(fine)))
        throw UsageError("tree term quadrature tolerance not met: grid-halving error " +
                         std::to_string(err));
    return fine;
}

Complex tree_sum(int k, const LatticePoint& n, double t, const FourierState& initial,
                 const FrequencyVector& omega, int grid, double tol, std::uint64_t tuple_budget) {
    Complex total(0.0, 0.0);
    for (const BranchPtr& gamma : enumerate_branches(k))
        total += tree_term(*gamma, n, t, initial, omega, grid, tol, tuple_budget);
    return total;
}

} // namespace qpdnls
