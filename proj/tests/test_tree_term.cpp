#include <cmath>

#include "doctest.h"

#include "qpdnls/solver.hpp"
#include "qpdnls/tree_term.hpp"

using namespace qpdnls;

namespace {

ProblemConfig two_mode_config(double t_end, int steps) {
    ProblemConfig cfg;
    cfg.nu = 1;
    cfg.omega = FrequencyVector({1.0});
    cfg.p = 1;
    cfg.epsilon = 1.0;
    cfg.box_radius = 18; // 3^2 growth of radius-2 data
    cfg.t_end = t_end;
    cfg.steps = steps;
    cfg.quadrature = ProblemConfig::Quadrature::simpson;
    cfg.initial.modes = {{LatticePoint({0}), Complex(0.35, 0.15)},
                         {LatticePoint({2}), Complex(-0.2, 0.4)}};
    return cfg;
}

} // namespace

TEST_CASE("bare branch reproduces the rotated datum") {
    const ProblemConfig cfg = two_mode_config(0.3, 64);
    const FourierState init = cfg.build_initial();
    const LatticePoint n({2});
    const Complex got = tree_term(*BranchTree::leaf0(), n, 0.3, init, cfg.omega);
    const Complex want = std::polar(1.0, -4.0 * 0.3) * init.amplitude(n);
    CHECK(std::abs(got - want) <= 1e-14);
}

TEST_CASE("single-integration branch closed form on one mode") {
    ProblemConfig cfg = two_mode_config(0.2, 64);
    cfg.initial.modes = {{LatticePoint({1}), Complex(0.5, -0.3)}};
    const FourierState init = cfg.build_initial();
    const Complex a = init.amplitude(LatticePoint({1}));
    // only the diagonal tuple contributes; the oscillatory factors cancel
    const Complex got = tree_term(*BranchTree::leaf1(), LatticePoint({1}), 0.2, init, cfg.omega);
    const Complex want = Complex(0.0, 1.0) * std::norm(a) * a * 0.2 * std::polar(1.0, -1.0 * 0.2);
    CHECK(std::abs(got - want) <= 1e-12);
}

TEST_CASE("level sums reproduce the iterates at probe points") {
    const double t = 0.18;
    ProblemConfig cfg = two_mode_config(t, 192);
    const FourierState init = cfg.build_initial();
    const PicardRun run = picard_run(init, cfg, 2);

    SUBCASE("level one") {
        for (Coord c : {-2, 0, 2, 4}) {
            const LatticePoint n({c});
            const Complex got = tree_sum(1, n, t, init, cfg.omega, 256);
            const Complex want = run.iterates[1].states.back().amplitude(n);
            CHECK(std::abs(got - want) <= 1e-9);
        }
    }

    SUBCASE("level two") {
        for (Coord c : {0, 2}) {
            const LatticePoint n({c});
            const Complex got = tree_sum(2, n, t, init, cfg.omega, 256);
            const Complex want = run.iterates[2].states.back().amplitude(n);
            CHECK(std::abs(got - want) <= 1e-7);
        }
    }
}

TEST_CASE("quadrature self-check rejects an unusable grid") {
    ProblemConfig cfg = two_mode_config(0.2, 32);
    cfg.initial.modes = {{LatticePoint({1}), Complex(0.5, -0.3)}};
    const FourierState init = cfg.build_initial();
    CHECK_THROWS_AS(tree_term(*BranchTree::leaf1(), LatticePoint({1}), 0.2, init, cfg.omega, 7),
                    UsageError);
}

TEST_CASE("tuple budget fails fast") {
    const ProblemConfig cfg = two_mode_config(0.1, 32);
    const FourierState init = cfg.build_initial();
    const BranchPtr full = BranchTree::parse("((1,1,1),(1,1,1),(1,1,1))");
    CHECK_THROWS_AS(tree_term(*full, LatticePoint({0}), 0.1, init, cfg.omega, 64, 1e-9, 100),
                    BudgetError);
}
