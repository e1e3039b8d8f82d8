#include <cmath>

#include "doctest.h"

#include "qpdnls/artifacts.hpp"
#include "qpdnls/solver.hpp"

using namespace qpdnls;

namespace {

ProblemConfig single_mode_config(double t_end, int steps) {
    ProblemConfig cfg;
    cfg.nu = 1;
    cfg.omega = FrequencyVector({1.0});
    cfg.p = 1;
    cfg.epsilon = 1.0;
    cfg.box_radius = 2;
    cfg.t_end = t_end;
    cfg.steps = steps;
    cfg.initial.modes = {{LatticePoint({1}), Complex(0.7, -0.2)}};
    return cfg;
}

// plane wave closed form for a single populated mode
Complex plane_wave(const Complex& a, double freq, double eps, double t) {
    const double phase = -(freq * freq - eps * freq * std::norm(a)) * t;
    return a * std::polar(1.0, phase);
}

} // namespace

TEST_CASE("linear solution is a pure phase rotation") {
    const TruncationBox box(1, 3);
    const FrequencyVector omega({1.0});
    const Complex a(0.5, 0.5);
    const FourierState init = FourierState::from_modes(box, {{LatticePoint({1}), a}});

    const FourierState same = linear_solution(init, omega, 0.0);
    CHECK(std::abs(same.amplitude(LatticePoint({1})) - a) == 0.0);

    const FourierState rotated = linear_solution(init, omega, M_PI);
    CHECK(std::abs(rotated.amplitude(LatticePoint({1})) + a) <= 1e-15);

    for (double t : {0.1, 0.7, 3.0, 42.0})
        CHECK(std::abs(linear_solution(init, omega, t).amplitude(LatticePoint({1}))) ==
              doctest::Approx(std::abs(a)).epsilon(1e-15));
}

TEST_CASE("cumulative quadrature converges at the expected orders") {
    const double w = 3.0;
    auto run = [&](int nodes, ProblemConfig::Quadrature rule) {
        const double h = 1.0 / (nodes - 1);
        std::vector<Complex> g(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i) g[static_cast<std::size_t>(i)] = std::polar(1.0, w * h * i);
        const std::vector<Complex> q = cumulative_quadrature(g, h, rule);
        const Complex exact = (std::polar(1.0, w) - 1.0) / Complex(0.0, w);
        return std::abs(q.back() - exact);
    };
    const double trap_coarse = run(65, ProblemConfig::Quadrature::trapezoid);
    const double trap_fine = run(129, ProblemConfig::Quadrature::trapezoid);
    CHECK(trap_coarse / trap_fine == doctest::Approx(4.0).epsilon(0.05));
    const double simp_coarse = run(65, ProblemConfig::Quadrature::simpson);
    const double simp_fine = run(129, ProblemConfig::Quadrature::simpson);
    CHECK(simp_coarse / simp_fine == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("iterate zero is the sampled linear flow") {
    const ProblemConfig cfg = single_mode_config(0.5, 20);
    const FourierState init = cfg.build_initial();
    const std::vector<Trajectory> iterates = picard_iterate(init, cfg, 0);
    REQUIRE(iterates.size() == 1);
    for (int m = 0; m <= cfg.steps; ++m) {
        const double t = cfg.dt() * m;
        const FourierState want = linear_solution(init, cfg.omega, t);
        CHECK(weighted_sup_diff(iterates[0].states[static_cast<std::size_t>(m)], want, 0.0) <= 1e-15);
    }
}

TEST_CASE("single-mode iterates follow the plane-wave series order by order") {
    ProblemConfig cfg = single_mode_config(0.25, 256);
    cfg.quadrature = ProblemConfig::Quadrature::simpson;
    const FourierState init = cfg.build_initial();
    const Complex a = init.amplitude(LatticePoint({1}));
    const double theta = 1.0 * std::norm(a); // <n0> |a|^2
    const PicardRun run = picard_run(init, cfg, 3);

    for (int k = 0; k <= 3; ++k) {
        const Complex got = run.iterates[static_cast<std::size_t>(k)].states.back().amplitude(LatticePoint({1}));
        const Complex pw = plane_wave(a, 1.0, cfg.epsilon, cfg.t_end);
        const double gap = std::abs(got - pw);
        const double scale = std::abs(a) * std::pow(theta * cfg.t_end, k + 1);
        CHECK(gap <= 2.0 * scale + 1e-11);
    }
}

TEST_CASE("interaction-picture integrator") {
    SUBCASE("epsilon zero reproduces the linear flow to machine precision") {
        ProblemConfig cfg = single_mode_config(1.0, 64);
        cfg.epsilon = 0.0;
        const FourierState init = cfg.build_initial();
        const Trajectory traj = integrate(init, cfg, IntegrateOptions{1, false});
        for (const FourierState& s : traj.states) {
            const FourierState want = linear_solution(init, cfg.omega, s.time());
            CHECK(weighted_sup_diff(s, want, 0.0) <= 1e-14);
        }
    }

    SUBCASE("plane wave matches the closed form with fourth-order error") {
        auto error_at = [](int steps) {
            ProblemConfig cfg = single_mode_config(1.0, steps);
            cfg.initial.modes = {{LatticePoint({1}), Complex(1.1, 0.6)}};
            const FourierState init = cfg.build_initial();
            const Trajectory traj = integrate(init, cfg, IntegrateOptions{0, false});
            const Complex a = init.amplitude(LatticePoint({1}));
            const Complex want = plane_wave(a, 1.0, cfg.epsilon, cfg.t_end);
            return std::abs(traj.states.back().amplitude(LatticePoint({1})) - want);
        };
        const double e32 = error_at(32);
        const double e64 = error_at(64);
        CHECK(e32 / e64 == doctest::Approx(16.0).epsilon(0.15));
        CHECK(error_at(1000) <= 1e-8 * std::abs(Complex(1.1, 0.6)));
    }

    SUBCASE("mass is conserved along the plane wave") {
        ProblemConfig cfg = single_mode_config(1.0, 500);
        const FourierState init = cfg.build_initial();
        const Trajectory traj = integrate(init, cfg, IntegrateOptions{50, true});
        REQUIRE(!traj.monitors.empty());
        const double m0 = traj.monitors.front().M;
        for (const Monitors& m : traj.monitors)
            CHECK(std::abs(m.M - m0) / m0 <= 1e-10);
    }

    SUBCASE("step-size warning trips on a coarse mesh") {
        ProblemConfig cfg = single_mode_config(10.0, 2);
        cfg.initial.modes = {{LatticePoint({2}), Complex(2.0, 0.0)}};
        const FourierState init = cfg.build_initial();
        const Trajectory traj = integrate(init, cfg, IntegrateOptions{0, false});
        CHECK(!traj.warnings.empty());
    }
}

TEST_CASE("conserved quantities") {
    const TruncationBox box(1, 3);
    const FrequencyVector omega({1.5});
    const Complex a(0.4, 0.3);
    const LatticePoint n0({2});

    SUBCASE("single mode closed forms") {
        const FourierState s = FourierState::from_modes(box, {{n0, a}});
        const Monitors m = conserved_quantities(s, omega);
        const double freq = 3.0;
        const double a2 = std::norm(a);
        CHECK(m.M == doctest::Approx(a2).epsilon(1e-15));
        CHECK(m.H == doctest::Approx(freq * a2 + 0.5 * a2 * a2).epsilon(1e-14));
        CHECK(m.E == doctest::Approx(freq * freq * a2 - 1.5 * freq * a2 * a2 + 0.5 * a2 * a2 * a2)
                         .epsilon(1e-13));
    }

    SUBCASE("pair-map route equals the direct tuple sums") {
        FourierState s(0.0, box);
        s.set(LatticePoint({-1}), Complex(0.2, -0.1));
        s.set(LatticePoint({0}), Complex(-0.3, 0.4));
        s.set(LatticePoint({1}), Complex(0.5, 0.25));
        s.set(LatticePoint({2}), Complex(0.05, 0.15));
        const Monitors fast = conserved_quantities(s, omega);
        const Monitors direct = conserved_quantities_direct(s, omega);
        CHECK(fast.M == doctest::Approx(direct.M).epsilon(1e-13));
        CHECK(fast.H == doctest::Approx(direct.H).epsilon(1e-12));
        CHECK(fast.E == doctest::Approx(direct.E).epsilon(1e-12));
    }
}

TEST_CASE("box doubling leaves exact runs bit-identical") {
    ProblemConfig cfg;
    cfg.nu = 1;
    cfg.omega = FrequencyVector({1.0});
    cfg.epsilon = 1.0;
    cfg.box_radius = 9; // 3^2 growth of radius-1 data
    cfg.t_end = 0.01;
    cfg.steps = 8;
    cfg.initial.modes = {{LatticePoint({1}), Complex(0.4, 0.2)},
                         {LatticePoint({-1}), Complex(-0.1, 0.3)}};
    const int K = 2;

    const PicardRun small = picard_run(cfg.build_initial(), cfg, K);
    ProblemConfig big = cfg;
    big.box_radius = 18;
    const PicardRun large = picard_run(big.build_initial(), big, K);

    const FourierState& s = small.iterates.back().states.back();
    const FourierState& l = large.iterates.back().states.back();
    CHECK(s.data().size() == l.data().size());
    for (const auto& [key, value] : s.data()) {
        REQUIRE(l.data().count(key) == 1);
        const Complex other = l.data().at(key);
        CHECK(value.real() == other.real());
        CHECK(value.imag() == other.imag());
    }
}

TEST_CASE("iteration reports support overflow with the iterate name") {
    ProblemConfig cfg;
    cfg.nu = 1;
    cfg.omega = FrequencyVector({1.0});
    cfg.box_radius = 2; // too small for the cubic growth of radius-1 data
    cfg.t_end = 0.01;
    cfg.steps = 4;
    cfg.initial.modes = {{LatticePoint({1}), Complex(0.4, 0.2)},
                         {LatticePoint({-1}), Complex(-0.1, 0.3)}};
    CHECK_THROWS_AS(picard_run(cfg.build_initial(), cfg, 1), BudgetError);
}

TEST_CASE("random data honors its envelope and is reproducible") {
    const TruncationBox box(2, 4);
    const FourierState a = FourierState::random(box, 2.0, 0.5, 123);
    const FourierState b = FourierState::random(box, 2.0, 0.5, 123);
    const FourierState c = FourierState::random(box, 2.0, 0.5, 124);
    CHECK(weighted_sup_diff(a, b, 0.0) == 0.0);
    CHECK(weighted_sup_diff(a, c, 0.0) > 0.0);
    for (const auto& [key, value] : a.data()) {
        const double envelope = std::sqrt(2.0) * std::exp(-0.5 * static_cast<double>(packed::l1(key, 2)));
        CHECK(std::abs(value) <= envelope);
    }
}

TEST_CASE("trajectory csv round trips bit-exactly") {
    const TruncationBox box(2, 3);
    Trajectory traj;
    FourierState s0 = FourierState::random(box, 1.0, 1.0, 5);
    FourierState s1 = FourierState::random(box, 1.0, 1.0, 6);
    s1.set_time(0.125);
    traj.states.push_back(s0);
    traj.states.push_back(s1);

    const std::string csv = trajectory_csv(traj, 2);
    const Trajectory back = trajectory_from_csv(csv, box);
    REQUIRE(back.states.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.states[i].time() == traj.states[i].time());
        REQUIRE(back.states[i].data().size() == traj.states[i].data().size());
        for (const auto& [key, value] : traj.states[i].data()) {
            const Complex got = back.states[i].data().at(key);
            CHECK(got.real() == value.real());
            CHECK(got.imag() == value.imag());
        }
    }
}
