#include <cmath>

#include "doctest.h"

#include "qpdnls/solver.hpp"

using namespace qpdnls;

namespace {

// exhaustive tuple oracle: iterate every (2p+1)-tuple over the support and
// accumulate products with alternating conjugates into the alternating sum
SpectralMap oracle_convolution(const FourierState& state, int p, const TruncationBox& out_box) {
    const std::vector<LatticePoint> support = state.support();
    const std::size_t factors = static_cast<std::size_t>(2 * p + 1);
    SpectralMap out;
    std::vector<std::size_t> idx(factors, 0);
    if (support.empty()) return out;
    while (true) {
        std::vector<LatticePoint> tuple;
        for (std::size_t j = 0; j < factors; ++j) tuple.push_back(support[idx[j]]);
        const LatticePoint n = cas(tuple);
        if (out_box.contains(n)) {
            Complex prod(1.0, 0.0);
            for (std::size_t j = 0; j < factors; ++j) {
                const Complex a = state.amplitude(tuple[j]);
                prod *= (j % 2 == 1) ? std::conj(a) : a;
            }
            out[packed::encode(n)] += prod;
        }
        std::size_t j = 0;
        for (; j < factors; ++j) {
            if (++idx[j] < support.size()) break;
            idx[j] = 0;
        }
        if (j == factors) break;
    }
    return out;
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

TEST_CASE("single mode cubes onto itself") {
    const TruncationBox box(1, 3);
    const Complex a(0.6, 0.8);
    const FourierState s = FourierState::from_modes(box, {{LatticePoint({2}), a}});
    const SpectralMap conv = alternating_convolution(s, 1, box);
    CHECK(conv.size() == 1);
    const Complex v = conv.at(packed::encode(LatticePoint({2})));
    const Complex want = std::norm(a) * a;
    CHECK(std::abs(v - want) <= 1e-15);
}

TEST_CASE("zero state maps to nothing") {
    const TruncationBox box(2, 3);
    const FourierState s(0.0, box);
    CHECK(alternating_convolution(s, 1, box).empty());
}

TEST_CASE("two-mode support and the 27-tuple oracle") {
    const TruncationBox box(1, 4);
    const Complex a(0.5, 0.1), b(-0.25, 0.75);
    const FourierState s = FourierState::from_modes(box, {{LatticePoint({0}), a}, {LatticePoint({1}), b}});
    const SpectralMap conv = alternating_convolution(s, 1, box);

    std::vector<LatticePoint> support;
    for (const auto& [key, value] : conv) support.push_back(packed::decode(key, 1));
    CHECK(support == std::vector<LatticePoint>{LatticePoint({-1}), LatticePoint({0}), LatticePoint({1}),
                                               LatticePoint({2})});

    const SpectralMap oracle = oracle_convolution(s, 1, box);
    CHECK(oracle.size() == conv.size());
    for (const auto& [key, value] : conv) CHECK(std::abs(value - oracle.at(key)) <= 1e-14);
    // the mode at 2 can only come from (b, a, b)
    const Complex at2 = conv.at(packed::encode(LatticePoint({2})));
    CHECK(std::abs(at2 - b * std::conj(a) * b) <= 1e-15);
}

TEST_CASE("oracle agreement on random supports for p in {1,2}") {
    for (int trial = 0; trial < 12; ++trial) {
        const int nu = 1 + trial % 2;
        const TruncationBox box(nu, 6);
        FourierState s(0.0, box);
        std::uint64_t h = 1000 + static_cast<std::uint64_t>(trial);
        const int count = 2 + trial % 4; // supports of size <= 5
        for (int i = 0; i < count; ++i) {
            std::vector<Coord> coords;
            for (int d = 0; d < nu; ++d) coords.push_back(static_cast<Coord>(mix(h++) % 3) - 1);
            const double re = static_cast<double>(mix(h++) % 1000) / 1000.0 - 0.5;
            const double im = static_cast<double>(mix(h++) % 1000) / 1000.0 - 0.5;
            s.set(LatticePoint(coords), Complex(re, im));
        }
        for (int p = 1; p <= 2; ++p) {
            const SpectralMap got = alternating_convolution(s, p, box);
            const SpectralMap want = oracle_convolution(s, p, box);
            for (const auto& [key, value] : want) {
                const auto it = got.find(key);
                const Complex g = it == got.end() ? Complex(0, 0) : it->second;
                CHECK(std::abs(g - value) <= 1e-12);
            }
            for (const auto& [key, value] : got) {
                if (want.find(key) == want.end()) CHECK(std::abs(value) <= 1e-12);
            }
        }
    }
}

TEST_CASE("clip policy") {
    const TruncationBox box(1, 1);
    const FourierState s =
        FourierState::from_modes(box, {{LatticePoint({0}), Complex(1, 0)}, {LatticePoint({1}), Complex(0, 1)}});
    const SpectralMap clipped = alternating_convolution(s, 1, box);
    for (const auto& [key, value] : clipped) CHECK(packed::l1(key, 1) <= 1);
    CHECK_THROWS_AS(alternating_convolution(s, 1, box, true, "iterate 1"), BudgetError);
    try {
        alternating_convolution(s, 1, box, true, "iterate 1");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("iterate 1") != std::string::npos);
    }
}

TEST_CASE("coefficient equation right side") {
    ProblemConfig cfg;
    cfg.nu = 1;
    cfg.omega = FrequencyVector({2.0});
    cfg.p = 1;
    cfg.epsilon = 0.5;
    cfg.box_radius = 4;

    const TruncationBox box = cfg.box();
    const LatticePoint n0({1});
    const Complex a(0.3, 0.7);

    SUBCASE("single mode") {
        const FourierState s = FourierState::from_modes(box, {{n0, a}});
        const SpectralMap r = rhs(s, cfg);
        const double freq = 2.0;
        const Complex want = Complex(0, -freq * freq) * a + Complex(0, cfg.epsilon * freq) * std::norm(a) * a;
        CHECK(std::abs(r.at(packed::encode(n0)) - want) <= 1e-15);
    }

    SUBCASE("zero-frequency mode has zero derivative") {
        const FourierState s = FourierState::from_modes(box, {{LatticePoint({0}), a}});
        const SpectralMap r = rhs(s, cfg);
        CHECK(std::abs(r.at(packed::encode(LatticePoint({0})))) == 0.0);
    }

    SUBCASE("epsilon zero leaves the pure rotation") {
        cfg.epsilon = 0.0;
        const FourierState s = FourierState::from_modes(box, {{n0, a}});
        const SpectralMap r = rhs(s, cfg);
        CHECK(std::abs(r.at(packed::encode(n0)) - Complex(0, -4.0) * a) <= 1e-15);
    }

    SUBCASE("general-power sign flips the nonlinear term") {
        cfg.sign = ProblemConfig::Sign::gdnls_plus;
        const FourierState s = FourierState::from_modes(box, {{n0, a}});
        const SpectralMap r = rhs(s, cfg);
        const Complex want = Complex(0, -4.0) * a - Complex(0, cfg.epsilon * 2.0) * std::norm(a) * a;
        CHECK(std::abs(r.at(packed::encode(n0)) - want) <= 1e-15);
    }
}
