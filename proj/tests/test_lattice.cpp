#include <cmath>
#include <set>

#include "doctest.h"

#include "qpdnls/lattice.hpp"

using namespace qpdnls;

namespace {

// deterministic generator for the property checks
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = s;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

LatticePoint random_point(Rng& rng, int nu, std::int64_t span) {
    std::vector<Coord> c;
    for (int i = 0; i < nu; ++i) c.push_back(rng.range(-span, span));
    return LatticePoint(std::move(c));
}

} // namespace

TEST_CASE("pairing matches the dot product") {
    CHECK(pairing(LatticePoint::zero(3), FrequencyVector({1.0, 2.0, 3.0})) == 0.0);
    CHECK(pairing(LatticePoint({1, 1}), FrequencyVector({1.0, std::sqrt(2.0)})) ==
          doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(pairing(LatticePoint({-3}), FrequencyVector({1.0})) == -3.0);
    CHECK_THROWS_AS(pairing(LatticePoint({1, 2}), FrequencyVector({1.0})), ConfigError);
}

TEST_CASE("l1 norm") {
    CHECK(LatticePoint({0, 0}).l1() == 0);
    CHECK(LatticePoint({2, -3}).l1() == 5);
    // concatenation convention: the norm of a tuple is the sum of slot norms
    CHECK(LatticePoint({1}).l1() + LatticePoint({-2}).l1() + LatticePoint({3}).l1() == 6);
}

TEST_CASE("alternating sum") {
    const std::vector<LatticePoint> single = {LatticePoint({5})};
    CHECK(cas(single) == LatticePoint({5}));
    const std::vector<LatticePoint> three = {LatticePoint({1}), LatticePoint({2}), LatticePoint({3})};
    CHECK(cas(three) == LatticePoint({2}));
    const std::vector<LatticePoint> planar = {LatticePoint({1, 0}), LatticePoint({1, 0}),
                                              LatticePoint({0, 2})};
    CHECK(cas(planar) == LatticePoint({0, 2}));
    const std::vector<LatticePoint> empty;
    CHECK_THROWS_AS(cas(empty), UsageError);
}

TEST_CASE("alternating sum triangle inequality and pairing bound") {
    Rng rng(7);
    const FrequencyVector omega({1.0, std::sqrt(2.0), std::sqrt(3.0)});
    for (int trial = 0; trial < 200; ++trial) {
        const int nu = 1 + static_cast<int>(rng.next() % 3);
        const int r = 1 + static_cast<int>(rng.next() % 6);
        std::vector<LatticePoint> pts;
        std::int64_t sum_l1 = 0;
        for (int j = 0; j < r; ++j) {
            pts.push_back(random_point(rng, nu, 20));
            sum_l1 += pts.back().l1();
        }
        const LatticePoint c = cas(pts);
        CHECK(c.l1() <= sum_l1);
        const FrequencyVector w(std::vector<double>(omega.omega.begin(), omega.omega.begin() + nu));
        CHECK(std::abs(pairing(c, w)) <= w.linf() * static_cast<double>(sum_l1) + 1e-9);
    }
}

TEST_CASE("truncation box enumeration is a bijection onto the ball") {
    for (int nu = 1; nu <= 3; ++nu) {
        for (std::int64_t radius = 0; radius <= 10; ++radius) {
            const TruncationBox box(nu, radius);
            const std::vector<LatticePoint> pts = box.enumerate();
            CHECK(pts.size() == TruncationBox::cardinality(nu, radius));
            std::set<std::vector<Coord>> seen;
            for (const LatticePoint& p : pts) {
                CHECK(p.l1() <= radius);
                CHECK(seen.insert(p.coords).second);
            }
            // brute-force grid scan over the enclosing cube
            std::uint64_t count = 0;
            std::vector<Coord> cur(static_cast<std::size_t>(nu), -radius);
            while (true) {
                std::int64_t l1 = 0;
                for (Coord c : cur) l1 += c < 0 ? -c : c;
                if (l1 <= radius) ++count;
                int i = 0;
                for (; i < nu; ++i) {
                    if (++cur[static_cast<std::size_t>(i)] <= radius) break;
                    cur[static_cast<std::size_t>(i)] = -radius;
                }
                if (i == nu) break;
            }
            CHECK(count == pts.size());
        }
    }
}

TEST_CASE("point text form round trip") {
    CHECK(LatticePoint({1, -2}).str() == "[1,-2]");
    CHECK(LatticePoint::parse("[1,-2]") == LatticePoint({1, -2}));
    CHECK(LatticePoint::parse("[0]") == LatticePoint({0}));
    CHECK_THROWS_AS(LatticePoint::parse("1,-2"), ConfigError);
    CHECK_THROWS_AS(LatticePoint::parse("[a]"), ConfigError);
}

TEST_CASE("packed keys preserve order and arithmetic") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int nu = 1 + static_cast<int>(rng.next() % 3);
        const LatticePoint a = random_point(rng, nu, 1000);
        const LatticePoint b = random_point(rng, nu, 1000);
        const LatticePoint c = random_point(rng, nu, 1000);
        CHECK(packed::decode(packed::encode(a), nu) == a);
        CHECK(packed::encode(a) - packed::encode(b) + packed::encode(c) ==
              packed::encode((a - b) + c));
        CHECK((packed::encode(a) < packed::encode(b)) == (a.coords < b.coords));
        CHECK(packed::l1(packed::encode(a), nu) == a.l1());
    }
}

TEST_CASE("near-resonance heuristic") {
    CHECK(FrequencyVector({1.0, 0.5}).near_resonances().size() == 1);
    CHECK(FrequencyVector({1.0, std::sqrt(2.0)}).near_resonances().empty());
    CHECK_THROWS_AS(FrequencyVector({1.0, 0.0}), ConfigError);
}
