#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpdnls/errors.hpp"

namespace qpdnls {

using Coord = std::int64_t;

// A point n in Z^nu indexing one quasi-periodic Fourier mode.
// Immutable after construction; |n| always means the l1 norm.
struct LatticePoint {
    std::vector<Coord> coords;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<Coord> c) : coords(std::move(c)) {}
    static LatticePoint zero(int nu) { return LatticePoint(std::vector<Coord>(static_cast<std::size_t>(nu), 0)); }

    int dim() const { return static_cast<int>(coords.size()); }

    std::int64_t l1() const {
        std::int64_t s = 0;
        for (Coord c : coords) s += c < 0 ? -c : c;
        return s;
    }

    // Text form: comma separated integers in square brackets, e.g. [1,-2].
    std::string str() const;
    static LatticePoint parse(std::string_view text);

    friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b);
    friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b);
    friend bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.coords == b.coords; }
    friend bool operator<(const LatticePoint& a, const LatticePoint& b) { return a.coords < b.coords; }
};

// The nu base frequencies. Rational independence is a declared assumption;
// near_resonances() is a heuristic screen for accidental rational ratios.
struct FrequencyVector {
    std::vector<double> omega;

    FrequencyVector() = default;
    explicit FrequencyVector(std::vector<double> w);

    int dim() const { return static_cast<int>(omega.size()); }

    // |omega| in all analytic constants is the sup norm.
    double linf() const;

    // Pairs (i, j, p, q) with |omega_i/omega_j - p/q| < 1e-12, |p|,|q| <= 64.
    struct Resonance {
        int i, j;
        long p, q;
    };
    std::vector<Resonance> near_resonances() const;
};

// <n> = n . omega
double pairing(const LatticePoint& n, const FrequencyVector& omega);

// Component-wise alternating sum m1 - m2 + m3 - ...
LatticePoint cas(std::span<const LatticePoint> points);

// Finite computability window: the l1 ball |n|_1 <= radius in Z^nu.
class TruncationBox {
public:
    TruncationBox(int nu, std::int64_t radius);

    int nu() const { return nu_; }
    std::int64_t radius() const { return radius_; }

    bool contains(const LatticePoint& p) const {
        return p.dim() == nu_ && p.l1() <= radius_;
    }

    // All members in lexicographic coordinate order.
    std::vector<LatticePoint> enumerate() const;

    // Closed-form l1-ball count: sum_k 2^k C(nu,k) C(radius,k).
    static std::uint64_t cardinality(int nu, std::int64_t radius);

private:
    int nu_;
    std::int64_t radius_;
};

// Packed lattice keys. Coordinates are stored as fixed-width signed digits,
// most significant first, so integer order on keys equals lexicographic
// order on coordinates, and key arithmetic is component-wise as long as
// every intermediate coordinate stays below kCoordLimit.
namespace packed {

inline constexpr int kShift = 21;
inline constexpr std::int64_t kBase = std::int64_t(1) << kShift;
inline constexpr std::int64_t kCoordLimit = kBase / 2; // 2^20

std::int64_t encode(const LatticePoint& p);
LatticePoint decode(std::int64_t key, int nu);

inline std::int64_t encode_checked(const LatticePoint& p) {
    for (Coord c : p.coords) {
        if (c <= -kCoordLimit || c >= kCoordLimit)
            throw ConfigError("lattice coordinate out of packed range: " + p.str());
    }
    return encode(p);
}

std::int64_t l1(std::int64_t key, int nu);

} // namespace packed

} // namespace qpdnls
