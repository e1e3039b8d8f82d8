#include "qpdnls/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace qpdnls {

std::string LatticePoint::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(coords[i]);
    }
    out += "]";
    return out;
}

LatticePoint LatticePoint::parse(std::string_view text) {
    std::size_t a = text.find('[');
    std::size_t b = text.rfind(']');
    if (a == std::string_view::npos || b == std::string_view::npos || b <= a)
        throw ConfigError("lattice point must look like [1,-2], got: " + std::string(text));
    std::vector<Coord> coords;
    std::string body(text.substr(a + 1, b - a - 1));
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty() && coords.empty() && comma == std::string::npos) break; // "[]" is dimension zero, rejected below
        char* end = nullptr;
        long long v = std::strtoll(tok.c_str(), &end, 10);
        if (end == tok.c_str() || (end && *end != '\0'))
            throw ConfigError("bad integer '" + tok + "' in lattice point " + std::string(text));
        coords.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (coords.empty())
        throw ConfigError("lattice point needs at least one coordinate: " + std::string(text));
    return LatticePoint(std::move(coords));
}

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    if (a.dim() != b.dim()) throw ConfigError("lattice point dimension mismatch in +");
    LatticePoint r = a;
    for (int i = 0; i < a.dim(); ++i) r.coords[i] += b.coords[i];
    return r;
}

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    if (a.dim() != b.dim()) throw ConfigError("lattice point dimension mismatch in -");
    LatticePoint r = a;
    for (int i = 0; i < a.dim(); ++i) r.coords[i] -= b.coords[i];
    return r;
}

FrequencyVector::FrequencyVector(std::vector<double> w) : omega(std::move(w)) {
    if (omega.empty()) throw ConfigError("frequency vector must have at least one entry");
    for (double x : omega)
        if (x == 0.0 || !std::isfinite(x)) throw ConfigError("frequency vector entries must be finite and nonzero");
}

double FrequencyVector::linf() const {
    double m = 0.0;
    for (double x : omega) m = std::max(m, std::abs(x));
    return m;
}

std::vector<FrequencyVector::Resonance> FrequencyVector::near_resonances() const {
    std::vector<Resonance> out;
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double ratio = omega[static_cast<std::size_t>(i)] / omega[static_cast<std::size_t>(j)];
            for (long q = 1; q <= 64; ++q) {
                const double pd = ratio * static_cast<double>(q);
                const long p = std::lround(pd);
                if (p == 0 || std::labs(p) > 64) continue;
                if (std::abs(ratio - static_cast<double>(p) / static_cast<double>(q)) < 1e-12) {
                    out.push_back(Resonance{i, j, p, q});
                    break;
                }
            }
        }
    }
    return out;
}

double pairing(const LatticePoint& n, const FrequencyVector& omega) {
    if (n.dim() != omega.dim())
        throw ConfigError("pairing: point dimension " + std::to_string(n.dim()) +
                          " does not match frequency dimension " + std::to_string(omega.dim()));
    double s = 0.0;
    for (int i = 0; i < n.dim(); ++i)
        s += static_cast<double>(n.coords[static_cast<std::size_t>(i)]) * omega.omega[static_cast<std::size_t>(i)];
    return s;
}

LatticePoint cas(std::span<const LatticePoint> points) {
    if (points.empty()) throw UsageError("cas: empty tuple");
    LatticePoint r = points[0];
    for (std::size_t j = 1; j < points.size(); ++j) {
        if (points[j].dim() != r.dim()) throw ConfigError("cas: mixed dimensions in tuple");
        for (int i = 0; i < r.dim(); ++i) {
            const Coord c = points[j].coords[static_cast<std::size_t>(i)];
            r.coords[static_cast<std::size_t>(i)] += (j % 2 == 1) ? -c : c;
        }
    }
    return r;
}

TruncationBox::TruncationBox(int nu, std::int64_t radius) : nu_(nu), radius_(radius) {
    if (nu < 1) throw ConfigError("box dimension must be >= 1");
    if (radius < 0) throw ConfigError("box radius must be >= 0");
    if (radius >= packed::kCoordLimit) throw ConfigError("box radius too large for packed keys");
}

namespace {

void enumerate_rec(int nu, std::int64_t budget, std::vector<Coord>& prefix,
                   std::vector<LatticePoint>& out) {
    if (static_cast<int>(prefix.size()) == nu) {
        out.emplace_back(prefix);
        return;
    }
    for (Coord c = -budget; c <= budget; ++c) {
        prefix.push_back(c);
        enumerate_rec(nu, budget - (c < 0 ? -c : c), prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<LatticePoint> TruncationBox::enumerate() const {
    std::vector<LatticePoint> out;
    out.reserve(cardinality(nu_, radius_));
    std::vector<Coord> prefix;
    enumerate_rec(nu_, radius_, prefix, out);
    return out;
}

std::uint64_t TruncationBox::cardinality(int nu, std::int64_t radius) {
    // sum over the number k of nonzero coordinates
    std::uint64_t total = 0;
    const std::int64_t kmax = std::min<std::int64_t>(nu, radius);
    for (std::int64_t k = 0; k <= kmax; ++k) {
        std::uint64_t term = 1;
        for (std::int64_t i = 0; i < k; ++i) term *= 2;                              // sign choices
        for (std::int64_t i = 0; i < k; ++i) term = term * static_cast<std::uint64_t>(nu - i) / static_cast<std::uint64_t>(i + 1);
        std::uint64_t comb = 1;
        for (std::int64_t i = 0; i < k; ++i) comb = comb * static_cast<std::uint64_t>(radius - i) / static_cast<std::uint64_t>(i + 1);
        total += term * comb;
    }
    return total;
}

namespace packed {

std::int64_t encode(const LatticePoint& p) {
    std::int64_t key = 0;
    for (Coord c : p.coords) key = (key << kShift) + c;
    return key;
}

LatticePoint decode(std::int64_t key, int nu) {
    std::vector<Coord> coords(static_cast<std::size_t>(nu));
    for (int i = nu - 1; i >= 0; --i) {
        // symmetric remainder in (-kBase/2, kBase/2]
        std::int64_t r = key % kBase;
        if (r > kCoordLimit) r -= kBase;
        if (r < -kCoordLimit) r += kBase;
        coords[static_cast<std::size_t>(i)] = r;
        key = (key - r) >> kShift;
    }
    return LatticePoint(std::move(coords));
}

std::int64_t l1(std::int64_t key, int nu) {
    std::int64_t s = 0;
    for (int i = 0; i < nu; ++i) {
        std::int64_t r = key % kBase;
        if (r > kCoordLimit) r -= kBase;
        if (r < -kCoordLimit) r += kBase;
        s += r < 0 ? -r : r;
        key = (key - r) >> kShift;
    }
    return s;
}

} // namespace packed

} // namespace qpdnls
