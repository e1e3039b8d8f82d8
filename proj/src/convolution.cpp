#include <cmath>

#include "qpdnls/errors.hpp"
#include "qpdnls/solver.hpp"

namespace qpdnls {

SpectralMap alternating_convolution_mixed(std::span<const FourierState* const> factors,
                                          const TruncationBox& out_box, bool error_on_clip,
                                          const std::string& clip_who) {
    if (factors.empty() || factors.size() % 2 == 0)
        throw UsageError("alternating convolution needs an odd factor count");
    const int nu = factors[0]->nu();
    for (const FourierState* f : factors)
        if (f->nu() != nu) throw ConfigError("alternating convolution: mixed dimensions");

    // partial alternating sums after the first factor
    SpectralMap partial;
    for (const auto& [key, value] : factors[0]->data()) {
        if (value == Complex(0.0, 0.0)) continue;
        partial[key] = value;
    }

    const std::size_t count = factors.size();
    for (std::size_t j = 1; j < count; ++j) {
        const bool conj = (j % 2 == 1); // 0-based position j is 1-based factor j+1
        const std::int64_t sign = conj ? -1 : +1;
        const bool last = (j + 1 == count);
        SpectralMap next;
        for (const auto& [skey, svalue] : partial) {
            for (const auto& [fkey, fvalue] : factors[j]->data()) {
                if (fvalue == Complex(0.0, 0.0)) continue;
                const std::int64_t out_key = skey + sign * fkey;
                if (last && packed::l1(out_key, nu) > out_box.radius()) {
                    if (error_on_clip)
                        throw BudgetError("support overflow in " + clip_who + ": mode " +
                                              packed::decode(out_key, nu).str() + " outside box radius " +
                                              std::to_string(out_box.radius()),
                                          static_cast<double>(packed::l1(out_key, nu)),
                                          static_cast<double>(out_box.radius()));
                    continue;
                }
                next[out_key] += svalue * (conj ? std::conj(fvalue) : fvalue);
            }
        }
        partial = std::move(next);
    }
    return partial;
}

SpectralMap alternating_convolution(const FourierState& state, int p, const TruncationBox& out_box,
                                    bool error_on_clip, const std::string& clip_who) {
    if (p < 1) throw UsageError("nonlinearity power p must be >= 1");
    std::vector<const FourierState*> factors(static_cast<std::size_t>(2 * p + 1), &state);
    return alternating_convolution_mixed(factors, out_box, error_on_clip, clip_who);
}

double sign_factor(ProblemConfig::Sign sign) {
    return sign == ProblemConfig::Sign::dnls_minus ? 1.0 : -1.0;
}

SpectralMap rhs(const FourierState& state, const ProblemConfig& config) {
    const SpectralMap conv = alternating_convolution(state, config.p, state.box());
    const double sgn = sign_factor(config.sign);
    SpectralMap out;
    for (const auto& [key, value] : state.data()) {
        const double freq = pairing(packed::decode(key, config.nu), config.omega);
        out[key] = Complex(0.0, -freq * freq) * value;
    }
    for (const auto& [key, value] : conv) {
        const double freq = pairing(packed::decode(key, config.nu), config.omega);
        out[key] += Complex(0.0, sgn * config.epsilon * freq) * value;
    }
    return out;
}

FourierState linear_solution(const FourierState& initial, const FrequencyVector& omega, double t) {
    FourierState out(initial.time() + t, initial.box());
    for (const auto& [key, value] : initial.data()) {
        const double freq = pairing(packed::decode(key, initial.nu()), omega);
        out.data()[key] = std::polar(1.0, -freq * freq * t) * value;
    }
    return out;
}

namespace {

// D(m) = sum over a - b = m of c(a) conj(c(b)); the building block of the
// quartic and sextic constrained sums.
SpectralMap pair_map(const FourierState& state) {
    SpectralMap d;
    for (const auto& [ka, va] : state.data())
        for (const auto& [kb, vb] : state.data()) d[ka - kb] += va * std::conj(vb);
    return d;
}

} // namespace

Monitors conserved_quantities(const FourierState& state, const FrequencyVector& omega) {
    const int nu = state.nu();
    Monitors mon;
    double quad_h = 0.0, quad_e = 0.0;
    for (const auto& [key, value] : state.data()) {
        const double freq = pairing(packed::decode(key, nu), omega);
        const double a2 = std::norm(value);
        mon.M += a2;
        quad_h += freq * a2;
        quad_e += freq * freq * a2;
    }

    const SpectralMap d = pair_map(state);

    // quartic: sum over n1-n2+n3-n4 = 0 equals sum_m |D(m)|^2
    double quartic = 0.0;
    for (const auto& [key, value] : d) quartic += std::norm(value);

    // quartic with the -i<n4> factor from the u ubar u conj(u_x) term
    Complex e4(0.0, 0.0);
    {
        SpectralMap dw; // sum over n3-n4 = v of (-i<n4>) c(n3) conj(c(n4))
        for (const auto& [ka, va] : state.data())
            for (const auto& [kb, vb] : state.data()) {
                const double freq = pairing(packed::decode(kb, nu), omega);
                dw[ka - kb] += Complex(0.0, -freq) * va * std::conj(vb);
            }
        for (const auto& [key, value] : d) {
            auto it = dw.find(-key);
            if (it != dw.end()) e4 += value * it->second;
        }
    }

    // sextic: sum over n1-n2+n3-n4+n5-n6 = 0 equals sum over m+m'+m''=0 of
    // D(m) D(m') D(m'')
    double sextic = 0.0;
    {
        Complex acc(0.0, 0.0);
        for (const auto& [k1, v1] : d)
            for (const auto& [k2, v2] : d) {
                auto it = d.find(-k1 - k2);
                if (it != d.end()) acc += v1 * v2 * it->second;
            }
        sextic = acc.real();
    }

    mon.H = quad_h + 0.5 * quartic;
    mon.E = quad_e + 1.5 * e4.imag() + 0.5 * sextic;
    return mon;
}

double quartic_sum_direct(const FourierState& state) {
    const auto support = state.support();
    double acc = 0.0;
    for (const LatticePoint& n1 : support)
        for (const LatticePoint& n2 : support)
            for (const LatticePoint& n3 : support) {
                const LatticePoint n4 = (n1 - n2) + n3;
                const Complex v = state.amplitude(n1) * std::conj(state.amplitude(n2)) *
                                  state.amplitude(n3);
                if (!state.box().contains(n4)) continue;
                acc += (v * std::conj(state.amplitude(n4))).real();
            }
    return acc;
}

Monitors conserved_quantities_direct(const FourierState& state, const FrequencyVector& omega) {
    const auto support = state.support();
    Monitors mon;
    double quad_h = 0.0, quad_e = 0.0;
    for (const LatticePoint& n : support) {
        const double freq = pairing(n, omega);
        const double a2 = std::norm(state.amplitude(n));
        mon.M += a2;
        quad_h += freq * a2;
        quad_e += freq * freq * a2;
    }
    double quartic = 0.0;
    Complex e4(0.0, 0.0);
    for (const LatticePoint& n1 : support)
        for (const LatticePoint& n2 : support)
            for (const LatticePoint& n3 : support) {
                const LatticePoint n4 = (n1 - n2) + n3;
                const Complex prod = state.amplitude(n1) * std::conj(state.amplitude(n2)) *
                                     state.amplitude(n3) * std::conj(state.amplitude(n4));
                quartic += prod.real();
                e4 += Complex(0.0, -pairing(n4, omega)) * prod;
            }
    double sextic = 0.0;
    for (const LatticePoint& n1 : support)
        for (const LatticePoint& n2 : support)
            for (const LatticePoint& n3 : support)
                for (const LatticePoint& n4 : support)
                    for (const LatticePoint& n5 : support) {
                        const LatticePoint n6 = (((n1 - n2) + n3) - n4) + n5;
                        const Complex prod = state.amplitude(n1) * std::conj(state.amplitude(n2)) *
                                             state.amplitude(n3) * std::conj(state.amplitude(n4)) *
                                             state.amplitude(n5) * std::conj(state.amplitude(n6));
                        sextic += prod.real();
                    }
    mon.H = quad_h + 0.5 * quartic;
    mon.E = quad_e + 1.5 * e4.imag() + 0.5 * sextic;
    return mon;
}

double weighted_sup_diff(const FourierState& a, const FourierState& b, double rate) {
    const int nu = a.nu();
    double sup = 0.0;
    auto scan = [&](const FourierState& x, const FourierState& y) {
        for (const auto& [key, value] : x.data()) {
            const Complex diff = value - (y.data().count(key) ? y.data().at(key) : Complex(0.0, 0.0));
            const double w = std::exp(rate * static_cast<double>(packed::l1(key, nu)));
            sup = std::max(sup, w * std::abs(diff));
        }
    };
    scan(a, b);
    scan(b, a);
    return sup;
}

} // namespace qpdnls
